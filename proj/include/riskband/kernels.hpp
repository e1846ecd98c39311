#pragma once

// Small expression-level building blocks shared by the modules. All of them
// accept any Eigen dense expression and are generic in the scalar type.

#include "riskband/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>

namespace riskband::kernels {

/// Row-wise running minimum (Min = true) or maximum along the columns.
template <bool Min, typename Derived>
typename Derived::PlainObject running_extremum(const Eigen::DenseBase<Derived>& rows) {
  typename Derived::PlainObject out = rows.derived();
  for (Index i = 0; i < out.rows(); ++i) {
    for (Index j = 1; j < out.cols(); ++j) {
      out(i, j) = Min ? std::min(out(i, j), out(i, j - 1)) : std::max(out(i, j), out(i, j - 1));
    }
  }
  return out;
}

/// Mean computed relative to the first element, x0 + sum(x - x0) / n. Exact
/// for constant inputs, which keeps zero-variance columns exactly degenerate.
template <typename Derived>
typename Derived::Scalar anchored_mean(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Scalar anchor = x(0);
  Scalar acc(0);
  for (Index i = 0; i < x.size(); ++i) acc += x(i) - anchor;
  return anchor + acc / static_cast<Scalar>(x.size());
}

/// Column means of a matrix expression, one anchored mean per column.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> column_means(
    const Eigen::DenseBase<Derived>& m) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(m.cols());
  for (Index j = 0; j < m.cols(); ++j) out(j) = anchored_mean(m.col(j));
  return out;
}

/// True when every entry of the column equals its first entry.
template <typename Derived>
bool is_constant(const Eigen::DenseBase<Derived>& x) {
  return x.size() == 0 || (x.derived().array() == x(0)).all();
}

/// Supremum of `values` over the subset, with the given sign; 0 on the empty set.
template <typename Derived>
typename Derived::Scalar signed_sup(const Eigen::DenseBase<Derived>& values,
                                    const IndexSet& subset, Sign sign) {
  using Scalar = typename Derived::Scalar;
  if (subset.empty()) return Scalar(0);
  Scalar plus = -std::numeric_limits<Scalar>::infinity();
  Scalar minus = -std::numeric_limits<Scalar>::infinity();
  for (Index j : subset) {
    plus = std::max(plus, values(j));
    minus = std::max(minus, -values(j));
  }
  switch (sign) {
    case Sign::Plus: return plus;
    case Sign::Minus: return minus;
    case Sign::TwoSided: return std::max(plus, minus);
  }
  return plus;
}

template <typename Derived>
typename Derived::PlainObject clamp_unit(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return x.derived().cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
}

}  // namespace riskband::kernels
