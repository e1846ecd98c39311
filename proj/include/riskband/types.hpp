#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace riskband {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Ordered thresholds t_1 < ... < t_m over which every curve, band and
/// supremum is evaluated. Validity statements only ever refer to these points.
class ParameterGrid {
 public:
  explicit ParameterGrid(Vector values);

  /// `size` evenly spaced points from `lo` to `hi` inclusive.
  static ParameterGrid linspace(double lo, double hi, Index size);

  Index size() const noexcept { return values_.size(); }
  double operator[](Index j) const { return values_[j]; }
  const Vector& values() const noexcept { return values_; }

  bool operator==(const ParameterGrid& other) const;

 private:
  Vector values_;
};

enum class Orientation { NonIncreasing, NonDecreasing, Unconstrained };
enum class Sign { Plus, Minus, TwoSided };
enum class Side { Upper, Lower, TwoSided };

enum class SetProvenance { FullGrid, Sublevel, AdjustedSublevel, Custom };

/// Sorted, duplicate-free subset of grid indices.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::vector<Index> indices, SetProvenance provenance);

  static IndexSet full(Index m);

  bool empty() const noexcept { return indices_.empty(); }
  std::size_t size() const noexcept { return indices_.size(); }
  bool contains(Index j) const;
  bool is_subset_of(const IndexSet& other) const;
  /// Throws unless every index lies in [0, m).
  void check_within(Index m) const;

  const std::vector<Index>& indices() const noexcept { return indices_; }
  SetProvenance provenance() const noexcept { return provenance_; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  bool operator==(const IndexSet& other) const { return indices_ == other.indices_; }

 private:
  std::vector<Index> indices_;
  SetProvenance provenance_ = SetProvenance::Custom;
};

IndexSet intersect(const IndexSet& a, const IndexSet& b);

std::string_view to_string(Orientation o);
std::string_view to_string(Sign s);
std::string_view to_string(Side s);
std::string_view to_string(SetProvenance p);

Orientation parse_orientation(std::string_view name);
Sign parse_sign(std::string_view name);
Side parse_side(std::string_view name);

}  // namespace riskband
