#include "riskband/loss_model.hpp"

#include "riskband/error.hpp"
#include "riskband/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace riskband {

LossMatrix::LossMatrix(ParameterGrid grid, RowMatrix values, Orientation orientation)
    : grid_(std::move(grid)), values_(std::move(values)), orientation_(orientation) {
  if (values_.rows() < 1) fail(ErrorCode::InvalidArgument, "loss matrix has no rows");
  if (values_.cols() != grid_.size())
    fail(ErrorCode::InvalidArgument, "loss matrix has " + std::to_string(values_.cols()) +
                                         " columns but the grid has " +
                                         std::to_string(grid_.size()) + " points");
  for (Index i = 0; i < values_.rows(); ++i) {
    for (Index j = 0; j < values_.cols(); ++j) {
      const double v = values_(i, j);
      if (!(v >= 0.0 && v <= 1.0))
        fail(ErrorCode::Domain, "loss (" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") = " + std::to_string(v) + " is outside [0,1]");
    }
  }
}

LossMatrix LossMatrix::with_orientation(Orientation orientation) const {
  LossMatrix copy = *this;
  copy.orientation_ = orientation;
  return copy;
}

LossMatrix LossMatrix::take_rows(std::span<const Index> rows) const {
  RowMatrix out(static_cast<Index>(rows.size()), values_.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] < 0 || rows[r] >= values_.rows())
      fail(ErrorCode::InvalidArgument, "row index out of range");
    out.row(static_cast<Index>(r)) = values_.row(rows[r]);
  }
  return LossMatrix(grid_, std::move(out), orientation_);
}

ValidationReport validate(const LossMatrix& matrix, double tolerance) {
  const RowMatrix& v = matrix.values();
  for (Index i = 0; i < v.rows(); ++i) {
    for (Index j = 0; j < v.cols(); ++j) {
      if (!(v(i, j) >= 0.0 && v(i, j) <= 1.0))
        return {false, i, j, "entry outside [0,1]"};
    }
  }
  if (matrix.orientation() == Orientation::Unconstrained) return {};
  const bool nonincreasing = matrix.orientation() == Orientation::NonIncreasing;
  for (Index i = 0; i < v.rows(); ++i) {
    for (Index j = 1; j < v.cols(); ++j) {
      const double step = v(i, j) - v(i, j - 1);
      if (nonincreasing ? step > tolerance : step < -tolerance) {
        return {false, i, j,
                std::string("row is not ") + std::string(to_string(matrix.orientation()))};
      }
    }
  }
  return {};
}

Orientation detect_orientation(const RowMatrix& values) {
  bool down = true;
  bool up = true;
  for (Index i = 0; i < values.rows() && (down || up); ++i) {
    for (Index j = 1; j < values.cols(); ++j) {
      if (values(i, j) > values(i, j - 1)) down = false;
      if (values(i, j) < values(i, j - 1)) up = false;
    }
  }
  if (down) return Orientation::NonIncreasing;
  if (up) return Orientation::NonDecreasing;
  return Orientation::Unconstrained;
}

BinaryScorePanel::BinaryScorePanel(RowMatrix scores, RowMatrix labels)
    : scores_(std::move(scores)), labels_(std::move(labels)) {
  if (scores_.rows() != labels_.rows() || scores_.cols() != labels_.cols())
    fail(ErrorCode::InvalidArgument, "score and label panels differ in shape");
  if (scores_.rows() < 1 || scores_.cols() < 1)
    fail(ErrorCode::InvalidArgument, "score panel is empty");
  if (!((scores_.array() >= 0.0) && (scores_.array() <= 1.0)).all())
    fail(ErrorCode::Domain, "scores must lie in [0,1]");
  if (!((labels_.array() == 0.0) || (labels_.array() == 1.0)).all())
    fail(ErrorCode::Domain, "labels must be 0 or 1");
}

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::FNP: return "FNP";
    case LossKind::FPP: return "FPP";
    case LossKind::FDP: return "FDP";
    case LossKind::SetSize: return "SetSize";
  }
  return "?";
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "FNP" || name == "fnp") return LossKind::FNP;
  if (name == "FPP" || name == "fpp") return LossKind::FPP;
  if (name == "FDP" || name == "fdp") return LossKind::FDP;
  if (name == "SetSize" || name == "setsize" || name == "set-size") return LossKind::SetSize;
  fail(ErrorCode::InvalidArgument, "unknown loss kind '" + std::string(name) + "'");
}

LossMatrix threshold_losses(const BinaryScorePanel& panel, const ParameterGrid& grid,
                            LossKind kind) {
  const Vector& t = grid.values();
  if (t.minCoeff() < 0.0 || t.maxCoeff() > 1.0)
    fail(ErrorCode::Domain, "classification grid values must lie in [0,1]");

  const Index n = panel.samples();
  const Index classes = panel.classes();
  const Index m = grid.size();
  RowMatrix out(n, m);

  // Per sample, sweep classes in decreasing score order; as t grows the
  // cutoff 1 - t falls and the predicted set only grows.
  std::vector<std::pair<double, bool>> ranked(static_cast<std::size_t>(classes));
  for (Index i = 0; i < n; ++i) {
    Index positives = 0;
    for (Index k = 0; k < classes; ++k) {
      const bool label = panel.labels()(i, k) == 1.0;
      positives += label ? 1 : 0;
      ranked[static_cast<std::size_t>(k)] = {panel.scores()(i, k), label};
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    const Index negatives = classes - positives;

    std::size_t next = 0;
    Index predicted = 0;
    Index true_positive = 0;
    for (Index j = 0; j < m; ++j) {
      const double cutoff = 1.0 - t[j];
      while (next < ranked.size() && ranked[next].first > cutoff) {
        ++predicted;
        true_positive += ranked[next].second ? 1 : 0;
        ++next;
      }
      const Index false_positive = predicted - true_positive;
      const Index false_negative = positives - true_positive;
      double loss = 0.0;
      switch (kind) {
        case LossKind::FNP:
          loss = static_cast<double>(false_negative) /
                 static_cast<double>(std::max<Index>(1, positives));
          break;
        case LossKind::FPP:
          loss = static_cast<double>(false_positive) /
                 static_cast<double>(std::max<Index>(1, negatives));
          break;
        case LossKind::FDP:
          loss = static_cast<double>(false_positive) /
                 static_cast<double>(std::max<Index>(1, predicted));
          break;
        case LossKind::SetSize:
          loss = static_cast<double>(predicted) / static_cast<double>(classes);
          break;
      }
      out(i, j) = loss;
    }
  }

  Orientation orientation = Orientation::Unconstrained;
  if (kind == LossKind::FNP) orientation = Orientation::NonIncreasing;
  if (kind == LossKind::FPP || kind == LossKind::SetSize) orientation = Orientation::NonDecreasing;
  return LossMatrix(grid, std::move(out), orientation);
}

LossMatrix monotonize(const LossMatrix& matrix, Extremum direction) {
  if (direction == Extremum::RunningMin) {
    return LossMatrix(matrix.grid(), kernels::running_extremum<true>(matrix.values()),
                      Orientation::NonIncreasing);
  }
  return LossMatrix(matrix.grid(), kernels::running_extremum<false>(matrix.values()),
                    Orientation::NonDecreasing);
}

BatchResult batch(const LossMatrix& matrix, Index k) {
  if (k <= 0) fail(ErrorCode::Domain, "batch size must be positive");
  if (k > matrix.samples())
    fail(ErrorCode::Domain, "batch size exceeds the number of samples");
  const Index blocks = matrix.samples() / k;
  RowMatrix out(blocks, matrix.points());
  for (Index b = 0; b < blocks; ++b) {
    out.row(b) = matrix.values().middleRows(b * k, k).colwise().sum() / static_cast<double>(k);
  }
  return {LossMatrix(matrix.grid(), std::move(out), matrix.orientation()),
          matrix.samples() - blocks * k};
}

}  // namespace riskband
