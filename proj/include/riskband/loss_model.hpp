#pragma once

#include "riskband/types.hpp"

#include <optional>
#include <span>
#include <string>

namespace riskband {

/// n samples x m grid points of losses in [0,1], with a declared
/// monotonicity orientation in t. Construction checks shape and bounds; the
/// orientation is a claim that `validate` checks.
class LossMatrix {
 public:
  LossMatrix(ParameterGrid grid, RowMatrix values, Orientation orientation);

  const ParameterGrid& grid() const noexcept { return grid_; }
  const RowMatrix& values() const noexcept { return values_; }
  Orientation orientation() const noexcept { return orientation_; }

  Index samples() const noexcept { return values_.rows(); }
  Index points() const noexcept { return values_.cols(); }

  LossMatrix with_orientation(Orientation orientation) const;
  /// New matrix whose rows are the given rows of this one (repeats allowed).
  LossMatrix take_rows(std::span<const Index> rows) const;

 private:
  ParameterGrid grid_;
  RowMatrix values_;
  Orientation orientation_;
};

struct ValidationReport {
  bool ok = true;
  std::optional<Index> row;     ///< first violating row (0-based)
  std::optional<Index> column;  ///< first violating column (0-based)
  std::string message;

  explicit operator bool() const noexcept { return ok; }
};

/// Checks bounds and the declared orientation. Violations are reported, never
/// thrown. `tolerance` relaxes only the monotonicity comparison.
ValidationReport validate(const LossMatrix& matrix, double tolerance = 0.0);

/// Strictest orientation every row satisfies (nonincreasing preferred on ties).
Orientation detect_orientation(const RowMatrix& values);

/// Model scores in [0,1] and binary labels for n samples and K classes.
class BinaryScorePanel {
 public:
  BinaryScorePanel(RowMatrix scores, RowMatrix labels);

  const RowMatrix& scores() const noexcept { return scores_; }
  const RowMatrix& labels() const noexcept { return labels_; }
  Index samples() const noexcept { return scores_.rows(); }
  Index classes() const noexcept { return scores_.cols(); }

 private:
  RowMatrix scores_;
  RowMatrix labels_;
};

enum class LossKind { FNP, FPP, FDP, SetSize };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view name);

/// Multi-label losses of the threshold classifier that predicts class k when
/// score_k > 1 - t. Denominators are guarded with max(1, .); SetSize divides by K.
LossMatrix threshold_losses(const BinaryScorePanel& panel, const ParameterGrid& grid,
                            LossKind kind);

enum class Extremum { RunningMin, RunningMax };

/// Replaces each row by its prefix minimum or maximum over s <= t.
LossMatrix monotonize(const LossMatrix& matrix, Extremum direction);

struct BatchResult {
  LossMatrix matrix;
  Index dropped_rows = 0;
};

/// Averages consecutive blocks of k rows. Trailing rows that do not fill a
/// block are dropped and counted.
BatchResult batch(const LossMatrix& matrix, Index k);

}  // namespace riskband
