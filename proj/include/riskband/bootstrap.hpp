#pragma once

#include "riskband/bounds.hpp"
#include "riskband/empirical.hpp"
#include "riskband/loss_model.hpp"
#include "riskband/parallel.hpp"
#include "riskband/rng.hpp"
#include "riskband/types.hpp"

#include <Eigen/SparseCore>

#include <cstdint>
#include <span>
#include <vector>

namespace riskband {

/// Multinomial(n; 1/n, ..., 1/n) row counts of bootstrap replicate
/// `replicate`. Depends only on (seed.master, replicate).
Eigen::VectorXi resample_counts(Index n, const SeedRecord& seed, std::uint64_t replicate);

/// Sorted supremum statistics of the bootstrap process
/// sqrt(n) (L*_n - L_n) over a grid subset.
class BootstrapSupDistribution {
 public:
  BootstrapSupDistribution(std::vector<double> values, Sign sign, IndexSet subset,
                           SeedRecord seed);

  const std::vector<double>& sorted_values() const noexcept { return values_; }
  std::size_t replicates() const noexcept { return values_.size(); }
  Sign sign() const noexcept { return sign_; }
  const IndexSet& subset() const noexcept { return subset_; }
  const SeedRecord& seed() const noexcept { return seed_; }

 private:
  std::vector<double> values_;
  Sign sign_;
  IndexSet subset_;
  SeedRecord seed_;
};

/// Precomputed state for resampling one loss matrix many times.
///
/// Replicate b reweights the rows with w = counts_b - 1 so that
/// sum_i w_i l_i(t) / sqrt(n) = sqrt(n) (L*(t) - L(t)). When most row
/// increments along t are zero (step-function losses) the products are formed
/// from the sparse column differences and prefix-summed, costing O(nnz + m)
/// per replicate instead of O(n m). Columns that are constant across rows have
/// an identically zero process and are pinned to 0 exactly.
class ResamplingEngine {
 public:
  explicit ResamplingEngine(const LossMatrix& matrix);

  Index samples() const noexcept { return n_; }
  Index points() const noexcept { return m_; }
  bool uses_jump_representation() const noexcept { return sparse_; }

  /// Suprema for replicates first .. first + out.size() - 1, unsorted.
  void suprema(const IndexSet& subset, Sign sign, const SeedRecord& seed, std::uint64_t first,
               std::span<double> out) const;

  BootstrapSupDistribution distribution(const IndexSet& subset, Sign sign, std::size_t replicates,
                                        const SeedRecord& seed,
                                        const ExecPolicy& policy = ExecPolicy{}) const;

 private:
  void sparse_suprema(const IndexSet& subset, Sign sign, const SeedRecord& seed,
                      std::uint64_t first, std::span<double> out) const;
  void dense_suprema(const IndexSet& subset, Sign sign, const SeedRecord& seed,
                     std::uint64_t first, std::span<double> out) const;

  Index n_;
  Index m_;
  bool sparse_ = false;
  std::vector<char> degenerate_;
  Eigen::SparseMatrix<double> jumps_;  // column j holds l(t_j) - l(t_{j-1})
  RowMatrix dense_;
};

BootstrapSupDistribution sup_distribution(const LossMatrix& matrix, const IndexSet& subset,
                                          Sign sign, std::size_t replicates,
                                          const SeedRecord& seed,
                                          const ExecPolicy& policy = ExecPolicy{});

/// 1-based order statistic min(B, ceil((B+1)(1-delta))), at least 1.
std::size_t quantile_rank(std::size_t replicates, double delta);

/// Conservative upper quantile: the order statistic of rank quantile_rank(B, delta).
double quantile_upper(const BootstrapSupDistribution& dist, double delta);

/// Risk-resampling band. The upper side uses the minus-sign supremum, the
/// lower side the plus-sign one, and two-sided bands the two-sided supremum.
ConfidenceBand rr_band(const LossMatrix& matrix, double delta, std::size_t replicates,
                       const SeedRecord& seed, Side side,
                       const ExecPolicy& policy = ExecPolicy{});

/// Half-width of the DKW band for an empirical CDF of B draws at level alpha.
double dkw_epsilon(std::size_t replicates, double alpha);

struct SuggestOptions {
  double dkw_alpha = 0.05;           ///< confidence of the DKW bracket
  double relative_tolerance = 0.01;  ///< bracket width target relative to q_boot
  std::size_t cap = std::size_t{1} << 20;
  Sign sign = Sign::Minus;
};

struct ReplicateSuggestion {
  std::size_t replicates = 0;
  double q_boot = 0.0;
  double bracket_low = 0.0;   ///< q^+, from the upper DKW envelope
  double bracket_high = 0.0;  ///< q^-, from the lower DKW envelope (may be +inf)
  double bracket_width = 0.0;
  bool criterion_met = false;
  bool degenerate = false;  ///< q_boot == 0: zero-width distribution
  bool cap_reached = false;
};

/// Doubles B from `initial` until the DKW-bracketed quantile interval is
/// narrower than relative_tolerance * q_boot, or the cap is hit. Replicates
/// already drawn are reused, since replicate b depends only on (seed, b).
ReplicateSuggestion suggest_B(const LossMatrix& matrix, double delta, const SeedRecord& seed,
                              std::size_t initial, const SuggestOptions& options = {},
                              const ExecPolicy& policy = ExecPolicy{});

}  // namespace riskband
