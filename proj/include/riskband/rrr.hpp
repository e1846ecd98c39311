#pragma once

#include "riskband/bootstrap.hpp"
#include "riskband/bounds.hpp"
#include "riskband/loss_model.hpp"
#include "riskband/parallel.hpp"
#include "riskband/rng.hpp"

#include <optional>

namespace riskband {

struct RrrConfig {
  double r = 0.1;
  double delta_glob = 0.01;
  double delta_loc = 0.09;
  std::size_t replicates = 1000;
  SeedRecord seed;

  double delta() const noexcept { return delta_glob + delta_loc; }
  /// Throws unless r in [0,1], both deltas positive, their sum below 1, B >= 1.
  void check() const;
};

struct RrrResult {
  ConfidenceBand band;  ///< upper band, valid on `sublevel`
  double q_glob = 0.0;
  double q_loc = 0.0;
  double level = 0.0;                   ///< requested r
  std::optional<double> adjusted_level; ///< r' for the population variant
  IndexSet sublevel;                    ///< {t : L(t) <= level used}
  IndexSet adjusted_sublevel;           ///< {t : L(t) <= level used + 2 q_glob / sqrt(n)}
  bool empty_validity = false;
};

/// Restricted risk resampling.
///
/// 1. q_glob: conservative delta_glob quantile of the two-sided bootstrap
///    supremum over the whole grid.
/// 2. Adjusted sublevel set {t : L(t) <= r + 2 q_glob / sqrt(n)}.
/// 3. q_loc: delta_loc quantile of the minus-sign supremum over that set.
///
/// The upper band L + q_loc / sqrt(n) holds simultaneously on {t : L(t) <= r}
/// with asymptotic probability 1 - (delta_glob + delta_loc). Both bootstrap
/// passes reuse the same replicate streams, so each replicate's local
/// supremum is bounded by its global one. An empty sublevel set yields a band
/// with empty validity and a warning rather than an error.
RrrResult rrr_band(const LossMatrix& matrix, const RrrConfig& config,
                   const ExecPolicy& policy = ExecPolicy{});

/// Same pipeline run at r' = r - q_glob / sqrt(n), which in addition keeps
/// the selected sublevel set inside the population one with high probability.
RrrResult rrr_band_population(const LossMatrix& matrix, const RrrConfig& config,
                              const ExecPolicy& policy = ExecPolicy{});

}  // namespace riskband
