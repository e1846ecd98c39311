#include "riskband/rrr.hpp"

#include "riskband/empirical.hpp"
#include "riskband/error.hpp"

#include <cmath>
#include <utility>

namespace riskband {

void RrrConfig::check() const {
  if (!(r >= 0.0 && r <= 1.0)) fail(ErrorCode::Domain, "risk tolerance r must lie in [0,1]");
  if (!(delta_glob > 0.0 && delta_loc > 0.0))
    fail(ErrorCode::Domain, "delta_glob and delta_loc must be positive");
  if (!(delta() < 1.0)) fail(ErrorCode::Domain, "delta_glob + delta_loc must be below 1");
  if (replicates < 1) fail(ErrorCode::Domain, "bootstrap needs B >= 1");
}

namespace {

RrrResult run_restricted(const LossMatrix& matrix, const RrrConfig& config, bool population,
                         const ExecPolicy& policy) {
  config.check();
  if (matrix.orientation() == Orientation::Unconstrained)
    fail(ErrorCode::InvalidArgument,
         "restricted risk resampling needs a monotone loss matrix (monotonize it first)");

  const RiskCurve curve = empirical_risk(matrix);
  const double root_n = std::sqrt(static_cast<double>(matrix.samples()));
  const ResamplingEngine engine(matrix);

  const double q_glob = quantile_upper(
      engine.distribution(IndexSet::full(matrix.points()), Sign::TwoSided, config.replicates,
                          config.seed, policy),
      config.delta_glob);

  std::optional<double> adjusted_level;
  double level = config.r;
  std::vector<std::string> warnings;
  if (population) {
    level = config.r - q_glob / root_n;
    adjusted_level = level;
  }

  IndexSet sublevel;
  IndexSet adjusted;
  double q_loc = 0.0;
  if (level >= 0.0) {
    sublevel = sublevel_set(curve, level);
    adjusted = sublevel_set(curve, level + 2.0 * q_glob / root_n, SetProvenance::AdjustedSublevel);
    q_loc = quantile_upper(
        engine.distribution(adjusted, Sign::Minus, config.replicates, config.seed, policy),
        config.delta_loc);
  } else {
    sublevel = IndexSet({}, SetProvenance::Sublevel);
    adjusted = IndexSet({}, SetProvenance::AdjustedSublevel);
    warnings.push_back("adjusted level r' = r - q_glob/sqrt(n) is negative; validity set is empty");
  }
  if (sublevel.empty() && level >= 0.0)
    warnings.push_back("empirical sublevel set is empty; band is vacuously valid");

  ConfidenceBand band = shifted_band(curve, q_loc / root_n, Side::Upper, config.delta(),
                                     BandMethod::RestrictedRiskResampling, sublevel);
  band.metadata().replicates = config.replicates;
  band.metadata().seed = config.seed;
  band.metadata().warnings = warnings;

  const bool empty = sublevel.empty();
  return RrrResult{std::move(band), q_glob, q_loc, config.r, adjusted_level, std::move(sublevel),
                   std::move(adjusted), empty};
}

}  // namespace

RrrResult rrr_band(const LossMatrix& matrix, const RrrConfig& config, const ExecPolicy& policy) {
  return run_restricted(matrix, config, false, policy);
}

RrrResult rrr_band_population(const LossMatrix& matrix, const RrrConfig& config,
                              const ExecPolicy& policy) {
  return run_restricted(matrix, config, true, policy);
}

}  // namespace riskband
