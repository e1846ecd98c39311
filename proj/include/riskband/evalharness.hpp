#pragma once

#include "riskband/bounds.hpp"
#include "riskband/empirical.hpp"
#include "riskband/loss_model.hpp"
#include "riskband/parallel.hpp"
#include "riskband/rng.hpp"
#include "riskband/rrr.hpp"
#include "riskband/selection.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace riskband {

enum class GeneratorFamily { EquicorrelatedGaussianCdf, Constant, Custom };

std::string_view to_string(GeneratorFamily family);
GeneratorFamily parse_generator_family(std::string_view name);

/// Synthetic data source with a known risk curve.
///
/// EquicorrelatedGaussianCdf: each sample is a batch X ~ N(0, rho 11' + (1-rho) I)
/// of `batch_size` coordinates with loss (1/batch) #{j : X_j <= t}, so the risk
/// is the standard normal CDF. Constant: every loss equals `constant`.
/// Custom: `row_sampler` draws one loss row; `custom_truth` is its mean.
struct GeneratorSpec {
  GeneratorFamily family = GeneratorFamily::EquicorrelatedGaussianCdf;
  double rho = 0.2;
  Index batch_size = 5;
  ParameterGrid grid = ParameterGrid::linspace(-3.0, 3.0, 1000);
  double constant = 0.5;
  std::function<Vector(PhiloxEngine&)> row_sampler;
  std::optional<Vector> custom_truth;
  Orientation custom_orientation = Orientation::Unconstrained;

  /// Throws if parameters are out of range (rho must keep the covariance PSD:
  /// -1/(batch-1) <= rho <= 1).
  void check() const;
  RiskCurve truth() const;
};

/// Factor A with A A' = rho 11' + (1-rho) I, taken from
/// the symmetric eigendecomposition so that negative rho works.
Eigen::MatrixXd equicorrelated_factor(double rho, Index batch_size);

/// n x m synthetic losses (nondecreasing in t) from the equicorrelated family.
LossMatrix gen_equicorrelated(Index n, double rho, const ParameterGrid& grid, std::uint64_t seed);

/// Draws n samples from a generator. Equicorrelated draws also produce the
/// tradeoff partner 1{min_j X_j > t}, which is nonincreasing in t.
struct SyntheticDraw {
  LossMatrix losses;
  std::optional<LossMatrix> partner;
};
SyntheticDraw draw_synthetic(const GeneratorSpec& spec, Index n, std::uint64_t seed);

/// Data and bootstrap seeds of Monte Carlo run `run`. Every harness entry
/// point draws run r from these, so runs can be replayed one at a time.
struct RunSeeds {
  std::uint64_t data = 0;
  std::uint64_t bootstrap = 0;
};
RunSeeds run_seeds(std::uint64_t seed, std::size_t run);

/// sup_t (L(t) - L_n(t)) for `runs` independent datasets of size n.
std::vector<double> simulate_sup_gaps(const GeneratorSpec& spec, Index n, std::size_t runs,
                                      std::uint64_t seed, const ExecPolicy& policy = ExecPolicy{});

/// Conservative 1 - delta quantile of sup_t (L(t) - L_n(t)) over `runs` datasets,
/// i.e. the width of the best fixed-width upper band.
double oracle_sup_quantile(const GeneratorSpec& spec, Index n, double delta, std::size_t runs,
                           std::uint64_t seed, const ExecPolicy& policy = ExecPolicy{});

/// Band method and its tuning.
struct MethodConfig {
  BandMethod method = BandMethod::RiskResampling;
  double delta = 0.1;
  std::size_t replicates = 1000;
  double r = 0.1;                         ///< RRR risk tolerance
  std::optional<double> delta_glob;       ///< RRR; defaults to delta / 10
  std::optional<double> delta_loc;        ///< RRR; defaults to 9 delta / 10
  bool population = false;                ///< RRR population-set variant

  RrrConfig rrr_config(std::uint64_t seed) const;
  std::string label() const;
};

/// Upper band of the configured method on one dataset.
ConfidenceBand upper_band(const LossMatrix& matrix, const MethodConfig& method,
                          std::uint64_t seed, const ExecPolicy& policy = ExecPolicy{});

/// One dataset of size n together with the risk it should be compared to.
struct ScenarioDraw {
  LossMatrix losses;
  std::optional<LossMatrix> partner;
  RiskCurve truth;
};

class Scenario {
 public:
  virtual ~Scenario() = default;
  virtual ScenarioDraw draw(Index n, std::uint64_t seed) const = 0;
  virtual std::string describe() const = 0;
};

class SyntheticScenario final : public Scenario {
 public:
  explicit SyntheticScenario(GeneratorSpec spec);
  ScenarioDraw draw(Index n, std::uint64_t seed) const override;
  std::string describe() const override;
  const GeneratorSpec& spec() const noexcept { return spec_; }

 private:
  GeneratorSpec spec_;
  RiskCurve truth_;
};

/// Random half split of the rows: holdout first, sampling second.
std::pair<LossMatrix, LossMatrix> split_surrogate(const LossMatrix& matrix, std::uint64_t seed);

/// Finite-population surrogate: each draw splits the rows in halves, uses the
/// holdout empirical risk as truth and resamples n rows with replacement from
/// the sampling half. Miscoverage at large n partly reflects the finite
/// population rather than the method.
class SurrogateScenario final : public Scenario {
 public:
  explicit SurrogateScenario(LossMatrix population, std::optional<LossMatrix> partner = std::nullopt);
  ScenarioDraw draw(Index n, std::uint64_t seed) const override;
  std::string describe() const override;

 private:
  LossMatrix population_;
  std::optional<LossMatrix> partner_;
};

struct MetricsReport {
  std::string metric;
  double estimate = 0.0;
  std::size_t runs = 0;
  double standard_error = 0.0;
  std::size_t excluded = 0;  ///< runs without a usable value (conservatism)
  std::vector<std::pair<std::string, std::string>> config;
};

struct EvalOptions {
  double selected_r = 0.1;  ///< selected set {t : L_n(t) <= selected_r}
  SelectionScheme scheme = SelectionScheme::EvenTradeoff;
  std::optional<double> constraint_r = 0.1;  ///< selection constraint; nullopt = full grid
};

struct RunOutcome {
  bool miss_anywhere = false;
  bool miss_selected = false;
  std::optional<Index> selected_index;
  std::optional<double> gap;  ///< upper(t_hat) - L(t_hat)
  double half_width = 0.0;
  std::size_t validity_size = 0;
};

struct Evaluation {
  std::vector<RunOutcome> runs;
  MetricsReport anywhere;
  MetricsReport selected;
  MetricsReport conservatism;
};

/// Runs the method on `runs` independent draws. Run r uses data and bootstrap
/// seeds derived from (seed, r) only, so different methods evaluated with the
/// same seed see identical datasets and replicate streams.
Evaluation evaluate(const MethodConfig& method, const Scenario& scenario, Index n,
                    std::size_t runs, std::uint64_t seed, const EvalOptions& options = {},
                    const ExecPolicy& policy = ExecPolicy{});

/// Fraction of runs where the truth exceeds the upper band somewhere on its validity set.
MetricsReport miscoverage_anywhere(const MethodConfig& method, const Scenario& scenario, Index n,
                                   std::size_t runs, std::uint64_t seed,
                                   const ExecPolicy& policy = ExecPolicy{});

/// Same, restricted to {t : L_n(t) <= r}; runs with an empty set count as covered.
MetricsReport miscoverage_selected(const MethodConfig& method, const Scenario& scenario, Index n,
                                   std::size_t runs, std::uint64_t seed, double r = 0.1,
                                   const ExecPolicy& policy = ExecPolicy{});

/// Mean of upper(t_hat) - L(t_hat) over runs with t_hat inside the band's validity.
MetricsReport conservatism(const MethodConfig& method, const Scenario& scenario, Index n,
                           std::size_t runs, std::uint64_t seed, SelectionScheme scheme,
                           std::optional<double> constraint_r = 0.1,
                           const ExecPolicy& policy = ExecPolicy{});

}  // namespace riskband
