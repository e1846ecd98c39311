#include "riskband/evalharness.hpp"

#include "riskband/bootstrap.hpp"
#include "riskband/error.hpp"
#include "riskband/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace riskband {

namespace {

constexpr std::uint64_t kRunTag = 0x52554eull;       // "RUN"
constexpr std::uint64_t kDataTag = 0x44415441ull;    // "DATA"
constexpr std::uint64_t kBootTag = 0x424f4f54ull;    // "BOOT"
constexpr std::uint64_t kSplitTag = 0x53504c54ull;   // "SPLT"
constexpr std::uint64_t kSampleTag = 0x53414d50ull;  // "SAMP"

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// n x batch matrix of equicorrelated Gaussian batches, each row sorted.
RowMatrix sorted_batches(const GeneratorSpec& spec, Index n, std::uint64_t seed) {
  const Eigen::MatrixXd factor = equicorrelated_factor(spec.rho, spec.batch_size);
  PhiloxEngine engine(seed, 0);
  std::normal_distribution<double> normal;
  RowMatrix batches(n, spec.batch_size);
  Vector z(spec.batch_size);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < spec.batch_size; ++k) z[k] = normal(engine);
    batches.row(i) = (factor * z).transpose();
    std::sort(batches.row(i).begin(), batches.row(i).end());
  }
  return batches;
}

std::string format_double(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

}  // namespace

std::string_view to_string(GeneratorFamily family) {
  switch (family) {
    case GeneratorFamily::EquicorrelatedGaussianCdf: return "equicorrelated";
    case GeneratorFamily::Constant: return "constant";
    case GeneratorFamily::Custom: return "custom";
  }
  return "?";
}

GeneratorFamily parse_generator_family(std::string_view name) {
  if (name == "equicorrelated" || name == "equicorrelated-gaussian-cdf")
    return GeneratorFamily::EquicorrelatedGaussianCdf;
  if (name == "constant") return GeneratorFamily::Constant;
  if (name == "custom") return GeneratorFamily::Custom;
  fail(ErrorCode::InvalidArgument, "unknown generator family '" + std::string(name) + "'");
}

void GeneratorSpec::check() const {
  switch (family) {
    case GeneratorFamily::EquicorrelatedGaussianCdf: {
      if (batch_size < 1) fail(ErrorCode::Domain, "batch size must be positive");
      const double floor = batch_size > 1 ? -1.0 / static_cast<double>(batch_size - 1) : -1.0;
      if (!(rho >= floor && rho <= 1.0))
        fail(ErrorCode::Domain, "rho = " + format_double(rho) + " makes the batch covariance "
                                "indefinite; need " + format_double(floor) + " <= rho <= 1");
      break;
    }
    case GeneratorFamily::Constant:
      if (!(constant >= 0.0 && constant <= 1.0))
        fail(ErrorCode::Domain, "constant loss must lie in [0,1]");
      break;
    case GeneratorFamily::Custom:
      if (!row_sampler || !custom_truth)
        fail(ErrorCode::InvalidArgument, "custom generator needs a row sampler and a truth curve");
      if (custom_truth->size() != grid.size())
        fail(ErrorCode::InvalidArgument, "custom truth length does not match the grid");
      break;
  }
}

RiskCurve GeneratorSpec::truth() const {
  check();
  switch (family) {
    case GeneratorFamily::EquicorrelatedGaussianCdf:
      return RiskCurve(grid, grid.values().unaryExpr([](double t) { return normal_cdf(t); }), 0);
    case GeneratorFamily::Constant:
      return RiskCurve(grid, Vector::Constant(grid.size(), constant), 0);
    case GeneratorFamily::Custom:
      return RiskCurve(grid, *custom_truth, 0);
  }
  fail(ErrorCode::InvalidArgument, "unknown generator family");
}

Eigen::MatrixXd equicorrelated_factor(double rho, Index batch_size) {
  const Eigen::MatrixXd covariance =
      Eigen::MatrixXd::Constant(batch_size, batch_size, rho) +
      (1.0 - rho) * Eigen::MatrixXd::Identity(batch_size, batch_size);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  // Eigenvalues are 1 - rho and 1 + (k - 1) rho; clip rounding below zero.
  const Vector roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal();
}

LossMatrix gen_equicorrelated(Index n, double rho, const ParameterGrid& grid, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.rho = rho;
  spec.grid = grid;
  return draw_synthetic(spec, n, seed).losses;
}

SyntheticDraw draw_synthetic(const GeneratorSpec& spec, Index n, std::uint64_t seed) {
  spec.check();
  if (n < 1) fail(ErrorCode::Domain, "sample size must be at least 1");
  const Index m = spec.grid.size();
  const Vector& t = spec.grid.values();

  switch (spec.family) {
    case GeneratorFamily::Constant:
      return {LossMatrix(spec.grid, RowMatrix::Constant(n, m, spec.constant),
                         Orientation::NonIncreasing),
              std::nullopt};
    case GeneratorFamily::Custom: {
      PhiloxEngine engine(seed, 0);
      RowMatrix rows(n, m);
      for (Index i = 0; i < n; ++i) {
        const Vector row = spec.row_sampler(engine);
        if (row.size() != m) fail(ErrorCode::InvalidArgument, "custom sampler row has wrong length");
        rows.row(i) = row.transpose();
      }
      return {LossMatrix(spec.grid, std::move(rows), spec.custom_orientation), std::nullopt};
    }
    case GeneratorFamily::EquicorrelatedGaussianCdf:
      break;
  }

  const RowMatrix batches = sorted_batches(spec, n, seed);
  const double unit = 1.0 / static_cast<double>(spec.batch_size);
  RowMatrix losses(n, m);
  RowMatrix partner(n, m);
  for (Index i = 0; i < n; ++i) {
    Index below = 0;
    for (Index j = 0; j < m; ++j) {
      while (below < spec.batch_size && batches(i, below) <= t[j]) ++below;
      losses(i, j) = static_cast<double>(below) * unit;
      partner(i, j) = below == 0 ? 1.0 : 0.0;
    }
  }
  return {LossMatrix(spec.grid, std::move(losses), Orientation::NonDecreasing),
          LossMatrix(spec.grid, std::move(partner), Orientation::NonIncreasing)};
}

RunSeeds run_seeds(std::uint64_t seed, std::size_t run) {
  const std::uint64_t run_seed = derive_seed(seed, kRunTag, run);
  return {derive_seed(run_seed, kDataTag, 0), derive_seed(run_seed, kBootTag, 0)};
}

std::vector<double> simulate_sup_gaps(const GeneratorSpec& spec, Index n, std::size_t runs,
                                      std::uint64_t seed, const ExecPolicy& policy) {
  spec.check();
  const RiskCurve truth = spec.truth();
  const Vector& t = spec.grid.values();
  const Index m = spec.grid.size();
  std::vector<double> gaps(runs);
  parallel_for(runs, policy, [&](std::size_t run) {
    const std::uint64_t data_seed = run_seeds(seed, run).data;
    Vector empirical(m);
    if (spec.family == GeneratorFamily::EquicorrelatedGaussianCdf) {
      // Histogram of first grid index at or above each coordinate, then a
      // running count; avoids materialising the n x m loss matrix.
      const RowMatrix batches = sorted_batches(spec, n, data_seed);
      std::vector<Index> hits(static_cast<std::size_t>(m) + 1, 0);
      for (Index i = 0; i < batches.size(); ++i) {
        const double x = batches.data()[i];
        const auto pos = std::lower_bound(t.data(), t.data() + m, x) - t.data();
        ++hits[static_cast<std::size_t>(pos)];
      }
      const double total = static_cast<double>(n * spec.batch_size);
      Index running = 0;
      for (Index j = 0; j < m; ++j) {
        running += hits[static_cast<std::size_t>(j)];
        empirical[j] = static_cast<double>(running) / total;
      }
    } else {
      empirical = empirical_risk(draw_synthetic(spec, n, data_seed).losses).values();
    }
    gaps[run] = (truth.values() - empirical).maxCoeff();
  });
  return gaps;
}

double oracle_sup_quantile(const GeneratorSpec& spec, Index n, double delta, std::size_t runs,
                           std::uint64_t seed, const ExecPolicy& policy) {
  std::vector<double> gaps = simulate_sup_gaps(spec, n, runs, seed, policy);
  std::sort(gaps.begin(), gaps.end());
  return gaps[quantile_rank(runs, delta) - 1];
}

RrrConfig MethodConfig::rrr_config(std::uint64_t seed) const {
  RrrConfig config;
  config.r = r;
  config.delta_glob = delta_glob.value_or(delta / 10.0);
  config.delta_loc = delta_loc.value_or(delta - config.delta_glob);
  config.replicates = replicates;
  config.seed.master = seed;
  return config;
}

std::string MethodConfig::label() const {
  std::string out(to_string(method));
  if (method == BandMethod::RestrictedRiskResampling && population) out += "-population";
  return out;
}

ConfidenceBand upper_band(const LossMatrix& matrix, const MethodConfig& method, std::uint64_t seed,
                          const ExecPolicy& policy) {
  switch (method.method) {
    case BandMethod::Nasm:
      return nasm_band(empirical_risk(matrix), method.delta, Side::Upper);
    case BandMethod::RiskResampling: {
      SeedRecord record;
      record.master = seed;
      return rr_band(matrix, method.delta, method.replicates, record, Side::Upper, policy);
    }
    case BandMethod::RestrictedRiskResampling:
      return method.population ? rrr_band_population(matrix, method.rrr_config(seed), policy).band
                               : rrr_band(matrix, method.rrr_config(seed), policy).band;
    case BandMethod::Pointwise:
      return wsr_band(matrix, method.delta, policy);
    case BandMethod::Composed:
      break;
  }
  fail(ErrorCode::InvalidArgument, "composed bands are not a standalone method");
}

SyntheticScenario::SyntheticScenario(GeneratorSpec spec)
    : spec_(std::move(spec)), truth_(spec_.truth()) {}

ScenarioDraw SyntheticScenario::draw(Index n, std::uint64_t seed) const {
  SyntheticDraw sample = draw_synthetic(spec_, n, seed);
  return {std::move(sample.losses), std::move(sample.partner), truth_};
}

std::string SyntheticScenario::describe() const {
  std::string out(to_string(spec_.family));
  if (spec_.family == GeneratorFamily::EquicorrelatedGaussianCdf) out += "(rho=" + format_double(spec_.rho) + ")";
  return out;
}

namespace {

std::pair<std::vector<Index>, std::vector<Index>> split_rows(Index n, std::uint64_t seed) {
  if (n < 2) fail(ErrorCode::Domain, "surrogate split needs at least two rows");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  PhiloxEngine engine(seed, 0);
  std::shuffle(order.begin(), order.end(), engine);
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  return {std::vector<Index>(order.begin(), order.begin() + half),
          std::vector<Index>(order.begin() + half, order.end())};
}

}  // namespace

std::pair<LossMatrix, LossMatrix> split_surrogate(const LossMatrix& matrix, std::uint64_t seed) {
  auto [holdout, sampling] = split_rows(matrix.samples(), seed);
  return {matrix.take_rows(holdout), matrix.take_rows(sampling)};
}

SurrogateScenario::SurrogateScenario(LossMatrix population, std::optional<LossMatrix> partner)
    : population_(std::move(population)), partner_(std::move(partner)) {
  if (population_.samples() < 2) fail(ErrorCode::Domain, "surrogate population needs two rows");
  if (partner_ && (partner_->samples() != population_.samples() ||
                   !(partner_->grid() == population_.grid())))
    fail(ErrorCode::InvalidArgument, "partner losses must align with the population rows");
}

ScenarioDraw SurrogateScenario::draw(Index n, std::uint64_t seed) const {
  if (n < 1) fail(ErrorCode::Domain, "sample size must be at least 1");
  auto [holdout, sampling] = split_rows(population_.samples(), derive_seed(seed, kSplitTag, 0));
  PhiloxEngine engine(derive_seed(seed, kSampleTag, 0), 0);
  std::uniform_int_distribution<std::size_t> pick(0, sampling.size() - 1);
  std::vector<Index> rows(static_cast<std::size_t>(n));
  for (Index& row : rows) row = sampling[pick(engine)];

  const RiskCurve holdout_risk = empirical_risk(population_.take_rows(holdout));
  std::optional<LossMatrix> partner;
  if (partner_) partner = partner_->take_rows(rows);
  return {population_.take_rows(rows), std::move(partner),
          RiskCurve(holdout_risk.grid(), holdout_risk.values(), 0)};
}

std::string SurrogateScenario::describe() const {
  return "surrogate(N=" + std::to_string(population_.samples()) + ")";
}

namespace {

MetricsReport proportion(std::string name, std::size_t hits, std::size_t runs) {
  MetricsReport report;
  report.metric = std::move(name);
  report.runs = runs;
  if (runs > 0) {
    const double p = static_cast<double>(hits) / static_cast<double>(runs);
    report.estimate = p;
    report.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(runs));
  }
  return report;
}

}  // namespace

Evaluation evaluate(const MethodConfig& method, const Scenario& scenario, Index n,
                    std::size_t runs, std::uint64_t seed, const EvalOptions& options,
                    const ExecPolicy& policy) {
  if (runs < 1) fail(ErrorCode::Domain, "at least one Monte Carlo run is required");
  Evaluation eval;
  eval.runs.resize(runs);
  parallel_for(runs, policy, [&](std::size_t run) {
    const RunSeeds seeds = run_seeds(seed, run);
    const ScenarioDraw draw = scenario.draw(n, seeds.data);
    const ConfidenceBand band = upper_band(draw.losses, method, seeds.bootstrap, ExecPolicy::serial());
    const RiskCurve empirical = empirical_risk(draw.losses);
    const Vector& upper = *band.upper();
    const Vector& truth = draw.truth.values();

    RunOutcome& out = eval.runs[run];
    out.half_width = band.half_width().value_or(0.0);
    out.validity_size = band.validity().size();
    for (Index j : band.validity()) {
      if (truth[j] > upper[j]) {
        out.miss_anywhere = true;
        if (empirical[j] <= options.selected_r) out.miss_selected = true;
      }
    }

    if (draw.partner) {
      const IndexSet constraint = options.constraint_r
                                      ? sublevel_set(empirical, *options.constraint_r)
                                      : IndexSet::full(empirical.size());
      if (!constraint.empty()) {
        const SelectionResult chosen =
            select(options.scheme, empirical, empirical_risk(*draw.partner), constraint);
        out.selected_index = chosen.index;
        if (band.validity().contains(chosen.index))
          out.gap = upper[chosen.index] - truth[chosen.index];
      }
    }
  });

  std::size_t anywhere = 0;
  std::size_t selected = 0;
  std::vector<double> gaps;
  for (const RunOutcome& out : eval.runs) {
    anywhere += out.miss_anywhere ? 1 : 0;
    selected += out.miss_selected ? 1 : 0;
    if (out.gap) gaps.push_back(*out.gap);
  }

  std::vector<std::pair<std::string, std::string>> echo{
      {"method", method.label()},
      {"delta", format_double(method.method == BandMethod::RestrictedRiskResampling
                                  ? method.rrr_config(seed).delta()
                                  : method.delta)},
      {"B", std::to_string(method.replicates)},
      {"scenario", scenario.describe()},
      {"n", std::to_string(n)},
      {"seed", std::to_string(seed)}};
  if (method.method == BandMethod::RestrictedRiskResampling) echo.emplace_back("r", format_double(method.r));

  eval.anywhere = proportion("anywhere_miscoverage", anywhere, runs);
  eval.selected = proportion("selected_miscoverage", selected, runs);
  eval.selected.config.emplace_back("selected_r", format_double(options.selected_r));

  MetricsReport& cons = eval.conservatism;
  cons.metric = "conservatism";
  cons.runs = gaps.size();
  cons.excluded = runs - gaps.size();
  if (!gaps.empty()) {
    const double k = static_cast<double>(gaps.size());
    const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / k;
    double ss = 0.0;
    for (double g : gaps) ss += (g - mean) * (g - mean);
    cons.estimate = mean;
    cons.standard_error = gaps.size() > 1 ? std::sqrt(ss / (k - 1.0) / k) : 0.0;
  }
  cons.config.emplace_back("scheme", std::string(to_string(options.scheme)));
  cons.config.emplace_back("constraint_r",
                           options.constraint_r ? format_double(*options.constraint_r) : "none");

  for (MetricsReport* report : {&eval.anywhere, &eval.selected, &eval.conservatism})
    report->config.insert(report->config.begin(), echo.begin(), echo.end());
  return eval;
}

MetricsReport miscoverage_anywhere(const MethodConfig& method, const Scenario& scenario, Index n,
                                   std::size_t runs, std::uint64_t seed,
                                   const ExecPolicy& policy) {
  return evaluate(method, scenario, n, runs, seed, EvalOptions{}, policy).anywhere;
}

MetricsReport miscoverage_selected(const MethodConfig& method, const Scenario& scenario, Index n,
                                   std::size_t runs, std::uint64_t seed, double r,
                                   const ExecPolicy& policy) {
  EvalOptions options;
  options.selected_r = r;
  return evaluate(method, scenario, n, runs, seed, options, policy).selected;
}

MetricsReport conservatism(const MethodConfig& method, const Scenario& scenario, Index n,
                           std::size_t runs, std::uint64_t seed, SelectionScheme scheme,
                           std::optional<double> constraint_r, const ExecPolicy& policy) {
  EvalOptions options;
  options.scheme = scheme;
  options.constraint_r = constraint_r;
  return evaluate(method, scenario, n, runs, seed, options, policy).conservatism;
}

}  // namespace riskband
