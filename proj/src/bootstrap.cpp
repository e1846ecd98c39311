#include "riskband/bootstrap.hpp"

#include "riskband/error.hpp"
#include "riskband/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace riskband {

namespace {

constexpr std::size_t kReplicatesPerTask = 32;

void draw_counts(Index n, const SeedRecord& seed, std::uint64_t replicate, Eigen::VectorXi& counts) {
  counts.setZero(n);
  PhiloxEngine engine(seed.master, replicate);
  std::uniform_int_distribution<std::int64_t> pick(0, n - 1);
  for (Index k = 0; k < n; ++k) ++counts[static_cast<Index>(pick(engine))];
}

double combine_sign(double plus, double minus, Sign sign) {
  switch (sign) {
    case Sign::Plus: return plus;
    case Sign::Minus: return minus;
    case Sign::TwoSided: return std::max(plus, minus);
  }
  return plus;
}

}  // namespace

Eigen::VectorXi resample_counts(Index n, const SeedRecord& seed, std::uint64_t replicate) {
  if (n < 1) fail(ErrorCode::Domain, "resampling needs at least one sample");
  Eigen::VectorXi counts;
  draw_counts(n, seed, replicate, counts);
  return counts;
}

BootstrapSupDistribution::BootstrapSupDistribution(std::vector<double> values, Sign sign,
                                                   IndexSet subset, SeedRecord seed)
    : values_(std::move(values)), sign_(sign), subset_(std::move(subset)), seed_(std::move(seed)) {
  if (values_.empty()) fail(ErrorCode::Domain, "bootstrap distribution needs B >= 1");
  std::sort(values_.begin(), values_.end());
}

ResamplingEngine::ResamplingEngine(const LossMatrix& matrix)
    : n_(matrix.samples()), m_(matrix.points()) {
  const RowMatrix& v = matrix.values();
  degenerate_.resize(static_cast<std::size_t>(m_));
  for (Index j = 0; j < m_; ++j) degenerate_[static_cast<std::size_t>(j)] = kernels::is_constant(v.col(j));

  Index nonzero = 0;
  for (Index i = 0; i < n_; ++i) {
    nonzero += v(i, 0) != 0.0 ? 1 : 0;
    for (Index j = 1; j < m_; ++j) nonzero += v(i, j) != v(i, j - 1) ? 1 : 0;
  }
  sparse_ = nonzero * 4 <= n_ * m_;

  if (sparse_) {
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(nonzero));
    for (Index i = 0; i < n_; ++i) {
      if (v(i, 0) != 0.0) entries.emplace_back(i, 0, v(i, 0));
      for (Index j = 1; j < m_; ++j) {
        if (v(i, j) != v(i, j - 1)) entries.emplace_back(i, j, v(i, j) - v(i, j - 1));
      }
    }
    jumps_.resize(n_, m_);
    jumps_.setFromTriplets(entries.begin(), entries.end());
    jumps_.makeCompressed();
  } else {
    dense_ = v;
  }
}

void ResamplingEngine::suprema(const IndexSet& subset, Sign sign, const SeedRecord& seed,
                               std::uint64_t first, std::span<double> out) const {
  subset.check_within(m_);
  if (subset.empty()) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  if (sparse_) {
    sparse_suprema(subset, sign, seed, first, out);
  } else {
    dense_suprema(subset, sign, seed, first, out);
  }
}

void ResamplingEngine::sparse_suprema(const IndexSet& subset, Sign sign, const SeedRecord& seed,
                                      std::uint64_t first, std::span<double> out) const {
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  const Index last = subset.indices().back();
  Eigen::VectorXi counts;
  Eigen::VectorXd weights(n_);
  for (std::size_t r = 0; r < out.size(); ++r) {
    draw_counts(n_, seed, first + r, counts);
    weights = (counts.array() - 1).cast<double>().matrix();

    double process = 0.0;
    double plus = -std::numeric_limits<double>::infinity();
    double minus = plus;
    auto member = subset.begin();
    for (Index j = 0; j <= last; ++j) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(jumps_, j); it; ++it) {
        process += weights[it.row()] * it.value();
      }
      if (*member != j) continue;
      ++member;
      const double g = degenerate_[static_cast<std::size_t>(j)] ? 0.0 : process;
      plus = std::max(plus, g);
      minus = std::max(minus, -g);
    }
    out[r] = combine_sign(plus, minus, sign) * scale;
  }
}

void ResamplingEngine::dense_suprema(const IndexSet& subset, Sign sign, const SeedRecord& seed,
                                     std::uint64_t first, std::span<double> out) const {
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  const Eigen::MatrixXd columns = dense_(Eigen::all, subset.indices());
  const auto count = static_cast<Index>(out.size());
  Eigen::MatrixXd weights(count, n_);
  Eigen::VectorXi counts;
  for (Index r = 0; r < count; ++r) {
    draw_counts(n_, seed, first + static_cast<std::uint64_t>(r), counts);
    weights.row(r) = (counts.array() - 1).cast<double>().matrix().transpose();
  }
  const Eigen::MatrixXd process = weights * columns;
  for (Index r = 0; r < count; ++r) {
    double plus = -std::numeric_limits<double>::infinity();
    double minus = plus;
    for (std::size_t s = 0; s < subset.size(); ++s) {
      const Index j = subset.indices()[s];
      const double g = degenerate_[static_cast<std::size_t>(j)] ? 0.0 : process(r, static_cast<Index>(s));
      plus = std::max(plus, g);
      minus = std::max(minus, -g);
    }
    out[static_cast<std::size_t>(r)] = combine_sign(plus, minus, sign) * scale;
  }
}

BootstrapSupDistribution ResamplingEngine::distribution(const IndexSet& subset, Sign sign,
                                                        std::size_t replicates,
                                                        const SeedRecord& seed,
                                                        const ExecPolicy& policy) const {
  if (replicates < 1) fail(ErrorCode::Domain, "bootstrap needs B >= 1");
  subset.check_within(m_);
  std::vector<double> values(replicates);
  const std::size_t tasks = (replicates + kReplicatesPerTask - 1) / kReplicatesPerTask;
  parallel_for(tasks, policy, [&](std::size_t task) {
    const std::size_t begin = task * kReplicatesPerTask;
    const std::size_t size = std::min(kReplicatesPerTask, replicates - begin);
    suprema(subset, sign, seed, begin, std::span<double>(values).subspan(begin, size));
  });
  return BootstrapSupDistribution(std::move(values), sign, subset, seed);
}

BootstrapSupDistribution sup_distribution(const LossMatrix& matrix, const IndexSet& subset,
                                          Sign sign, std::size_t replicates,
                                          const SeedRecord& seed, const ExecPolicy& policy) {
  return ResamplingEngine(matrix).distribution(subset, sign, replicates, seed, policy);
}

std::size_t quantile_rank(std::size_t replicates, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::Domain, "delta must lie in (0,1)");
  if (replicates < 1) fail(ErrorCode::Domain, "quantile of an empty distribution");
  const double target = static_cast<double>(replicates + 1) * (1.0 - delta);
  // Absorb representation error so that (999 + 1) * 0.9 ranks 900, not 901.
  const double rank = std::ceil(target - 1e-9 * target);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(rank, 1.0)), 1, replicates);
}

double quantile_upper(const BootstrapSupDistribution& dist, double delta) {
  return dist.sorted_values()[quantile_rank(dist.replicates(), delta) - 1];
}

ConfidenceBand rr_band(const LossMatrix& matrix, double delta, std::size_t replicates,
                       const SeedRecord& seed, Side side, const ExecPolicy& policy) {
  const Sign sign = side == Side::Upper ? Sign::Minus : side == Side::Lower ? Sign::Plus
                                                                             : Sign::TwoSided;
  const RiskCurve curve = empirical_risk(matrix);
  const IndexSet grid = IndexSet::full(matrix.points());
  const double q = quantile_upper(sup_distribution(matrix, grid, sign, replicates, seed, policy), delta);
  ConfidenceBand band = shifted_band(curve, q / std::sqrt(static_cast<double>(matrix.samples())),
                                     side, delta, BandMethod::RiskResampling, grid);
  band.metadata().replicates = replicates;
  band.metadata().seed = seed;
  return band;
}

double dkw_epsilon(std::size_t replicates, double alpha) {
  if (replicates < 1) fail(ErrorCode::Domain, "DKW band needs B >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::Domain, "alpha must lie in (0,1)");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(replicates)));
}

namespace {

// inf{q : F_B(q) >= level} on sorted draws; +inf above 1, the minimum at or below 0.
double empirical_inverse(const std::vector<double>& sorted, double level) {
  if (level > 1.0) return std::numeric_limits<double>::infinity();
  const double rank = std::ceil(level * static_cast<double>(sorted.size()) - 1e-9);
  const auto k = static_cast<std::size_t>(std::max(rank, 1.0));
  return sorted[std::min(k, sorted.size()) - 1];
}

}  // namespace

ReplicateSuggestion suggest_B(const LossMatrix& matrix, double delta, const SeedRecord& seed,
                              std::size_t initial, const SuggestOptions& options,
                              const ExecPolicy& policy) {
  if (initial < 100) fail(ErrorCode::Domain, "initial B must be at least 100");
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::Domain, "delta must lie in (0,1)");
  const ResamplingEngine engine(matrix);
  const IndexSet grid = IndexSet::full(matrix.points());

  std::vector<double> draws;
  ReplicateSuggestion result;
  std::size_t replicates = std::min(initial, options.cap);
  while (true) {
    const std::size_t have = draws.size();
    draws.resize(replicates);
    const std::size_t fresh = replicates - have;
    const std::size_t tasks = (fresh + kReplicatesPerTask - 1) / kReplicatesPerTask;
    parallel_for(tasks, policy, [&](std::size_t task) {
      const std::size_t begin = have + task * kReplicatesPerTask;
      const std::size_t size = std::min(kReplicatesPerTask, replicates - begin);
      engine.suprema(grid, options.sign, seed, begin, std::span<double>(draws).subspan(begin, size));
    });

    std::vector<double> sorted = draws;
    std::sort(sorted.begin(), sorted.end());
    const double eps = dkw_epsilon(replicates, options.dkw_alpha);
    result.replicates = replicates;
    result.q_boot = sorted[quantile_rank(replicates, delta) - 1];
    result.bracket_low = empirical_inverse(sorted, 1.0 - delta - eps);
    result.bracket_high = empirical_inverse(sorted, 1.0 - delta + eps);
    result.bracket_width = result.bracket_high - result.bracket_low;

    if (result.q_boot <= 0.0) {
      result.degenerate = true;
      result.replicates = initial;
      return result;
    }
    if (result.bracket_width < options.relative_tolerance * result.q_boot) {
      result.criterion_met = true;
      return result;
    }
    if (replicates >= options.cap) {
      result.cap_reached = true;
      return result;
    }
    replicates = std::min(replicates * 2, options.cap);
  }
}

}  // namespace riskband
