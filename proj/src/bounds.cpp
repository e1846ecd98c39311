#include "riskband/bounds.hpp"

#include "riskband/error.hpp"
#include "riskband/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace riskband {

std::string_view to_string(BandMethod method) {
  switch (method) {
    case BandMethod::Nasm: return "nasm";
    case BandMethod::RiskResampling: return "rr";
    case BandMethod::RestrictedRiskResampling: return "rrr";
    case BandMethod::Pointwise: return "pointwise";
    case BandMethod::Composed: return "composed";
  }
  return "?";
}

BandMethod parse_band_method(std::string_view name) {
  if (name == "nasm") return BandMethod::Nasm;
  if (name == "rr") return BandMethod::RiskResampling;
  if (name == "rrr") return BandMethod::RestrictedRiskResampling;
  if (name == "pointwise" || name == "wsr") return BandMethod::Pointwise;
  if (name == "composed") return BandMethod::Composed;
  fail(ErrorCode::InvalidArgument, "unknown band method '" + std::string(name) + "'");
}

ConfidenceBand::ConfidenceBand(ParameterGrid grid, std::optional<Vector> lower,
                               std::optional<Vector> upper, IndexSet validity, double delta,
                               BandMethod method, std::optional<double> half_width)
    : grid_(std::move(grid)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      validity_(std::move(validity)),
      delta_(delta),
      method_(method),
      half_width_(half_width) {
  if (!(delta_ > 0.0 && delta_ < 1.0)) fail(ErrorCode::Domain, "band delta must lie in (0,1)");
  validity_.check_within(grid_.size());
  for (auto* side : {&lower_, &upper_}) {
    if (!*side) continue;
    if ((*side)->size() != grid_.size())
      fail(ErrorCode::InvalidArgument, "band length does not match its grid");
    **side = kernels::clamp_unit(**side);
  }
  if (lower_ && upper_ && ((lower_->array() > upper_->array()).any()))
    fail(ErrorCode::Domain, "band lower bound exceeds its upper bound");
}

ConfidenceBand shifted_band(const RiskCurve& curve, double half_width, Side side, double delta,
                            BandMethod method, IndexSet validity) {
  std::optional<Vector> lower;
  std::optional<Vector> upper;
  if (side != Side::Upper) lower = (curve.values().array() - half_width).matrix();
  if (side != Side::Lower) upper = (curve.values().array() + half_width).matrix();
  ConfidenceBand band(curve.grid(), std::move(lower), std::move(upper), std::move(validity), delta,
                      method, half_width);
  band.metadata().sample_size = curve.sample_size();
  return band;
}

double nasm_width(Index n, double delta) {
  if (n < 1) fail(ErrorCode::Domain, "sample size must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::Domain, "delta must lie in (0,1)");
  return std::sqrt(std::log(std::numbers::e / delta) / (2.0 * static_cast<double>(n)));
}

ConfidenceBand nasm_band(const RiskCurve& curve, double delta, Side side) {
  if (curve.sample_size() < 1)
    fail(ErrorCode::Domain, "nasm band needs an empirical curve (sample size >= 1)");
  const double per_side = side == Side::TwoSided ? delta / 2.0 : delta;
  return shifted_band(curve, nasm_width(curve.sample_size(), per_side), side, delta,
                      BandMethod::Nasm, IndexSet::full(curve.size()));
}

double tail_bound(double lambda) {
  if (!(lambda > 0.0)) fail(ErrorCode::Domain, "lambda must be positive");
  return std::numbers::e * std::exp(-2.0 * lambda * lambda);
}

namespace {

void check_losses(std::span<const double> losses, double delta) {
  if (losses.empty()) fail(ErrorCode::InvalidArgument, "betting bound needs at least one loss");
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::Domain, "delta must lie in (0,1)");
  for (double l : losses)
    if (!(l >= 0.0 && l <= 1.0)) fail(ErrorCode::Domain, "loss outside [0,1]");
}

// Predictable betting fractions lambda_i, each using the variance estimate
// from the first i - 1 losses (prior terms 1/2 and 1/4).
std::vector<double> betting_fractions(std::span<const double> losses, double delta) {
  const double n = static_cast<double>(losses.size());
  const double log_term = 2.0 * std::log(1.0 / delta);
  std::vector<double> lambda(losses.size());
  double sum = 0.0;
  double squares = 0.0;
  double variance = 0.25;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    lambda[i] = std::min(1.0, std::sqrt(log_term / (n * variance)));
    const double count = static_cast<double>(i + 1);
    sum += losses[i];
    const double mean = (0.5 + sum) / (1.0 + count);
    squares += (losses[i] - mean) * (losses[i] - mean);
    variance = (0.25 + squares) / (1.0 + count);
  }
  return lambda;
}

// max_i K_i(p) > 1/delta, stopping at the first prefix that crosses.
bool capital_exceeds(std::span<const double> losses, std::span<const double> lambda, double p,
                     double threshold) {
  double capital = 1.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    capital *= 1.0 - lambda[i] * (losses[i] - p);
    if (capital > threshold) return true;
  }
  return false;
}

double betting_upper(std::span<const double> losses, double delta, double tolerance) {
  const std::vector<double> lambda = betting_fractions(losses, delta);
  const double threshold = 1.0 / delta;
  if (capital_exceeds(losses, lambda, 0.0, threshold)) return 0.0;
  if (!capital_exceeds(losses, lambda, 1.0, threshold)) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (capital_exceeds(losses, lambda, mid, threshold) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

std::vector<double> capital_process(std::span<const double> losses, double delta, double p) {
  check_losses(losses, delta);
  const std::vector<double> lambda = betting_fractions(losses, delta);
  std::vector<double> capital(losses.size());
  double k = 1.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    k *= 1.0 - lambda[i] * (losses[i] - p);
    capital[i] = k;
  }
  return capital;
}

double wsr_upper(std::span<const double> losses, double delta, double tolerance) {
  check_losses(losses, delta);
  if (!(tolerance > 0.0)) fail(ErrorCode::Domain, "bisection tolerance must be positive");
  return betting_upper(losses, delta, tolerance);
}

ConfidenceBand wsr_band(const LossMatrix& matrix, double delta, const ExecPolicy& policy) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::Domain, "delta must lie in (0,1)");
  const Index m = matrix.points();
  Vector upper(m);
  parallel_for(static_cast<std::size_t>(m), policy, [&](std::size_t j) {
    const Vector column = matrix.values().col(static_cast<Index>(j));
    upper[static_cast<Index>(j)] =
        betting_upper({column.data(), static_cast<std::size_t>(column.size())}, delta,
                      kBisectionTolerance);
  });
  ConfidenceBand band(matrix.grid(), std::nullopt, std::move(upper), IndexSet::full(m), delta,
                      BandMethod::Pointwise);
  band.metadata().sample_size = matrix.samples();
  band.metadata().simultaneous = false;
  band.metadata().bisection_tolerance = kBisectionTolerance;
  return band;
}

}  // namespace riskband
