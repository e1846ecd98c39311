#include "riskband/compose.hpp"

#include "riskband/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace riskband {

ComponentBandSet::ComponentBandSet(std::vector<ConfidenceBand> bands) : bands_(std::move(bands)) {
  if (bands_.empty()) fail(ErrorCode::InvalidArgument, "no component bands");
  for (const ConfidenceBand& band : bands_) {
    if (!(band.grid() == bands_.front().grid()))
      fail(ErrorCode::InvalidArgument, "component bands are on different grids");
    delta_ += band.delta();
  }
  if (!(delta_ < 1.0)) fail(ErrorCode::Domain, "component deltas sum to 1 or more");
}

namespace {

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

Box box_at(const ComponentBandSet& components, Index j) {
  Box box;
  for (const ConfidenceBand& band : components.bands()) {
    box.lo.push_back(band.lower() ? (*band.lower())[j] : 0.0);
    box.hi.push_back(band.upper() ? (*band.upper())[j] : 1.0);
  }
  return box;
}

std::pair<double, double> corner_extremes(const Box& box, const RiskMap& psi,
                                          const std::vector<Monotonicity>& mono) {
  std::vector<double> low_corner(box.lo.size());
  std::vector<double> high_corner(box.lo.size());
  for (std::size_t c = 0; c < box.lo.size(); ++c) {
    const bool up = mono[c] == Monotonicity::Increasing;
    low_corner[c] = up ? box.lo[c] : box.hi[c];
    high_corner[c] = up ? box.hi[c] : box.lo[c];
  }
  return {psi(low_corner), psi(high_corner)};
}

std::pair<double, double> scanned_extremes(const Box& box, const RiskMap& psi, int resolution) {
  const std::size_t k = box.lo.size();
  std::vector<int> digit(k, 0);
  std::vector<double> point(k);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  while (true) {
    for (std::size_t c = 0; c < k; ++c) {
      const double frac = resolution == 1 ? 0.0 : static_cast<double>(digit[c]) / (resolution - 1);
      point[c] = box.lo[c] + frac * (box.hi[c] - box.lo[c]);
    }
    const double value = psi(point);
    lo = std::min(lo, value);
    hi = std::max(hi, value);
    std::size_t c = 0;
    while (c < k && ++digit[c] == resolution) digit[c++] = 0;
    if (c == k) break;
  }
  return {lo, hi};
}

}  // namespace

ConfidenceBand combine(const ComponentBandSet& components, const RiskMap& psi,
                       const std::optional<std::vector<Monotonicity>>& monotonicity,
                       int scan_resolution) {
  if (monotonicity && monotonicity->size() != components.size())
    fail(ErrorCode::InvalidArgument, "one monotonicity flag per component is required");
  if (!monotonicity && scan_resolution < 1)
    fail(ErrorCode::Domain, "scan resolution must be positive");

  IndexSet validity = components.bands().front().validity();
  for (const ConfidenceBand& band : components.bands()) validity = intersect(validity, band.validity());

  const Index m = components.grid().size();
  Vector lower = Vector::Zero(m);
  Vector upper = Vector::Ones(m);
  bool clamped = false;
  for (Index j : validity) {
    const Box box = box_at(components, j);
    auto [lo, hi] = monotonicity ? corner_extremes(box, psi, *monotonicity)
                                 : scanned_extremes(box, psi, scan_resolution);
    if (lo < 0.0 || hi > 1.0 || lo > 1.0 || hi < 0.0) clamped = true;
    lower[j] = std::clamp(lo, 0.0, 1.0);
    upper[j] = std::clamp(hi, 0.0, 1.0);
  }

  ConfidenceBand band(components.grid(), std::move(lower), std::move(upper), std::move(validity),
                      components.delta(), BandMethod::Composed);
  band.metadata().sample_size = components.bands().front().metadata().sample_size;
  band.metadata().simultaneous = std::all_of(
      components.bands().begin(), components.bands().end(),
      [](const ConfidenceBand& b) { return b.metadata().simultaneous; });
  if (!monotonicity) band.metadata().scan_resolution = scan_resolution;
  if (clamped) band.metadata().warnings.push_back("combined map left [0,1]; values clamped");
  return band;
}

ConfidenceBand selective_ratio_upper(const ConfidenceBand& numerator,
                                     const ConfidenceBand& denominator, double floor) {
  if (!(floor > 0.0)) fail(ErrorCode::Domain, "denominator floor must be positive");
  if (!numerator.upper()) fail(ErrorCode::InvalidArgument, "numerator band needs an upper side");
  if (!denominator.lower())
    fail(ErrorCode::InvalidArgument, "denominator band needs a lower side");
  if (!(numerator.grid() == denominator.grid()))
    fail(ErrorCode::InvalidArgument, "numerator and denominator are on different grids");
  const double delta = numerator.delta() + denominator.delta();
  if (!(delta < 1.0)) fail(ErrorCode::Domain, "component deltas sum to 1 or more");

  const Vector ratio =
      (numerator.upper()->array() / denominator.lower()->array().max(floor)).min(1.0).matrix();
  ConfidenceBand band(numerator.grid(), std::nullopt, ratio,
                      intersect(numerator.validity(), denominator.validity()), delta,
                      BandMethod::Composed);
  band.metadata().sample_size = numerator.metadata().sample_size;
  band.metadata().simultaneous =
      numerator.metadata().simultaneous && denominator.metadata().simultaneous;
  band.metadata().denominator_floor = floor;
  return band;
}

NamedRiskMap ratio_map(double floor) {
  if (!(floor > 0.0)) fail(ErrorCode::Domain, "ratio floor must be positive");
  return {[floor](std::span<const double> x) { return std::min(1.0, x[0] / std::max(x[1], floor)); },
          {Monotonicity::Increasing, Monotonicity::Decreasing}};
}

NamedRiskMap sum_map(std::size_t k) {
  return {[](std::span<const double> x) {
            return std::min(1.0, std::accumulate(x.begin(), x.end(), 0.0));
          },
          std::vector<Monotonicity>(k, Monotonicity::Increasing)};
}

NamedRiskMap weighted_sum_map(std::vector<double> weights) {
  std::vector<Monotonicity> mono;
  for (double w : weights) mono.push_back(w >= 0.0 ? Monotonicity::Increasing : Monotonicity::Decreasing);
  return {[weights = std::move(weights)](std::span<const double> x) {
            double acc = 0.0;
            for (std::size_t c = 0; c < x.size(); ++c) acc += weights[c] * x[c];
            return std::clamp(acc, 0.0, 1.0);
          },
          std::move(mono)};
}

}  // namespace riskband
