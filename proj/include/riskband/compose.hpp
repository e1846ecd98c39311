#pragma once

#include "riskband/bounds.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace riskband {

/// Bands for k component risks on a shared grid. The combined confidence
/// parameter is the sum of the component deltas (union bound).
class ComponentBandSet {
 public:
  explicit ComponentBandSet(std::vector<ConfidenceBand> bands);

  const std::vector<ConfidenceBand>& bands() const noexcept { return bands_; }
  std::size_t size() const noexcept { return bands_.size(); }
  double delta() const noexcept { return delta_; }
  const ParameterGrid& grid() const { return bands_.front().grid(); }

 private:
  std::vector<ConfidenceBand> bands_;
  double delta_ = 0.0;
};

enum class Monotonicity { Increasing, Decreasing };

/// A map from k component risk values to a combined risk in [0,1].
using RiskMap = std::function<double(std::span<const double>)>;

inline constexpr int kDefaultScanResolution = 33;

/// Bounds psi(L_1, ..., L_k) over the box of component intervals at every grid
/// point of the common validity set. A missing component side is taken as the
/// trivial bound (0 below, 1 above).
///
/// With per-coordinate monotonicity the extremes sit at two opposite box
/// corners. Without it, `scan_resolution` points per axis are scanned and the
/// resolution is recorded in the band metadata; the scan brackets the true
/// extremes only up to that resolution.
ConfidenceBand combine(const ComponentBandSet& components, const RiskMap& psi,
                       const std::optional<std::vector<Monotonicity>>& monotonicity,
                       int scan_resolution = kDefaultScanResolution);

/// Upper band for a ratio risk: min(1, num_upper / max(den_lower, floor)).
/// The delta is the sum of both component deltas.
ConfidenceBand selective_ratio_upper(const ConfidenceBand& numerator,
                                     const ConfidenceBand& denominator, double floor);

/// Named maps available from the command line. Sums are clamped to [0,1],
/// which keeps them coordinatewise monotone.
struct NamedRiskMap {
  RiskMap map;
  std::vector<Monotonicity> monotonicity;
};

NamedRiskMap ratio_map(double floor);
NamedRiskMap sum_map(std::size_t k);
NamedRiskMap weighted_sum_map(std::vector<double> weights);

}  // namespace riskband
