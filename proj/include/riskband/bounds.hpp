#pragma once

#include "riskband/empirical.hpp"
#include "riskband/loss_model.hpp"
#include "riskband/parallel.hpp"
#include "riskband/rng.hpp"
#include "riskband/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace riskband {

enum class BandMethod { Nasm, RiskResampling, RestrictedRiskResampling, Pointwise, Composed };

std::string_view to_string(BandMethod method);
BandMethod parse_band_method(std::string_view name);

/// Provenance and tuning details carried alongside a band.
struct BandMetadata {
  Index sample_size = 0;
  bool simultaneous = true;
  std::optional<std::size_t> replicates;
  std::optional<SeedRecord> seed;
  std::optional<double> bisection_tolerance;
  std::optional<int> scan_resolution;
  std::optional<double> denominator_floor;
  std::vector<std::string> warnings;
};

/// Per-grid-point bounds valid on `validity` with confidence 1 - delta.
/// Either side may be absent for one-sided bands. Entries are clamped to [0,1].
class ConfidenceBand {
 public:
  ConfidenceBand(ParameterGrid grid, std::optional<Vector> lower, std::optional<Vector> upper,
                 IndexSet validity, double delta, BandMethod method,
                 std::optional<double> half_width = std::nullopt);

  const ParameterGrid& grid() const noexcept { return grid_; }
  const std::optional<Vector>& lower() const noexcept { return lower_; }
  const std::optional<Vector>& upper() const noexcept { return upper_; }
  const IndexSet& validity() const noexcept { return validity_; }
  double delta() const noexcept { return delta_; }
  BandMethod method() const noexcept { return method_; }
  /// Additive half-width q/sqrt(n) for fixed-width bands.
  const std::optional<double>& half_width() const noexcept { return half_width_; }

  const BandMetadata& metadata() const noexcept { return metadata_; }
  BandMetadata& metadata() noexcept { return metadata_; }

 private:
  ParameterGrid grid_;
  std::optional<Vector> lower_;
  std::optional<Vector> upper_;
  IndexSet validity_;
  double delta_;
  BandMethod method_;
  std::optional<double> half_width_;
  BandMetadata metadata_;
};

/// Fixed-width band built from `curve` shifted by `half_width` on the requested side(s).
ConfidenceBand shifted_band(const RiskCurve& curve, double half_width, Side side, double delta,
                            BandMethod method, IndexSet validity);

/// sqrt(log(e / delta) / (2 n)): the uniform deviation allowed at level delta.
double nasm_width(Index n, double delta);

/// Empirical curve +/- nasm_width; two-sided bands spend delta/2 per side.
ConfidenceBand nasm_band(const RiskCurve& curve, double delta, Side side);

/// e * exp(-2 lambda^2), the tail bound on the one-sided suprema.
double tail_bound(double lambda);

/// Default absolute tolerance of the betting-bound bisection.
inline constexpr double kBisectionTolerance = 1e-9;

/// Capital K_i(p) for every prefix i = 1..n of the loss sequence.
std::vector<double> capital_process(std::span<const double> losses, double delta, double p);

/// Smallest p in [0,1] at which the running maximum of the capital process
/// exceeds 1/delta (bisection to `tolerance`); 1 when no such p exists.
double wsr_upper(std::span<const double> losses, double delta,
                 double tolerance = kBisectionTolerance);

/// Per-column betting upper bound. Pointwise valid only; the band's
/// metadata marks it as not simultaneous.
ConfidenceBand wsr_band(const LossMatrix& matrix, double delta,
                        const ExecPolicy& policy = ExecPolicy{});

}  // namespace riskband
