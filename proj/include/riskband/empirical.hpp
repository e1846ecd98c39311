#pragma once

#include "riskband/loss_model.hpp"
#include "riskband/types.hpp"

namespace riskband {

/// Risk values on a grid. `sample_size` is the number of rows behind an
/// empirical curve and 0 for an analytic (true) curve.
class RiskCurve {
 public:
  RiskCurve(ParameterGrid grid, Vector values, Index sample_size);

  const ParameterGrid& grid() const noexcept { return grid_; }
  const Vector& values() const noexcept { return values_; }
  double operator[](Index j) const { return values_[j]; }
  Index sample_size() const noexcept { return sample_size_; }
  Index size() const noexcept { return values_.size(); }

 private:
  ParameterGrid grid_;
  Vector values_;
  Index sample_size_;
};

/// Column means of the loss matrix.
RiskCurve empirical_risk(const LossMatrix& matrix);

/// sup over `subset` of sign * scale * (a - b); 0 on the empty subset.
double sup_deviation(const RiskCurve& a, const RiskCurve& b, const IndexSet& subset, Sign sign,
                     double scale);

/// Grid indices whose curve value is at most r.
IndexSet sublevel_set(const RiskCurve& curve, double r,
                      SetProvenance provenance = SetProvenance::Sublevel);

}  // namespace riskband
