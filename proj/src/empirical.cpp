#include "riskband/empirical.hpp"

#include "riskband/error.hpp"
#include "riskband/kernels.hpp"

#include <utility>
#include <vector>

namespace riskband {

RiskCurve::RiskCurve(ParameterGrid grid, Vector values, Index sample_size)
    : grid_(std::move(grid)), values_(std::move(values)), sample_size_(sample_size) {
  if (values_.size() != grid_.size())
    fail(ErrorCode::InvalidArgument, "risk curve length does not match its grid");
  if (sample_size_ < 0) fail(ErrorCode::InvalidArgument, "negative sample size");
  if (!((values_.array() >= 0.0) && (values_.array() <= 1.0)).all())
    fail(ErrorCode::Domain, "risk curve values must lie in [0,1]");
}

RiskCurve empirical_risk(const LossMatrix& matrix) {
  return RiskCurve(matrix.grid(), kernels::column_means(matrix.values()), matrix.samples());
}

double sup_deviation(const RiskCurve& a, const RiskCurve& b, const IndexSet& subset, Sign sign,
                     double scale) {
  if (!(a.grid() == b.grid())) fail(ErrorCode::InvalidArgument, "curves are on different grids");
  subset.check_within(a.size());
  const Vector diff = scale * (a.values() - b.values());
  return kernels::signed_sup(diff, subset, sign);
}

IndexSet sublevel_set(const RiskCurve& curve, double r, SetProvenance provenance) {
  std::vector<Index> out;
  for (Index j = 0; j < curve.size(); ++j) {
    if (curve[j] <= r) out.push_back(j);
  }
  return IndexSet(std::move(out), provenance);
}

}  // namespace riskband
