#include "riskband/selection.hpp"

#include "riskband/error.hpp"

#include <cmath>
#include <numbers>

namespace riskband {

std::string_view to_string(SelectionScheme scheme) {
  return scheme == SelectionScheme::EvenTradeoff ? "even-tradeoff" : "elbow";
}

SelectionScheme parse_selection_scheme(std::string_view name) {
  if (name == "even-tradeoff") return SelectionScheme::EvenTradeoff;
  if (name == "elbow") return SelectionScheme::Elbow;
  fail(ErrorCode::InvalidArgument, "unknown selection scheme '" + std::string(name) + "'");
}

namespace {

void check_inputs(const RiskCurve& risk, const RiskCurve& tradeoff, const IndexSet& constraint) {
  if (!(risk.grid() == tradeoff.grid()))
    fail(ErrorCode::InvalidArgument, "selection curves are on different grids");
  if (constraint.empty()) fail(ErrorCode::Domain, "selection constraint set is empty");
  constraint.check_within(risk.size());
}

}  // namespace

SelectionResult select_even_tradeoff(const RiskCurve& risk, const RiskCurve& tradeoff,
                                     const IndexSet& constraint) {
  check_inputs(risk, tradeoff, constraint);
  SelectionResult best{*constraint.begin(), SelectionScheme::EvenTradeoff, 0.0, constraint, false};
  best.objective = risk[best.index] + tradeoff[best.index];
  for (Index j : constraint) {
    const double value = risk[j] + tradeoff[j];
    if (value < best.objective) {
      best.objective = value;
      best.index = j;
    }
  }
  return best;
}

SelectionResult select_elbow(const RiskCurve& risk, const RiskCurve& tradeoff,
                             const IndexSet& constraint) {
  check_inputs(risk, tradeoff, constraint);
  SelectionResult best{*constraint.begin(), SelectionScheme::Elbow, -1.0, constraint, false};
  for (Index j : constraint) {
    const double gap = 1.0 - risk[j] - tradeoff[j];
    if (gap > 0.0 && gap / std::numbers::sqrt2 > best.objective) {
      best.objective = gap / std::numbers::sqrt2;
      best.index = j;
    }
  }
  if (best.objective >= 0.0) return best;

  best.unsigned_fallback = true;
  best.index = *constraint.begin();
  best.objective = std::abs(1.0 - risk[best.index] - tradeoff[best.index]) / std::numbers::sqrt2;
  for (Index j : constraint) {
    const double distance = std::abs(1.0 - risk[j] - tradeoff[j]) / std::numbers::sqrt2;
    if (distance > best.objective) {
      best.objective = distance;
      best.index = j;
    }
  }
  return best;
}

SelectionResult select(SelectionScheme scheme, const RiskCurve& risk, const RiskCurve& tradeoff,
                       const IndexSet& constraint) {
  return scheme == SelectionScheme::EvenTradeoff ? select_even_tradeoff(risk, tradeoff, constraint)
                                                 : select_elbow(risk, tradeoff, constraint);
}

}  // namespace riskband
