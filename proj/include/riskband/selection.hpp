#pragma once

#include "riskband/empirical.hpp"
#include "riskband/types.hpp"

#include <string>

namespace riskband {

enum class SelectionScheme { EvenTradeoff, Elbow };

std::string_view to_string(SelectionScheme scheme);
SelectionScheme parse_selection_scheme(std::string_view name);

struct SelectionResult {
  Index index = 0;  ///< chosen grid index
  SelectionScheme scheme = SelectionScheme::EvenTradeoff;
  double objective = 0.0;  ///< L + Q for even-tradeoff, distance to the line for elbow
  IndexSet constraint;
  bool unsigned_fallback = false;  ///< elbow only: no point lay below the line
};

/// argmin over `constraint` of L(t) + Q(t); ties go to the smallest index.
SelectionResult select_even_tradeoff(const RiskCurve& risk, const RiskCurve& tradeoff,
                                     const IndexSet& constraint);

/// argmax over `constraint` of the distance from (L(t), Q(t)) to the line
/// through (1,0) and (0,1), among points strictly below it. If none is below,
/// the unsigned distance is used and the result is flagged.
SelectionResult select_elbow(const RiskCurve& risk, const RiskCurve& tradeoff,
                             const IndexSet& constraint);

SelectionResult select(SelectionScheme scheme, const RiskCurve& risk, const RiskCurve& tradeoff,
                       const IndexSet& constraint);

}  // namespace riskband
