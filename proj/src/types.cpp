#include "riskband/types.hpp"

#include "riskband/error.hpp"

#include <algorithm>
#include <cmath>

namespace riskband {

ParameterGrid::ParameterGrid(Vector values) : values_(std::move(values)) {
  if (values_.size() < 1) fail(ErrorCode::InvalidArgument, "parameter grid is empty");
  for (Index j = 0; j < values_.size(); ++j) {
    if (!std::isfinite(values_[j]))
      fail(ErrorCode::Domain, "parameter grid contains a non-finite value");
    if (j > 0 && !(values_[j - 1] < values_[j]))
      fail(ErrorCode::Domain, "parameter grid must be strictly increasing (index " +
                                  std::to_string(j) + ")");
  }
}

ParameterGrid ParameterGrid::linspace(double lo, double hi, Index size) {
  if (size < 1) fail(ErrorCode::InvalidArgument, "grid size must be positive");
  if (size == 1) return ParameterGrid(Vector::Constant(1, lo));
  Vector v = Vector::LinSpaced(size, lo, hi);
  // LinSpaced may round the last point; pin both ends.
  v[0] = lo;
  v[size - 1] = hi;
  return ParameterGrid(std::move(v));
}

bool ParameterGrid::operator==(const ParameterGrid& other) const {
  return values_.size() == other.values_.size() && values_ == other.values_;
}

IndexSet::IndexSet(std::vector<Index> indices, SetProvenance provenance)
    : indices_(std::move(indices)), provenance_(provenance) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  if (!indices_.empty() && indices_.front() < 0)
    fail(ErrorCode::Domain, "index set contains a negative index");
}

IndexSet IndexSet::full(Index m) {
  std::vector<Index> all(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j) all[static_cast<std::size_t>(j)] = j;
  return IndexSet(std::move(all), SetProvenance::FullGrid);
}

bool IndexSet::contains(Index j) const {
  return std::binary_search(indices_.begin(), indices_.end(), j);
}

bool IndexSet::is_subset_of(const IndexSet& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(),
                       indices_.end());
}

void IndexSet::check_within(Index m) const {
  if (!indices_.empty() && indices_.back() >= m)
    fail(ErrorCode::InvalidArgument, "index set refers to grid index " +
                                         std::to_string(indices_.back()) +
                                         " but the grid has " + std::to_string(m) + " points");
}

IndexSet intersect(const IndexSet& a, const IndexSet& b) {
  std::vector<Index> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IndexSet(std::move(out), SetProvenance::Custom);
}

std::string_view to_string(Orientation o) {
  switch (o) {
    case Orientation::NonIncreasing: return "nonincreasing";
    case Orientation::NonDecreasing: return "nondecreasing";
    case Orientation::Unconstrained: return "unconstrained";
  }
  return "?";
}

std::string_view to_string(Sign s) {
  switch (s) {
    case Sign::Plus: return "plus";
    case Sign::Minus: return "minus";
    case Sign::TwoSided: return "two-sided";
  }
  return "?";
}

std::string_view to_string(Side s) {
  switch (s) {
    case Side::Upper: return "upper";
    case Side::Lower: return "lower";
    case Side::TwoSided: return "two-sided";
  }
  return "?";
}

std::string_view to_string(SetProvenance p) {
  switch (p) {
    case SetProvenance::FullGrid: return "full-grid";
    case SetProvenance::Sublevel: return "sublevel";
    case SetProvenance::AdjustedSublevel: return "adjusted-sublevel";
    case SetProvenance::Custom: return "custom";
  }
  return "?";
}

Orientation parse_orientation(std::string_view name) {
  if (name == "nonincreasing") return Orientation::NonIncreasing;
  if (name == "nondecreasing") return Orientation::NonDecreasing;
  if (name == "unconstrained") return Orientation::Unconstrained;
  fail(ErrorCode::InvalidArgument, "unknown orientation '" + std::string(name) + "'");
}

Sign parse_sign(std::string_view name) {
  if (name == "plus") return Sign::Plus;
  if (name == "minus") return Sign::Minus;
  if (name == "two-sided") return Sign::TwoSided;
  fail(ErrorCode::InvalidArgument, "unknown sign '" + std::string(name) + "'");
}

Side parse_side(std::string_view name) {
  if (name == "upper") return Side::Upper;
  if (name == "lower") return Side::Lower;
  if (name == "two-sided") return Side::TwoSided;
  fail(ErrorCode::InvalidArgument, "unknown side '" + std::string(name) + "'");
}

}  // namespace riskband
