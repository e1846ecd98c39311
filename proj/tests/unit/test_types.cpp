#include "riskband/error.hpp"
#include "riskband/types.hpp"

#include <doctest.h>

using namespace riskband;

TEST_SUITE("types") {

TEST_CASE("grid must be strictly increasing and finite") {
  Vector v(3);
  v << 0.0, 0.5, 0.5;
  CHECK_THROWS_AS(ParameterGrid{v}, Error);
  v << 0.0, 0.5, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(ParameterGrid{v}, Error);
  CHECK_THROWS_AS(ParameterGrid{Vector(0)}, Error);
}

TEST_CASE("linspace pins its end points") {
  const ParameterGrid g = ParameterGrid::linspace(-3.0, 3.0, 1000);
  CHECK(g.size() == 1000);
  CHECK(g[0] == -3.0);
  CHECK(g[999] == 3.0);
  CHECK(ParameterGrid::linspace(0.2, 0.9, 1)[0] == 0.2);
}

TEST_CASE("index sets are sorted and deduplicated") {
  const IndexSet s({4, 1, 4, 2}, SetProvenance::Custom);
  CHECK(s.indices() == std::vector<Index>{1, 2, 4});
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(3));
  CHECK(s.is_subset_of(IndexSet::full(5)));
  CHECK_FALSE(IndexSet::full(5).is_subset_of(s));
  CHECK_THROWS_AS(s.check_within(4), Error);
  CHECK_NOTHROW(s.check_within(5));
  CHECK_THROWS_AS(IndexSet({-1}, SetProvenance::Custom), Error);
}

TEST_CASE("intersection") {
  const IndexSet a({0, 1, 2, 5}, SetProvenance::Sublevel);
  const IndexSet b({1, 5, 7}, SetProvenance::Custom);
  CHECK(intersect(a, b).indices() == std::vector<Index>{1, 5});
  CHECK(intersect(a, IndexSet{}).empty());
}

TEST_CASE("enum names round-trip") {
  for (Orientation o : {Orientation::NonIncreasing, Orientation::NonDecreasing,
                        Orientation::Unconstrained})
    CHECK(parse_orientation(to_string(o)) == o);
  for (Sign s : {Sign::Plus, Sign::Minus, Sign::TwoSided}) CHECK(parse_sign(to_string(s)) == s);
  for (Side s : {Side::Upper, Side::Lower, Side::TwoSided}) CHECK(parse_side(to_string(s)) == s);
  CHECK_THROWS_AS(parse_side("sideways"), Error);
}

}
