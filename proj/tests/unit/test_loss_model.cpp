#include "riskband/empirical.hpp"
#include "riskband/error.hpp"
#include "riskband/loss_model.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numeric>

using namespace riskband;
using testing::rows;

TEST_SUITE("loss_model") {

TEST_CASE("construction checks shape and range") {
  const ParameterGrid grid = ParameterGrid::linspace(0.0, 1.0, 3);
  CHECK_THROWS_AS(LossMatrix(grid, rows({{0.0, 0.5}}), Orientation::Unconstrained), Error);
  CHECK_THROWS_AS(LossMatrix(grid, rows({{0.0, 0.5, 1.2}}), Orientation::Unconstrained), Error);
  CHECK_THROWS_AS(LossMatrix(grid, RowMatrix(0, 3), Orientation::Unconstrained), Error);
  try {
    LossMatrix(grid, rows({{0.0, 0.5, -0.1}}), Orientation::Unconstrained);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
}

TEST_CASE("validate reports the first orientation violation") {
  const ParameterGrid grid = ParameterGrid::linspace(0.0, 1.0, 4);
  const LossMatrix good(grid, rows({{1.0, 0.5, 0.5, 0.0}, {0.2, 0.2, 0.1, 0.0}}),
                        Orientation::NonIncreasing);
  CHECK(validate(good));
  const LossMatrix bad(grid, rows({{1.0, 0.5, 0.5, 0.0}, {0.2, 0.2, 0.3, 0.0}}),
                       Orientation::NonIncreasing);
  const ValidationReport report = validate(bad);
  CHECK_FALSE(report);
  CHECK(report.row == 1);
  CHECK(report.column == 2);
  CHECK(validate(bad, 0.15));
  CHECK(validate(bad.with_orientation(Orientation::Unconstrained)));
}

TEST_CASE("orientation detection") {
  CHECK(detect_orientation(rows({{1.0, 0.5}, {0.3, 0.3}})) == Orientation::NonIncreasing);
  CHECK(detect_orientation(rows({{0.0, 0.5}, {0.3, 0.3}})) == Orientation::NonDecreasing);
  CHECK(detect_orientation(rows({{0.0, 0.5}, {0.3, 0.1}})) == Orientation::Unconstrained);
  CHECK(detect_orientation(rows({{0.4, 0.4}})) == Orientation::NonIncreasing);
}

TEST_CASE("threshold losses for a single sample") {
  // Scores (0.9, 0.4, 0.1), labels (1, 0, 1), t = 0.5: only class 0 clears 1 - t.
  const BinaryScorePanel panel(rows({{0.9, 0.4, 0.1}}), rows({{1.0, 0.0, 1.0}}));
  Vector t(1);
  t << 0.5;
  const ParameterGrid grid(t);
  CHECK(threshold_losses(panel, grid, LossKind::FNP).values()(0, 0) == doctest::Approx(0.5));
  CHECK(threshold_losses(panel, grid, LossKind::FPP).values()(0, 0) == 0.0);
  CHECK(threshold_losses(panel, grid, LossKind::FDP).values()(0, 0) == 0.0);
  CHECK(threshold_losses(panel, grid, LossKind::SetSize).values()(0, 0) ==
        doctest::Approx(1.0 / 3.0));
}

TEST_CASE("threshold losses follow a brute-force recount") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Index n = 40;
  const Index k = 6;
  RowMatrix scores(n, k);
  RowMatrix labels(n, k);
  for (Index i = 0; i < n; ++i)
    for (Index c = 0; c < k; ++c) {
      scores(i, c) = u(gen);
      labels(i, c) = u(gen) < 0.4 ? 1.0 : 0.0;
    }
  const BinaryScorePanel panel(scores, labels);
  const ParameterGrid grid = ParameterGrid::linspace(0.0, 1.0, 57);
  for (LossKind kind : {LossKind::FNP, LossKind::FPP, LossKind::FDP, LossKind::SetSize}) {
    const LossMatrix losses = threshold_losses(panel, grid, kind);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < grid.size(); ++j) {
        int pos = 0, neg = 0, pred = 0, fn = 0, fp = 0;
        for (Index c = 0; c < k; ++c) {
          const bool y = labels(i, c) == 1.0;
          const bool in = scores(i, c) > 1.0 - grid[j];
          pos += y;
          neg += !y;
          pred += in;
          fn += y && !in;
          fp += !y && in;
        }
        double expected = 0.0;
        switch (kind) {
          case LossKind::FNP: expected = double(fn) / std::max(1, pos); break;
          case LossKind::FPP: expected = double(fp) / std::max(1, neg); break;
          case LossKind::FDP: expected = double(fp) / std::max(1, pred); break;
          case LossKind::SetSize: expected = double(pred) / double(k); break;
        }
        REQUIRE(losses.values()(i, j) == expected);
      }
    if (kind != LossKind::FDP) CHECK(validate(losses));
  }
}

TEST_CASE("threshold grid must lie in [0,1]") {
  const BinaryScorePanel panel(rows({{0.9}}), rows({{1.0}}));
  CHECK_THROWS_AS(threshold_losses(panel, ParameterGrid::linspace(-0.5, 1.0, 4), LossKind::FNP),
                  Error);
  CHECK_THROWS_AS(BinaryScorePanel(rows({{0.9}}), rows({{0.5}})), Error);
}

TEST_CASE("monotonize sandwich and idempotence") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LossMatrix m = testing::noise_losses(15, 30, seed);
    const LossMatrix lo = monotonize(m, Extremum::RunningMin);
    const LossMatrix hi = monotonize(m, Extremum::RunningMax);
    CHECK(lo.orientation() == Orientation::NonIncreasing);
    CHECK(hi.orientation() == Orientation::NonDecreasing);
    CHECK(validate(lo));
    CHECK(validate(hi));
    CHECK((lo.values().array() <= m.values().array()).all());
    CHECK((m.values().array() <= hi.values().array()).all());
    CHECK(monotonize(lo, Extremum::RunningMin).values() == lo.values());
    CHECK(monotonize(hi, Extremum::RunningMax).values() == hi.values());
    CHECK(lo.values().col(0) == m.values().col(0));
  }
}

TEST_CASE("batch means commute with the empirical risk") {
  for (Index k : {1, 2, 3, 7}) {
    const LossMatrix m = testing::noise_losses(50, 12, static_cast<std::uint64_t>(k));
    const BatchResult b = batch(m, k);
    CHECK(b.dropped_rows == 50 % k);
    CHECK(b.matrix.samples() == 50 / k);
    std::vector<Index> kept(static_cast<std::size_t>(50 - b.dropped_rows));
    std::iota(kept.begin(), kept.end(), Index{0});
    const Vector direct = empirical_risk(m.take_rows(kept)).values();
    const Vector batched = empirical_risk(b.matrix).values();
    CHECK((direct - batched).cwiseAbs().maxCoeff() < 1e-12);
  }
  const LossMatrix m = testing::noise_losses(5, 3, 1);
  CHECK_THROWS_AS(batch(m, 0), Error);
  CHECK_THROWS_AS(batch(m, 6), Error);
}

TEST_CASE("batch keeps monotone rows monotone") {
  const LossMatrix m = testing::step_losses(31, 20, 3);
  const BatchResult b = batch(m, 5);
  CHECK(b.dropped_rows == 1);
  CHECK(validate(b.matrix));
}

}
