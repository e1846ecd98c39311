#include "riskband/bootstrap.hpp"
#include "riskband/empirical.hpp"
#include "riskband/error.hpp"
#include "riskband/evalharness.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

using namespace riskband;

namespace {

GeneratorSpec small_spec(double rho, Index m = 120) {
  GeneratorSpec spec;
  spec.rho = rho;
  spec.grid = ParameterGrid::linspace(-3.0, 3.0, m);
  return spec;
}

MethodConfig method(BandMethod which, std::size_t B = 200) {
  MethodConfig m;
  m.method = which;
  m.replicates = B;
  return m;
}

}  // namespace

TEST_SUITE("evalharness") {

TEST_CASE("equicorrelated factor reproduces the covariance") {
  for (double rho : {-0.25, -0.1, 0.0, 0.2, 0.6, 1.0}) {
    const Eigen::MatrixXd a = equicorrelated_factor(rho, 5);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(5, 5, rho);
    cov.diagonal().setOnes();
    CHECK((a * a.transpose() - cov).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("rho must keep the covariance positive semidefinite") {
  GeneratorSpec spec;
  spec.rho = -0.26;
  CHECK_THROWS_AS(spec.check(), Error);
  spec.rho = -0.25;
  CHECK_NOTHROW(spec.check());
  spec.rho = 1.01;
  CHECK_THROWS_AS(spec.check(), Error);
  spec.rho = -0.9;
  spec.batch_size = 2;
  CHECK_NOTHROW(spec.check());
}

TEST_CASE("truth is the standard normal cdf") {
  const RiskCurve truth = small_spec(0.2, 7).truth();
  CHECK(truth[3] == doctest::Approx(0.5));
  CHECK(truth[0] == doctest::Approx(0.0013498980316301).epsilon(1e-10));
  CHECK(truth[6] == doctest::Approx(1.0 - 0.0013498980316301).epsilon(1e-12));
}

TEST_CASE("synthetic draws are well formed") {
  const GeneratorSpec spec = small_spec(0.2, 50);
  const SyntheticDraw d = draw_synthetic(spec, 300, 5);
  REQUIRE(d.partner);
  CHECK(d.losses.samples() == 300);
  CHECK(d.losses.orientation() == Orientation::NonDecreasing);
  CHECK(d.partner->orientation() == Orientation::NonIncreasing);
  CHECK(validate(d.losses));
  CHECK(validate(*d.partner));
  const RowMatrix scaled = 5.0 * d.losses.values();
  CHECK((scaled.array() - scaled.array().round()).abs().maxCoeff() < 1e-12);
  // The partner is 1 exactly when no coordinate lies at or below t.
  CHECK(((d.partner->values().array() == 1.0) == (d.losses.values().array() == 0.0)).all());
  CHECK(draw_synthetic(spec, 300, 5).losses.values() == d.losses.values());
  CHECK(draw_synthetic(spec, 300, 6).losses.values() != d.losses.values());
  CHECK(gen_equicorrelated(300, 0.2, spec.grid, 5).values() == d.losses.values());
}

TEST_CASE("synthetic moments match the generator") {
  Vector t(1);
  t << 0.0;
  for (double rho : {0.2, 0.6}) {
    GeneratorSpec spec;
    spec.rho = rho;
    spec.grid = ParameterGrid(t);
    const Index n = 40000;
    const Vector col = draw_synthetic(spec, n, 3).losses.values().col(0);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / static_cast<double>(n - 1);
    // Var of (1/5) sum 1{X_k <= 0}: orthant probability 1/4 + asin(rho) / (2 pi).
    const double expected_var = (5.0 * 0.25 + 20.0 * std::asin(rho) / (2.0 * std::numbers::pi)) / 25.0;
    CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(expected_var / static_cast<double>(n)));
    CHECK(var == doctest::Approx(expected_var).epsilon(0.04));
  }
}

TEST_CASE("fast sup gaps agree with the full loss matrix path") {
  const GeneratorSpec spec = small_spec(0.3, 90);
  const RiskCurve truth = spec.truth();
  const std::vector<double> gaps = simulate_sup_gaps(spec, 150, 12, 44, ExecPolicy{2});
  for (std::size_t r = 0; r < gaps.size(); ++r) {
    const LossMatrix m = draw_synthetic(spec, 150, run_seeds(44, r).data).losses;
    const double direct = (truth.values() - empirical_risk(m).values()).maxCoeff();
    CHECK(gaps[r] == doctest::Approx(direct).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("oracle quantile shrinks like 1/sqrt(n)") {
  const GeneratorSpec spec = small_spec(0.2, 200);
  const double q1 = oracle_sup_quantile(spec, 200, 0.1, 2000, 1);
  const double q4 = oracle_sup_quantile(spec, 800, 0.1, 2000, 2);
  CHECK(q4 < q1);
  CHECK(q4 * 2.0 == doctest::Approx(q1).epsilon(0.15));
  std::vector<double> gaps = simulate_sup_gaps(spec, 200, 2000, 1);
  std::sort(gaps.begin(), gaps.end());
  CHECK(q1 == gaps[quantile_rank(2000, 0.1) - 1]);
}

TEST_CASE("constant generator") {
  GeneratorSpec spec;
  spec.family = GeneratorFamily::Constant;
  spec.constant = 0.3;
  spec.grid = ParameterGrid::linspace(0.0, 1.0, 5);
  const SyntheticScenario scenario(spec);
  const Evaluation eval = evaluate(method(BandMethod::RiskResampling), scenario, 20, 10, 1);
  CHECK(eval.anywhere.estimate == 0.0);
  for (const RunOutcome& r : eval.runs) CHECK(r.half_width == 0.0);
  for (double g : simulate_sup_gaps(spec, 20, 5, 1)) CHECK(g == 0.0);
}

TEST_CASE("custom generator") {
  GeneratorSpec spec;
  spec.family = GeneratorFamily::Custom;
  spec.grid = ParameterGrid::linspace(0.0, 1.0, 4);
  spec.custom_truth = Vector::LinSpaced(4, 0.0, 1.0);
  spec.custom_orientation = Orientation::NonDecreasing;
  spec.row_sampler = [](PhiloxEngine& e) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = u(e);
    Vector row(4);
    for (Index j = 0; j < 4; ++j) row[j] = x <= j / 3.0 ? 1.0 : 0.0;
    return row;
  };
  const SyntheticDraw d = draw_synthetic(spec, 500, 3);
  CHECK(validate(d.losses));
  CHECK(empirical_risk(d.losses)[1] == doctest::Approx(1.0 / 3.0).epsilon(0.2));
  spec.row_sampler = nullptr;
  CHECK_THROWS_AS(spec.check(), Error);
}

TEST_CASE("evaluation replays run by run") {
  const GeneratorSpec spec = small_spec(0.2);
  const SyntheticScenario scenario(spec);
  const RiskCurve truth = spec.truth();
  for (BandMethod which : {BandMethod::Nasm, BandMethod::RiskResampling,
                           BandMethod::RestrictedRiskResampling, BandMethod::Pointwise}) {
    const MethodConfig cfg = method(which);
    const Evaluation eval = evaluate(cfg, scenario, 200, 6, 31, EvalOptions{}, ExecPolicy{3});
    for (std::size_t r = 0; r < 6; ++r) {
      const RunSeeds seeds = run_seeds(31, r);
      const SyntheticDraw d = draw_synthetic(spec, 200, seeds.data);
      const ConfidenceBand band = upper_band(d.losses, cfg, seeds.bootstrap);
      const RiskCurve emp = empirical_risk(d.losses);
      bool anywhere = false, selected = false;
      for (Index j : band.validity()) {
        if (truth[j] > (*band.upper())[j]) {
          anywhere = true;
          selected |= emp[j] <= 0.1;
        }
      }
      CHECK(eval.runs[r].miss_anywhere == anywhere);
      CHECK(eval.runs[r].miss_selected == selected);
      CHECK((!eval.runs[r].miss_selected || eval.runs[r].miss_anywhere));
      const IndexSet constraint = sublevel_set(emp, 0.1);
      REQUIRE(eval.runs[r].selected_index);
      CHECK(*eval.runs[r].selected_index ==
            select_even_tradeoff(emp, empirical_risk(*d.partner), constraint).index);
    }
  }
}

TEST_CASE("metrics reports") {
  const SyntheticScenario scenario(small_spec(0.2));
  const Evaluation eval = evaluate(method(BandMethod::Nasm), scenario, 100, 40, 2);
  CHECK(eval.anywhere.runs == 40);
  CHECK(eval.anywhere.metric == "anywhere_miscoverage");
  CHECK(eval.selected.estimate <= eval.anywhere.estimate);
  CHECK(eval.conservatism.runs + eval.conservatism.excluded == 40);
  CHECK(eval.conservatism.estimate > 0.0);
  bool has_n = false;
  for (const auto& [k, v] : eval.anywhere.config) has_n |= k == "n" && v == "100";
  CHECK(has_n);

  const MetricsReport a = miscoverage_anywhere(method(BandMethod::Nasm), scenario, 100, 40, 2);
  CHECK(a.estimate == eval.anywhere.estimate);
  const MetricsReport c = conservatism(method(BandMethod::Nasm), scenario, 100, 40, 2,
                                       SelectionScheme::EvenTradeoff);
  CHECK(c.estimate == eval.conservatism.estimate);
  CHECK_THROWS_AS(evaluate(method(BandMethod::Nasm), scenario, 100, 0, 2), Error);
}

TEST_CASE("evaluation does not depend on the thread count") {
  const SyntheticScenario scenario(small_spec(0.2));
  const MethodConfig cfg = method(BandMethod::RestrictedRiskResampling);
  const Evaluation a = evaluate(cfg, scenario, 150, 8, 5, EvalOptions{}, ExecPolicy::serial());
  const Evaluation b = evaluate(cfg, scenario, 150, 8, 5, EvalOptions{}, ExecPolicy{4});
  for (std::size_t r = 0; r < 8; ++r) {
    CHECK(a.runs[r].half_width == b.runs[r].half_width);
    CHECK(a.runs[r].gap == b.runs[r].gap);
  }
}

TEST_CASE("surrogate split and draws") {
  const LossMatrix pop = testing::step_losses(101, 20, 8);
  const auto [holdout, sampling] = split_surrogate(pop, 3);
  CHECK(holdout.samples() == 50);
  CHECK(sampling.samples() == 51);
  // The halves partition the rows: summed losses are preserved.
  CHECK((holdout.values().colwise().sum() + sampling.values().colwise().sum() -
         pop.values().colwise().sum())
            .cwiseAbs()
            .maxCoeff() < 1e-9);

  const SurrogateScenario scenario(pop, pop);
  const ScenarioDraw d = scenario.draw(300, 9);
  CHECK(d.losses.samples() == 300);
  REQUIRE(d.partner);
  CHECK(d.partner->values() == d.losses.values());
  CHECK(d.truth.size() == 20);
  const ScenarioDraw again = scenario.draw(300, 9);
  CHECK(again.losses.values() == d.losses.values());
  CHECK(again.truth.values() == d.truth.values());
  CHECK_THROWS_AS(SurrogateScenario(pop, testing::step_losses(50, 20, 1)), Error);
}

}
