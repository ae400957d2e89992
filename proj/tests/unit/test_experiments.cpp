#include <cmath>
#include <vector>

#include "doctest.h"
#include "sphmax/errors.hpp"
#include "sphmax/experiments.hpp"

using namespace sphmax;

namespace {

ExponentTuple tuple(int n, std::initializer_list<const char*> xs) {
  std::vector<Rational> r;
  for (const char* s : xs) r.push_back(parse_fraction(s));
  return ExponentTuple::make(n, r);
}

ScanConfig quick(std::size_t samples = 20000) {
  ScanConfig c;
  c.samples = samples;
  return c;
}

}  // namespace

TEST_CASE("slope fit recovers an exact power law") {
  const std::vector<double> r{2, 4, 8, 16, 32};
  std::vector<double> v;
  for (double x : r) v.push_back(3.0 * std::pow(x, -2.5));
  const SlopeFit f = SlopeFit::fit(r, v);
  CHECK(f.slope == doctest::Approx(-2.5).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.points.size() == 5);
  CHECK_THROWS_AS(SlopeFit::fit(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), ConfigError);
  CHECK_THROWS_AS(SlopeFit::fit(r, std::vector<double>{1, 2, 0, 4, 5}), DomainError);
  const std::vector<double> flat{1, 1, 1, 1, 1};
  CHECK(SlopeFit::fit(r, flat).slope == doctest::Approx(0.0));
  CHECK(exit_code(Status::Pass) == 0);
  CHECK(exit_code(Status::Fail) == 1);
  CHECK(exit_code(Status::Inconclusive) == 2);
}

TEST_CASE("power-log construction") {
  const auto fs = prop1_functions(tuple(2, {"3/4", "3/4"}));
  REQUIRE(fs.size() == 2);
  const auto& a = std::get<RadialPowerLogFn>(fs[0].variant());
  const auto& b = std::get<RadialPowerLogFn>(fs[1].variant());
  CHECK(a.power == 1.5);
  CHECK(a.log_power == 1.5);
  CHECK(b.power == 1.5);
  CHECK(a.cutoff == doctest::Approx(std::exp(-1.0) / 100).epsilon(1e-15));
  CHECK(b.cutoff == doctest::Approx(std::exp(-1.0) / 2).epsilon(1e-15));
  for (const auto& f : fs) {
    CHECK(lp_norm(f, 4.0 / 3.0).finite());
    const double nu = std::get<RadialPowerLogFn>(f.variant()).cutoff;
    CHECK(f.eval(std::vector<double>{nu * 1.001, 0.0}) == 0.0);
    CHECK(f.eval(std::vector<double>{nu * 0.999, 0.0}) > 0.0);
  }
  for (const char* s : {"1/2", "5/6", "1"}) {
    const auto t = tuple(3, {s, s, s});
    const double p = 1.0 / boost::rational_cast<double>(t.recips[0]);
    for (const auto& f : prop1_functions(t)) CHECK(lp_norm(f, p).finite());
  }
  CHECK_THROWS_AS(prop1_functions(tuple(2, {"0", "1"})), ConfigError);
}

TEST_CASE("prop1 scan at desk scale") {
  const ExperimentReport rep = prop1_scan(tuple(2, {"3/4", "3/4"}), quick());
  CHECK(rep.status == Status::Pass);
  CHECK(std::abs(rep.fit.slope + 3.0) <= 0.3);
  CHECK(rep.fit.r_squared >= 0.95);
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    CHECK(rep.points[i].value > 0.0);
    if (i > 0) CHECK(rep.points[i].value < rep.points[i - 1].value);
  }
  CHECK(rep.config["recips"][0] == "3/4");
  CHECK_THROWS_AS(prop1_scan(tuple(2, {"1/2", "1/2"}), quick()), ConfigError);
  ScanConfig bad = quick();
  bad.radii = {1, 2, 4, 8};
  CHECK_THROWS_AS(prop1_scan(tuple(2, {"3/4", "3/4"}), bad), ConfigError);
  bad.radii = {16, 32, 64, 100};
  CHECK_THROWS_AS(prop1_scan(tuple(2, {"3/4", "3/4"}), bad), ConfigError);
}

TEST_CASE("prop1 slope is stable under rescaling R") {
  const auto t = tuple(2, {"3/4", "3/4"});
  ScanConfig shifted = quick();
  for (double& r : shifted.radii) r *= 2;
  const double a = prop1_scan(t, quick()).fit.slope;
  const double b = prop1_scan(t, shifted).fit.slope;
  CHECK(std::abs(a - b) <= 0.3);
}

TEST_CASE("trilinear prop1 scan") {
  const ExperimentReport rep = prop1_scan(tuple(2, {"5/6", "5/6", "5/6"}), quick(40000));
  CHECK(std::abs(rep.fit.slope + 5.0) <= 0.4);
  CHECK(rep.status == Status::Pass);
}

TEST_CASE("exclusion levels separate sub-critical and critical exponents") {
  const DivergenceCheck sub = exclusion_levels(tuple(2, {"7/8", "7/8"}), 16, {1e-3, 1e-5, 1e-7}, 20000, 5);
  CHECK(sub.increasing);
  CHECK(sub.min_growth > kDivergenceGrowth);
  const DivergenceCheck crit = exclusion_levels(tuple(2, {"3/4", "3/4"}), 16, {1e-3, 1e-5, 1e-7}, 20000, 5);
  CHECK(crit.min_growth < kDivergenceGrowth);
  CHECK_THROWS_AS(exclusion_levels(tuple(2, {"3/4", "3/4"}), 16, {1e-3, 1e-2}, 100, 1), ConfigError);
}

TEST_CASE("prop2 scans") {
  const ExperimentReport a = prop2_scan(2, 2, 1, quick());
  CHECK(a.status == Status::Pass);
  CHECK(std::abs(a.fit.slope + 2.0) <= 0.3);
  const ExperimentReport b = prop2_scan(3, 2, 2, quick());
  CHECK(std::abs(b.fit.slope + 4.0) <= 0.4);
  CHECK_THROWS_AS(prop2_scan(2, 2, 2, quick()), ConfigError);

  const ExperimentReport again = prop2_scan(2, 2, 1, quick());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].value == again.points[i].value);
    CHECK(a.points[i].std_error == again.points[i].std_error);
  }
}

TEST_CASE("constant inputs through the concentrated path give one at every R") {
  std::vector<double> values;
  const std::vector<double> radii{16, 32, 64, 128};
  for (double R : radii) {
    const std::vector<TestFunction> fs{TestFunction::constant(2, 1), TestFunction::constant(2, 1)};
    SlicingConfig sc;
    sc.samples = 20000;
    sc.seed = 3;
    sc.concentrate = true;
    const double t = std::sqrt(2.0) * R;
    OperatorConfig cfg{sample_sphere(4, 1, 1), RadiusGrid::single(t), false, sc};
    const MeanResult m = spherical_mean_multi(fs, std::vector<double>{R, 0.0}, t, cfg);
    CHECK(std::abs(m.estimate.value - 1.0) <= 3 * m.estimate.std_error + 1e-12);
    values.push_back(m.estimate.value);
  }
  CHECK(std::abs(SlopeFit::fit(radii, values).slope) < 0.05);
}

TEST_CASE("monotonicity lemma") {
  const Lemma2Report id = lemma2_check(1, 1, 1, 100000, 1);
  CHECK(id.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(id.pass);
  const Lemma2Report two = lemma2_check(1, 1, 2, 100000, 2);
  CHECK(two.pass);
  CHECK(two.max_ratio <= 2.0 + 1e-9);
  const Lemma2Report big = lemma2_check(2, 3, 5, 100000, 3);
  CHECK(big.pass);
  // dense grid over log s in (log smax - 30, log smax), log t in (log s - 10, log s + log C)
  const double r1 = 2, r2 = 3, C = 5, lsmax = -r2 / r1;
  auto profile = [&](double l) { return -r1 * l - r2 * std::log(-l); };
  double grid = -INFINITY;
  for (int i = 1; i <= 1500; ++i)
    for (int j = 0; j <= 1500; ++j) {
      const double ls = lsmax - 30.0 * i / 1500.0;
      const double lt = ls - 10.0 + (10.0 + std::log(C)) * j / 1500.0;
      if (lt < lsmax) grid = std::max(grid, profile(ls) - profile(lt));
    }
  CHECK(std::exp(grid) <= 25.0 + 1e-9);
  CHECK(big.max_ratio == doctest::Approx(std::exp(grid)).epsilon(0.02));
  CHECK_THROWS_AS(lemma2_check(1, 1, 0.5, 10, 1), ConfigError);
  CHECK_THROWS_AS(lemma2_check(1, 1, 2, 0, 1), ConfigError);
}

TEST_CASE("slicing survey at reduced size") {
  const auto cases = default_slice_cases();
  const SliceSurvey s = slicing_survey(cases, 20000, 17);
  CHECK(s.checks.size() >= 4 * 10);
  CHECK(s.constant_pass);
  for (const auto& c : s.checks) {
    CAPTURE(c.integrand);
    CHECK(c.pass);
  }
}

TEST_CASE("domination survey trivial members") {
  DominationSurveyConfig cfg;
  cfg.lattice_points = 3;
  cfg.nodes = 2000;
  const DominationSurvey s = domination_survey(cfg, 10.0);
  CHECK(s.constant_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.max_ratio_per_k.size() == 2);
  CHECK(s.evaluations > 0);
  CHECK(s.pass);
  CHECK(frozen_domination_constant(2, 2) == kDominationConstant22);
  CHECK(frozen_domination_constant(3, 2) == kDominationConstant32);
  CHECK_THROWS_AS(frozen_domination_constant(4, 4), ConfigError);
  CHECK(domination_battery(3, 2).size() == 3);
}
