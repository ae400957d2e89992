// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sphmax/experiments.hpp"
#include "sphmax/function_space.hpp"
#include "sphmax/operators.hpp"
#include "sphmax/region.hpp"
#include "sphmax/rng.hpp"

using namespace sphmax;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

ExponentTuple tuple(int n, std::initializer_list<const char*> xs) {
  std::vector<Rational> r;
  for (const char* s : xs) r.push_back(parse_fraction(s));
  return ExponentTuple::make(n, r);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome slicing() {
  const auto cases = default_slice_cases();
  const SliceSurvey s = slicing_survey(cases, 100000, 2024);
  double worst = 0;
  for (const auto& c : s.checks) worst = std::max(worst, c.sigmas);
  return {s.pass && s.constant_pass,
          fmt("%.0f checks, worst %.2f sigma; F=1 gives %.5f vs 2pi^2", static_cast<double>(s.checks.size()), worst,
              s.constant_value)};
}

Outcome prop1() {
  const ExperimentReport rep = prop1_scan(tuple(2, {"3/4", "3/4"}), ScanConfig{});
  const DivergenceCheck sub = exclusion_levels(tuple(2, {"7/8", "7/8"}), 16, {1e-3, 1e-5, 1e-7}, 200000, 7);
  const DivergenceCheck crit = exclusion_levels(tuple(2, {"3/4", "3/4"}), 16, {1e-3, 1e-5, 1e-7}, 200000, 7);
  const bool diverges = sub.increasing && sub.min_growth > kDivergenceGrowth && crit.min_growth < kDivergenceGrowth;
  return {rep.status == Status::Pass && diverges,
          fmt("slope %.3f (r2 %.4f); sub-critical growth %.2f", rep.fit.slope, rep.fit.r_squared, sub.min_growth) +
              fmt(" per level, critical %.3f", crit.min_growth)};
}

Outcome prop2() {
  const ExperimentReport rep = prop2_scan(2, 2, 1, ScanConfig{});
  return {rep.status == Status::Pass, fmt("slope %.3f (r2 %.4f)", rep.fit.slope, rep.fit.r_squared)};
}

Outcome region() {
  bool ok = true;
  for (int m = 2; m <= 4; ++m)
    for (int n = 2; n <= 3; ++n) {
      std::set<std::vector<Rational>> got, want;
      const auto verts = polytope_vertices(m, n);
      for (const auto& v : verts) got.insert(v.recips);
      for (const auto& v : oracle::brute_force_vertices(m, n)) want.insert(v);
      ok = ok && got == want && verts.size() == (std::size_t{1} << m) + static_cast<std::size_t>(m) - 1;
    }
  ok = ok && classify(tuple(2, {"1/2", "1/2"})).verdict == Verdict::InteriorStrong;
  ok = ok && classify(tuple(2, {"1", "1"})).verdict == Verdict::Unbounded;
  ok = ok && classify(tuple(2, {"0", "0"})).verdict == Verdict::VertexOrigin_a;
  ok = ok && classify(tuple(3, {"0", "0"})).verdict == Verdict::VertexOrigin_a;
  ok = ok && classify(tuple(2, {"1/2", "1", "1"})).verdict == Verdict::CriticalBoundaryV_e;
  return {ok, "vertex sets for m 2..4, n 2..3 and the four examples"};
}

Outcome domination() {
  bool ok = true;
  std::string detail;
  for (auto [m, n] : {std::pair{2, 2}, std::pair{3, 2}}) {
    DominationSurveyConfig cfg;
    cfg.m = m;
    cfg.n = n;
    const double bound = frozen_domination_constant(m, n);
    const DominationSurvey s = domination_survey(cfg, bound);
    ok = ok && s.pass;
    detail += std::string(detail.empty() ? "" : "; ") + fmt("(%.0f,%.0f) max %.4f", m, n, s.max_ratio) +
              fmt(" <= %.4f, const %.12g", bound, s.constant_ratio);
  }
  return {ok, detail};
}

Outcome lemma2() {
  bool ok = true;
  std::string detail;
  struct P {
    double r1, r2, C;
  };
  std::uint64_t seed = 1;
  for (P p : {P{1, 1, 1}, P{1, 1, 2}, P{2, 3, 5}}) {
    const Lemma2Report r = lemma2_check(p.r1, p.r2, p.C, 1000000, seed++);
    ok = ok && r.pass;
    detail += std::string(detail.empty() ? "" : "; ") + fmt("max %.6f <= %.0f", r.max_ratio, r.bound);
  }
  return {ok, detail};
}

std::vector<double> random_rotation(int n, CounterStream& rng) {
  const auto nu = static_cast<std::size_t>(n);
  std::vector<double> a(nu * nu);
  for (std::size_t i = 0; i < nu; ++i) {
    for (;;) {
      for (std::size_t c = 0; c < nu; ++c) a[i * nu + c] = rng.normal();
      for (std::size_t j = 0; j < i; ++j) {
        double dot = 0;
        for (std::size_t c = 0; c < nu; ++c) dot += a[i * nu + c] * a[j * nu + c];
        for (std::size_t c = 0; c < nu; ++c) a[i * nu + c] -= dot * a[j * nu + c];
      }
      double norm = 0;
      for (std::size_t c = 0; c < nu; ++c) norm += a[i * nu + c] * a[i * nu + c];
      if (norm > 1e-6) {
        for (std::size_t c = 0; c < nu; ++c) a[i * nu + c] /= std::sqrt(norm);
        break;
      }
    }
  }
  // force det = +1
  double det = n == 2 ? a[0] * a[3] - a[1] * a[2]
                      : a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
                            a[2] * (a[3] * a[7] - a[4] * a[6]);
  if (det < 0)
    for (std::size_t c = 0; c < nu; ++c) a[c] = -a[c];
  return a;
}

Outcome symmetry() {
  CounterStream rng(77, 0);
  int dil_ok = 0, rot_ok = 0, mono_ok = 0;
  double worst = 0;
  for (int c = 0; c < 20; ++c) {
    const int m = 2 + c % 2;
    const int n = 2 + (c / 2) % 2;
    const auto nu = static_cast<std::size_t>(n);
    std::vector<TestFunction> fs;
    for (int j = 0; j < m; ++j) {
      std::vector<double> centre(nu);
      for (double& v : centre) v = rng.uniform() - 0.5;
      fs.push_back(TestFunction::gaussian(centre, 0.5 + rng.uniform()));
    }
    std::vector<double> x(nu);
    for (double& v : x) v = 2 * rng.uniform() - 1;
    const double t = 0.2 + 1.5 * rng.uniform();
    const double lambda = 0.5 + 2 * rng.uniform();
    const auto seed = static_cast<std::uint64_t>(c);
    const OperatorConfig cfg = OperatorConfig::monte_carlo(m, n, 40000, derive_seed(5, seed));

    std::vector<TestFunction> dil;
    for (const auto& f : fs) dil.push_back(f.dilated(lambda));
    std::vector<double> lx(x);
    for (double& v : lx) v *= lambda;
    const EstimateResult a = spherical_mean_multi(dil, x, t, cfg).estimate;
    const EstimateResult b = spherical_mean_multi(fs, lx, lambda * t, cfg).estimate;
    const double sa = std::abs(a.value - b.value) / std::max(std::hypot(a.std_error, b.std_error), 1e-300);
    dil_ok += sa <= 3.0;

    const std::vector<double> rot = random_rotation(n, rng);
    std::vector<TestFunction> rf;
    for (const auto& f : fs) rf.push_back(f.rotated(rot));
    std::vector<double> ax(nu, 0.0);  // A^T x
    for (std::size_t i = 0; i < nu; ++i)
      for (std::size_t k = 0; k < nu; ++k) ax[i] += rot[k * nu + i] * x[k];
    const OperatorConfig other = OperatorConfig::monte_carlo(m, n, 40000, derive_seed(6, seed));
    const EstimateResult r = spherical_mean_multi(rf, ax, t, other).estimate;
    const EstimateResult base = spherical_mean_multi(fs, x, t, cfg).estimate;
    const double sr = std::abs(r.value - base.value) / std::hypot(r.std_error, base.std_error);
    rot_ok += sr <= 3.0;
    worst = std::max({worst, sa, sr});

    OperatorConfig coarse = OperatorConfig::monte_carlo(m, n, 5000, derive_seed(7, seed), RadiusGrid::per_decade(0.02, 5, 4));
    coarse.refine = false;
    OperatorConfig fine = coarse;
    fine.radius_grid = coarse.radius_grid.refined();
    mono_ok += maximal_multi(fs, x, fine).value >= maximal_multi(fs, x, coarse).value;
  }
  return {dil_ok == 20 && rot_ok == 20 && mono_ok == 20,
          fmt("dilation %.0f/20, rotation %.0f/20", dil_ok, rot_ok) +
              fmt(", refinement %.0f/20, worst %.2f sigma", mono_ok, worst)};
}

Outcome weak_norm() {
  const double h = 0.01;
  const LatticeGrid disk = LatticeGrid::sample(TestFunction::ball_indicator({0.0, 0.0}, 1.0),
                                               LatticeGrid::punctured_cube(2, 1.5, h));
  const double a = weak_lp_quasinorm(disk, 2.0).value;
  const LatticeGrid power = LatticeGrid::sample(TestFunction::radial_power_log(2, 2.0, 0.0, 0.999),
                                                LatticeGrid::punctured_cube(2, 2.0, h));
  const double b = weak_lp_quasinorm(power, 1.0).value;
  return {std::abs(a - std::sqrt(pi)) <= 2 * h && std::abs(b - pi) <= 0.1 * pi,
          fmt("indicator %.5f vs %.5f; |x|^-2 %.4f vs pi", a, std::sqrt(pi), b)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "slicing identity", 120, slicing},   {2, "power-log scaling law", 300, prop1},
      {3, "indicator scaling law", 180, prop2}, {4, "region classifier", 5, region},
      {5, "pointwise domination", 180, domination}, {6, "monotonicity lemma", 10, lemma2},
      {7, "symmetry suite", 120, symmetry},   {8, "weak-norm estimator", 30, weak_norm},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("criterion %d %s: %s [%.1fs of %.0fs] %s%s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs, c.budget,
                o.detail.c_str(), in_time ? "" : " (over time budget)");
    std::fflush(stdout);
  }
  return failures;
}
