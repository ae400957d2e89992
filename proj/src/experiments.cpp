#include "sphmax/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sphmax/errors.hpp"
#include "sphmax/rng.hpp"

namespace sphmax {

SlopeFit SlopeFit::fit(std::span<const double> radii, std::span<const double> values) {
  if (radii.size() != values.size()) throw ConfigError("slope fit: size mismatch");
  if (radii.size() < 4) throw ConfigError("slope fit: need at least 4 points");
  SlopeFit out;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !(values[i] > 0.0)) throw DomainError("slope fit: values must be positive");
    out.points.emplace_back(std::log(radii[i]), std::log(values[i]));
  }
  const double n = static_cast<double>(out.points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : out.points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : out.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw DomainError("slope fit: radii must not all coincide");
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return out;
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

int exit_code(Status s) {
  switch (s) {
    case Status::Pass: return 0;
    case Status::Fail: return 1;
    case Status::Inconclusive: return 2;
  }
  return 1;
}

namespace {

void check_radii(const std::vector<double>& radii, double r_min) {
  if (radii.size() < 4) throw ConfigError("scan: need at least 4 radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > r_min)) throw ConfigError("scan: every R must exceed " + std::to_string(r_min));
    if (i > 0 && !(radii[i] > radii[i - 1])) throw ConfigError("scan: radii must increase");
  }
  const double ratio = radii[1] / radii[0];
  for (std::size_t i = 2; i < radii.size(); ++i)
    if (std::abs(radii[i] / radii[i - 1] / ratio - 1.0) > 1e-9) throw ConfigError("scan: radii must be geometric");
}

MeanResult fixed_radius_mean(std::span<const TestFunction> fs, double R, const SlicingConfig& sc) {
  const int m = static_cast<int>(fs.size());
  const int n = fs[0].dim();
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  x[0] = R;
  const double t = std::sqrt(static_cast<double>(m)) * R;
  OperatorConfig cfg{sample_sphere(m * n, 1, sc.seed), RadiusGrid::single(t), false, sc};
  return spherical_mean_multi(fs, x, t, cfg);
}

// Evaluates every R, fits the slope and grades it.
ExperimentReport run_scan(std::string name, std::span<const TestFunction> fs, int k, double expected,
                          const ScanConfig& cfg) {
  const int m = static_cast<int>(fs.size());
  ExperimentReport rep;
  rep.name = std::move(name);
  rep.expected_slope = expected;
  rep.tolerance = cfg.tolerance > 0.0 ? cfg.tolerance : (m >= 3 ? 0.4 : 0.3);
  std::vector<double> values;
  bool unreliable = false;
  bool positive = true;
  for (std::size_t i = 0; i < cfg.radii.size(); ++i) {
    SlicingConfig sc;
    sc.k = k;
    sc.samples = cfg.samples;
    sc.seed = derive_seed(cfg.seed, i);
    sc.concentrate = true;
    const MeanResult r = fixed_radius_mean(fs, cfg.radii[i], sc);
    rep.points.push_back({cfg.radii[i], r.estimate.value, r.estimate.std_error, r.unreliable});
    values.push_back(r.estimate.value);
    unreliable = unreliable || r.unreliable;
    positive = positive && r.estimate.value > 0.0;
  }
  if (!positive) {
    rep.status = unreliable ? Status::Inconclusive : Status::Fail;
    rep.message = "some estimates are not positive; no slope fitted";
    return rep;
  }
  rep.fit = SlopeFit::fit(cfg.radii, values);
  const bool ok = std::abs(rep.fit.slope - expected) <= rep.tolerance && rep.fit.r_squared >= rep.min_r_squared;
  if (unreliable) {
    rep.status = Status::Inconclusive;
    rep.message = "too many rejected nodes at some R";
  } else {
    rep.status = ok ? Status::Pass : Status::Fail;
    rep.message = ok ? "slope within tolerance" : "slope or fit quality outside tolerance";
  }
  return rep;
}

nlohmann::json scan_config_json(const ScanConfig& cfg) {
  return {{"R", cfg.radii}, {"seed", cfg.seed}, {"samples", cfg.samples}};
}

}  // namespace

std::vector<TestFunction> prop1_functions(const ExponentTuple& t) {
  const double m = t.m;
  const double n = t.n;
  std::vector<TestFunction> out;
  for (int j = 0; j < t.m; ++j) {
    const Rational& r = t.recips[static_cast<std::size_t>(j)];
    if (r == Rational(0)) throw ConfigError("power-log construction needs every 1/p_j > 0");
    const double rj = boost::rational_cast<double>(r);
    const double cutoff = std::exp(-m / n) / (j + 1 < t.m ? 100.0 : 2.0);
    out.push_back(TestFunction::radial_power_log(t.n, n * rj, m * rj, cutoff));
  }
  return out;
}

ExperimentReport prop1_scan(const ExponentTuple& t, const ScanConfig& cfg) {
  if (t.recip_p() != critical_sum(t.m, t.n))
    throw ConfigError("prop1 scan: 1/p_1 + ... + 1/p_m must equal (mn-1)/n = " +
                      format_fraction(critical_sum(t.m, t.n)));
  check_radii(cfg.radii, 2.0 * (t.m - 1));
  const auto fs = prop1_functions(t);
  ExperimentReport rep = run_scan("prop1", fs, t.m - 1, 1.0 - t.m * t.n, cfg);
  rep.config = scan_config_json(cfg);
  rep.config["m"] = t.m;
  rep.config["n"] = t.n;
  std::vector<std::string> recips;
  for (const auto& r : t.recips) recips.push_back(format_fraction(r));
  rep.config["recips"] = recips;
  return rep;
}

DivergenceCheck exclusion_levels(const ExponentTuple& t, double R, std::vector<double> cuts, std::size_t samples,
                                 std::uint64_t seed) {
  if (cuts.size() < 2) throw ConfigError("exclusion levels: need at least two cuts");
  for (std::size_t i = 1; i < cuts.size(); ++i)
    if (!(cuts[i] < cuts[i - 1]) || !(cuts[i] > 0.0)) throw ConfigError("exclusion levels: cuts must decrease");
  const auto fs = prop1_functions(t);
  DivergenceCheck out;
  out.R = R;
  out.cuts = cuts;
  for (double cut : cuts) {
    SlicingConfig sc;
    sc.k = t.m - 1;
    sc.samples = samples;
    sc.seed = seed;
    sc.concentrate = true;
    sc.exclusion_radius = cut;
    const MeanResult r = fixed_radius_mean(fs, R, sc);
    out.values.push_back(r.estimate.value);
    out.std_errors.push_back(r.estimate.std_error);
  }
  out.increasing = true;
  out.min_growth = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < out.values.size(); ++i) {
    out.increasing = out.increasing && out.values[i] > out.values[i - 1];
    out.min_growth = std::min(out.min_growth, out.values[i] / out.values[i - 1]);
  }
  return out;
}

ExperimentReport prop2_scan(int m, int n, int k, const ScanConfig& cfg) {
  if (m < 2 || n < 2) throw ConfigError("prop2 scan: need m, n >= 2");
  if (k < 1 || k >= m) throw ConfigError("prop2 scan: need 1 <= k < m");
  check_radii(cfg.radii, 2.0 * (m - 1));
  std::vector<TestFunction> fs;
  for (int j = 0; j < m; ++j)
    fs.push_back(j < k ? TestFunction::ball_indicator(std::vector<double>(static_cast<std::size_t>(n), 0.0), 0.5)
                       : TestFunction::constant(n, 1.0));
  ExperimentReport rep = run_scan("prop2", fs, k, -static_cast<double>(k * n), cfg);
  rep.config = scan_config_json(cfg);
  rep.config["m"] = m;
  rep.config["n"] = n;
  rep.config["k"] = k;
  return rep;
}

Lemma2Report lemma2_check(double r1, double r2, double C, std::size_t samples, std::uint64_t seed) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw ConfigError("lemma2: need r1, r2 > 0");
  if (!(C >= 1.0)) throw ConfigError("lemma2: need C >= 1");
  if (samples == 0) throw ConfigError("lemma2: empty sample");
  const double log_smax = -r2 / r1;
  const double log_c = std::log(C);
  // log of s^{-r1} (log 1/s)^{-r2}
  auto profile = [&](double log_s) { return -r1 * log_s - r2 * std::log(-log_s); };
  Lemma2Report out{r1, r2, C, samples, 0.0, std::pow(C, r1), false};
  const double log_max = reduce_max(samples, -std::numeric_limits<double>::infinity(), [&](std::size_t i) {
    CounterStream rng(seed, i);
    for (;;) {
      const double log_s = log_smax - 30.0 * rng.uniform();
      // every eighth pair sits on the edge t = C s
      const double v = i % 8 == 0 ? log_c : -log_c - 5.0 + (2.0 * log_c + 5.0) * rng.uniform();
      const double log_t = log_s + v;
      if (log_t >= log_smax) continue;
      return profile(log_s) - profile(log_t);
    }
  });
  out.max_ratio = std::exp(log_max);
  out.pass = out.max_ratio <= out.bound + 1e-9;
  return out;
}

std::vector<SliceCase> default_slice_cases() { return {{2, 2, 1}, {3, 2, 1}, {3, 2, 2}, {2, 3, 1}}; }

namespace {

struct NamedIntegrand {
  std::string name;
  Integrand f;
};

std::vector<NamedIntegrand> slice_battery(int dim) {
  const auto last = static_cast<std::size_t>(dim - 1);
  auto gauss = [dim](std::vector<double> c, double w) {
    c.resize(static_cast<std::size_t>(dim), 0.0);
    return [c, w](Point p) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) d2 += (p[i] - c[i]) * (p[i] - c[i]);
      return std::exp(-d2 / (w * w));
    };
  };
  std::vector<double> far(static_cast<std::size_t>(dim), 0.0);
  far[last] = 1.0;
  std::vector<double> mid(static_cast<std::size_t>(dim), 0.0);
  mid[0] = 0.3;
  mid[last] = 0.3;
  return {
      {"1", [](Point) { return 1.0; }},
      {"3.5", [](Point) { return 3.5; }},
      {"x1^2", [](Point p) { return p[0] * p[0]; }},
      {"xD^2", [last](Point p) { return p[last] * p[last]; }},
      {"x1^2*xD^2", [last](Point p) { return p[0] * p[0] * p[last] * p[last]; }},
      {"x1^4", [](Point p) { return p[0] * p[0] * p[0] * p[0]; }},
      {"x1*x2*xD^2", [last](Point p) { return p[0] * p[1] * p[last] * p[last]; }},
      {"x1^3*xD", [last](Point p) { return p[0] * p[0] * p[0] * p[last]; }},
      {"gauss(e1,0.5)", gauss({1.0}, 0.5)},
      {"gauss(eD,0.7)", gauss(far, 0.7)},
      {"gauss(0.3e1+0.3eD,1)", gauss(mid, 1.0)},
  };
}

}  // namespace

SliceSurvey slicing_survey(std::span<const SliceCase> cases, std::size_t samples, std::uint64_t seed) {
  SliceSurvey out;
  out.pass = true;
  std::uint64_t task = 0;
  for (const SliceCase& c : cases) {
    const int dim = c.m * c.n;
    const SphereQuadrature direct_rule =
        sample_sphere(dim, samples, derive_seed(seed, task++)).with_convention(MeasureConvention::SurfaceArea);
    const BallQuadrature ball = sample_ball(c.k * c.n, samples, derive_seed(seed, task++));
    const SphereQuadrature inner = sample_sphere((c.m - c.k) * c.n, samples, derive_seed(seed, task++))
                                       .with_convention(MeasureConvention::SurfaceArea);
    for (const auto& [name, f] : slice_battery(dim)) {
      SliceCheck chk{c, name};
      const EstimateResult d = integrate(direct_rule, f);
      const EstimateResult s = slice_integrate(c.m, c.n, c.k, f, ball, inner, SliceMode::Paired);
      chk.direct = d.value;
      chk.direct_se = d.std_error;
      chk.sliced = s.value;
      chk.sliced_se = s.std_error;
      const double se = std::hypot(d.std_error, s.std_error);
      const double diff = std::abs(s.value - d.value);
      const double floor = 1e-12 * std::max(std::abs(d.value), std::abs(s.value));
      // differences at rounding level count as zero sigma
      chk.sigmas = diff <= floor ? 0.0 : (se > 0.0 ? diff / se : std::numeric_limits<double>::infinity());
      chk.pass = diff <= 3.0 * se + floor;
      out.pass = out.pass && chk.pass;
      if (c.m == 2 && c.n == 2 && c.k == 1 && name == "1") {
        out.constant_value = s.value;
        out.constant_se = s.std_error;
        const double exact = 2.0 * std::numbers::pi * std::numbers::pi;
        out.constant_pass = std::abs(s.value - exact) <= 3.0 * s.std_error + 1e-12 * exact;
      }
      out.checks.push_back(std::move(chk));
    }
  }
  const bool has_constant = std::any_of(cases.begin(), cases.end(),
                                        [](const SliceCase& c) { return c.m == 2 && c.n == 2 && c.k == 1; });
  if (has_constant) out.pass = out.pass && out.constant_pass;
  return out;
}

double frozen_domination_constant(int m, int n) {
  if (m == 2 && n == 2) return kDominationConstant22;
  if (m == 3 && n == 2) return kDominationConstant32;
  throw ConfigError("no frozen domination constant for (m, n) = (" + std::to_string(m) + ", " + std::to_string(n) +
                    ")");
}

std::vector<std::vector<TestFunction>> domination_battery(int m, int n) {
  const auto nu = static_cast<std::size_t>(n);
  std::vector<std::vector<TestFunction>> out(3);
  for (int j = 0; j < m; ++j) {
    std::vector<double> origin(nu, 0.0);
    out[0].push_back(TestFunction::gaussian(origin, 1.0));
    std::vector<double> c(nu, 0.0);
    const double angle = 2.0 * std::numbers::pi * j / m;
    c[0] = 0.75 * std::cos(angle);
    c[1] = 0.75 * std::sin(angle);
    out[1].push_back(TestFunction::gaussian(c, 0.6));
    out[2].push_back(TestFunction::gaussian(origin, 0.4 * (j + 1)));
  }
  return out;
}

namespace {

std::vector<std::vector<double>> lattice_points(int n, int per_axis, double half_width) {
  std::vector<std::vector<double>> out;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(per_axis);
  const double step = per_axis > 1 ? 2.0 * half_width / (per_axis - 1) : 0.0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<double> x(static_cast<std::size_t>(n));
    std::size_t rest = flat;
    for (int a = n - 1; a >= 0; --a) {
      const std::size_t idx = rest % static_cast<std::size_t>(per_axis);
      rest /= static_cast<std::size_t>(per_axis);
      x[static_cast<std::size_t>(a)] = per_axis > 1 ? -half_width + step * static_cast<double>(idx) : 0.0;
    }
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

DominationSurvey domination_survey(const DominationSurveyConfig& cfg, double bound) {
  if (cfg.m < 2 || cfg.n < 2) throw ConfigError("domination survey: need m, n >= 2");
  if (cfg.lattice_points < 1) throw ConfigError("domination survey: empty lattice");
  OperatorConfig ocfg = OperatorConfig::monte_carlo(cfg.m, cfg.n, cfg.nodes, derive_seed(cfg.seed, 0), cfg.grid);
  const LinearConfig lcfg = LinearConfig::monte_carlo(cfg.n, cfg.nodes, derive_seed(cfg.seed, 1), cfg.grid);
  DominationSurvey out;
  out.bound = bound;
  out.max_ratio_per_k.assign(static_cast<std::size_t>(cfg.m), 0.0);
  const auto m = static_cast<std::size_t>(cfg.m);

  auto ratios_at = [&](const std::vector<TestFunction>& fs, const std::vector<double>& x) {
    const MaximalResult num = maximal_multi(fs, x, ocfg);
    std::vector<MaximalResult> hardy(m), sph(m);
    for (std::size_t j = 0; j < m; ++j) {
      hardy[j] = hardy_littlewood(fs[j], x, lcfg);
      sph[j] = linear_spherical_maximal(fs[j], x, lcfg);
    }
    std::vector<DominationResult> res;
    for (int k = 1; k <= cfg.m; ++k) res.push_back(domination_ratio_from(num, hardy, sph, k));
    return res;
  };

  {
    std::vector<TestFunction> ones(m, TestFunction::constant(cfg.n, 1.0));
    const std::vector<double> x(static_cast<std::size_t>(cfg.n), 0.0);
    double worst = 0.0;
    for (const auto& r : ratios_at(ones, x)) worst = std::max(worst, std::abs(r.ratio - 1.0));
    out.constant_ratio = 1.0 + worst;
  }
  for (const auto& fs : domination_battery(cfg.m, cfg.n)) {
    for (const auto& x : lattice_points(cfg.n, cfg.lattice_points, cfg.half_width)) {
      const auto res = ratios_at(fs, x);
      for (std::size_t k = 0; k < m; ++k) {
        out.max_ratio_per_k[k] = std::max(out.max_ratio_per_k[k], res[k].ratio);
        out.unreliable = out.unreliable || res[k].unreliable;
        ++out.evaluations;
      }
    }
  }
  out.max_ratio = *std::max_element(out.max_ratio_per_k.begin(), out.max_ratio_per_k.end());
  out.pass = out.max_ratio <= bound && std::abs(out.constant_ratio - 1.0) <= 1e-12;
  return out;
}

}  // namespace sphmax
