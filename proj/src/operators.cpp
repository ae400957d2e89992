#include "sphmax/operators.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include "sphmax/errors.hpp"
#include "sphmax/rng.hpp"

namespace sphmax {

RadiusGrid::RadiusGrid(double t_min, double t_max, std::size_t count) {
  if (!(t_min > 0.0) || !std::isfinite(t_max)) throw ConfigError("radius grid: need 0 < t_min and finite t_max");
  if (t_max < t_min) throw ConfigError("radius grid: t_max < t_min");
  if (count == 0) throw ConfigError("radius grid: count must be >= 1");
  if (count > 1 && t_max == t_min) throw ConfigError("radius grid: several radii need t_max > t_min");
  radii_.resize(count);
  if (count == 1) {
    radii_[0] = t_min;
    return;
  }
  const double ratio = std::log(t_max / t_min);
  for (std::size_t i = 0; i < count; ++i)
    radii_[i] = t_min * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
  radii_.back() = t_max;
}

RadiusGrid RadiusGrid::per_decade(double t_min, double t_max, int per_decade) {
  if (per_decade < 1) throw ConfigError("radius grid: per_decade must be >= 1");
  if (!(t_min > 0.0) || t_max < t_min) throw ConfigError("radius grid: need 0 < t_min <= t_max");
  const double decades = std::log10(t_max / t_min);
  const auto count = static_cast<std::size_t>(std::llround(decades * per_decade)) + 1;
  return {t_min, t_max, count};
}

RadiusGrid RadiusGrid::standard() { return per_decade(1e-3, 1e3, 64); }

RadiusGrid RadiusGrid::single(double t) { return {t, t, 1}; }

RadiusGrid RadiusGrid::refined() const {
  std::vector<double> out;
  out.reserve(2 * radii_.size());
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    if (i > 0) out.push_back(std::sqrt(radii_[i - 1] * radii_[i]));
    out.push_back(radii_[i]);
  }
  return RadiusGrid(std::move(out));
}

std::vector<double> RadiusGrid::local_refinement(std::size_t index, int extra) const {
  if (index >= radii_.size()) throw ConfigError("radius grid: refinement index out of range");
  if (radii_.size() < 2 || extra < 1) return {};
  const double lo = radii_[index == 0 ? 0 : index - 1];
  const double hi = radii_[std::min(index + 1, radii_.size() - 1)];
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(extra));
  const double span = std::log(hi / lo);
  for (int i = 1; i <= extra; ++i) {
    const double r = lo * std::exp(span * i / (extra + 1));
    if (r != radii_[index]) out.push_back(r);
  }
  return out;
}

OperatorConfig OperatorConfig::monte_carlo(int m, int n, std::size_t nodes, std::uint64_t seed, RadiusGrid grid) {
  return {sample_sphere(m * n, nodes, seed), std::move(grid), true, std::nullopt};
}

LinearConfig LinearConfig::monte_carlo(int n, std::size_t nodes, std::uint64_t seed, RadiusGrid grid) {
  return {sample_ball(n, nodes, derive_seed(seed, 0)), sample_sphere(n, nodes, derive_seed(seed, 1)), std::move(grid),
          true};
}

namespace {

void check_factors(std::span<const TestFunction> fs, std::span<const double> x) {
  if (fs.size() < 2) throw ConfigError("multilinear mean needs at least two functions");
  const int n = fs[0].dim();
  for (const auto& f : fs)
    if (f.dim() != n) throw DomainError("all functions must share the dimension n");
  if (x.size() != static_cast<std::size_t>(n)) throw DomainError("x must lie in R^n");
}

std::size_t nominal_of(const NodeSet& nodes, const Provenance& p) {
  return p.is_random() && p.count > nodes.size() ? p.count : nodes.size();
}

// Weighted node sum with NaN terms rejected; implicit zero terms pad the
// nominal count of importance-sampled rules.
template <class Term>
MeanResult weighted_mean(const NodeSet& nodes, const Provenance& prov, double scale, Term&& term) {
  const std::size_t nominal = nominal_of(nodes, prov);
  const double n = static_cast<double>(nominal);
  std::atomic<std::size_t> rejected{0};
  Moments mo = reduce_terms(nodes.size(), [&](std::size_t i) {
    const double v = term(nodes.node(i));
    if (std::isnan(v)) {
      rejected.fetch_add(1, std::memory_order_relaxed);
      return 0.0;
    }
    return n * nodes.weight(i) * scale * v;
  });
  if (nominal > nodes.size()) mo = Moments::merge(mo, Moments{static_cast<double>(nominal - nodes.size()), 0.0, 0.0});
  MeanResult out;
  out.estimate.value = mo.mean;
  out.estimate.std_error = prov.is_random() ? std::sqrt(mo.variance() / n) : 0.0;
  out.estimate.node_count = nominal;
  out.rejected = rejected.load();
  out.unreliable = static_cast<double>(out.rejected) > kRejectedFractionLimit * n;
  return out;
}

double probability_scale(const SphereQuadrature& q) {
  return q.convention() == MeasureConvention::Probability ? 1.0 : 1.0 / surface_area(q.dim());
}

MeanResult direct_mean(std::span<const TestFunction> fs, std::span<const double> x, std::span<const double> radii,
                       const SphereQuadrature& quad) {
  const auto n = x.size();
  const std::size_t m = fs.size();
  if (quad.dim() != static_cast<int>(m * n)) throw ConfigError("quadrature must live on S^{mn-1}");
  return weighted_mean(quad.nodes(), quad.provenance(), probability_scale(quad), [&](Point y) {
    thread_local std::vector<double> arg;
    arg.resize(n);
    double prod = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t c = 0; c < n; ++c) arg[c] = x[c] - radii[j] * y[j * n + c];
      const double v = fs[j].eval_or_nan(arg);
      if (std::isnan(v)) return v;
      prod *= v;
      if (prod == 0.0) return 0.0;
    }
    return prod;
  });
}

MeanResult sliced_mean(std::span<const TestFunction> fs, std::span<const double> x, double t,
                       const SlicingConfig& sc) {
  const int m = static_cast<int>(fs.size());
  const int n = fs[0].dim();
  const auto nu = static_cast<std::size_t>(n);
  const SliceRules rules = build_slice_rules(fs, x, t, sc);
  std::vector<std::optional<std::vector<double>>> foci;
  for (const auto& f : fs) foci.push_back(f.focus());
  const double cut2 = sc.exclusion_radius * sc.exclusion_radius;

  std::atomic<std::size_t> rejected{0};
  const Integrand integrand = [&](Point y) {
    thread_local std::vector<double> arg;
    arg.resize(nu);
    if (cut2 > 0.0) {
      double joint = 0.0;
      for (std::size_t j = 0; j < fs.size(); ++j) {
        if (!foci[j]) continue;
        for (std::size_t c = 0; c < nu; ++c) {
          const double d = x[c] - t * y[j * nu + c] - (*foci[j])[c];
          joint += d * d;
        }
      }
      if (joint < cut2) return 0.0;
    }
    double prod = 1.0;
    for (std::size_t j = 0; j < fs.size(); ++j) {
      for (std::size_t c = 0; c < nu; ++c) arg[c] = x[c] - t * y[j * nu + c];
      const double v = fs[j].eval_or_nan(arg);
      if (std::isnan(v)) {
        rejected.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
      }
      prod *= v;
      if (prod == 0.0) return 0.0;
    }
    return prod;
  };
  const EstimateResult est =
      slice_integrate(m, n, sc.k, integrand, rules.ball, rules.inner, SliceMode::Paired);
  const double area = surface_area(m * n);
  MeanResult out;
  out.estimate = est;
  out.estimate.value /= area;
  out.estimate.std_error /= area;
  out.rejected = rejected.load();
  out.unreliable = static_cast<double>(out.rejected) > kRejectedFractionLimit * static_cast<double>(est.node_count);
  return out;
}

template <class MeanAt>
MaximalResult grid_max(const RadiusGrid& grid, bool refine, MeanAt&& mean_at) {
  const auto& radii = grid.radii();
  MaximalResult out;
  out.value = -1.0;
  std::size_t best = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const MeanResult r = mean_at(radii[i]);
    out.unreliable = out.unreliable || r.unreliable;
    const double v = std::abs(r.estimate.value);
    if (v > out.value) {
      out.value = v;
      best = i;
    }
  }
  out.argmax = {radii[best]};
  if (refine) {
    for (double t : grid.local_refinement(best)) {
      const MeanResult r = mean_at(t);
      out.unreliable = out.unreliable || r.unreliable;
      const double v = std::abs(r.estimate.value);
      if (v > out.value) {
        out.value = v;
        out.argmax = {t};
      }
    }
  }
  return out;
}

}  // namespace

MeanResult spherical_mean_multi(std::span<const TestFunction> fs, std::span<const double> x, double t,
                                const OperatorConfig& cfg) {
  check_factors(fs, x);
  if (!(t > 0.0)) throw DomainError("spherical mean: radius must be positive");
  if (cfg.slicing) return sliced_mean(fs, x, t, *cfg.slicing);
  const std::vector<double> radii(fs.size(), t);
  return direct_mean(fs, x, radii, cfg.quad);
}

MeanResult spherical_mean_multi(std::span<const TestFunction> fs, std::span<const double> x,
                                std::span<const double> radii, const OperatorConfig& cfg) {
  check_factors(fs, x);
  if (radii.size() != fs.size()) throw ConfigError("need one radius per function");
  for (double r : radii)
    if (!(r > 0.0)) throw DomainError("spherical mean: radii must be positive");
  return direct_mean(fs, x, radii, cfg.quad);
}

MaximalResult maximal_multi(std::span<const TestFunction> fs, std::span<const double> x, const OperatorConfig& cfg) {
  check_factors(fs, x);
  return grid_max(cfg.radius_grid, cfg.refine, [&](double t) { return spherical_mean_multi(fs, x, t, cfg); });
}

MaximalResult maximal_multi_independent(std::span<const TestFunction> fs, std::span<const double> x,
                                        const OperatorConfig& cfg, std::span<const RadiusGrid> per_factor_grids) {
  check_factors(fs, x);
  if (per_factor_grids.size() != fs.size()) throw ConfigError("need one radius grid per function");
  std::size_t total = 1;
  for (const auto& g : per_factor_grids) {
    total *= g.count();
    if (total > kIndependentGridBudget)
      throw ConfigError("independent radius grid exceeds the budget of " + std::to_string(kIndependentGridBudget) +
                        " radius tuples");
  }
  const std::size_t m = fs.size();
  std::vector<std::size_t> idx(m, 0);
  std::vector<double> radii(m);
  MaximalResult out;
  out.value = -1.0;
  for (std::size_t step = 0; step < total; ++step) {
    for (std::size_t j = 0; j < m; ++j) radii[j] = per_factor_grids[j].radii()[idx[j]];
    const MeanResult r = spherical_mean_multi(fs, x, std::span<const double>(radii), cfg);
    out.unreliable = out.unreliable || r.unreliable;
    const double v = std::abs(r.estimate.value);
    if (v > out.value) {
      out.value = v;
      out.argmax = radii;
    }
    for (std::size_t j = m; j-- > 0;) {
      if (++idx[j] < per_factor_grids[j].count()) break;
      idx[j] = 0;
    }
  }
  return out;
}


MaximalResult hardy_littlewood(const TestFunction& f, std::span<const double> x, const LinearConfig& cfg) {
  const auto n = static_cast<std::size_t>(f.dim());
  if (x.size() != n) throw DomainError("x must lie in R^n");
  if (cfg.ball.dim() != f.dim()) throw ConfigError("ball rule must live in R^n");
  const double volume = cfg.ball.nodes().weight_sum();
  if (!(volume > 0.0)) throw ConfigError("ball rule has no weight");
  return grid_max(cfg.radius_grid, cfg.refine, [&](double r) {
    return weighted_mean(cfg.ball.nodes(), cfg.ball.provenance(), 1.0 / volume, [&](Point u) {
      thread_local std::vector<double> arg;
      arg.resize(n);
      for (std::size_t c = 0; c < n; ++c) arg[c] = x[c] + r * u[c];
      return std::abs(f.eval_or_nan(arg));
    });
  });
}

MaximalResult linear_spherical_maximal(const TestFunction& f, std::span<const double> x, const LinearConfig& cfg) {
  const auto n = static_cast<std::size_t>(f.dim());
  if (f.dim() < 2) throw DomainError("spherical maximal function needs n >= 2");
  if (x.size() != n) throw DomainError("x must lie in R^n");
  if (cfg.sphere.dim() != f.dim()) throw ConfigError("sphere rule must live on S^{n-1}");
  const double scale = probability_scale(cfg.sphere);
  return grid_max(cfg.radius_grid, cfg.refine, [&](double t) {
    return weighted_mean(cfg.sphere.nodes(), cfg.sphere.provenance(), scale, [&](Point y) {
      thread_local std::vector<double> arg;
      arg.resize(n);
      for (std::size_t c = 0; c < n; ++c) arg[c] = x[c] - t * y[c];
      return f.eval_or_nan(arg);
    });
  });
}

DominationResult domination_ratio_from(const MaximalResult& numerator, std::span<const MaximalResult> hardy,
                                       std::span<const MaximalResult> spherical, int k) {
  const auto m = static_cast<int>(hardy.size());
  if (k < 1 || k > m) throw ConfigError("domination: k must lie in 1..m");
  if (spherical.size() != hardy.size()) throw ConfigError("domination: need one spherical value per function");
  DominationResult out;
  out.numerator = numerator.value;
  out.unreliable = numerator.unreliable;
  double denom = spherical[static_cast<std::size_t>(k - 1)].value;
  out.unreliable = out.unreliable || spherical[static_cast<std::size_t>(k - 1)].unreliable;
  for (int j = 0; j < m; ++j) {
    if (j == k - 1) continue;
    denom *= hardy[static_cast<std::size_t>(j)].value;
    out.unreliable = out.unreliable || hardy[static_cast<std::size_t>(j)].unreliable;
  }
  out.denominator = denom;
  if (out.numerator == 0.0) {
    out.ratio = 0.0;
  } else if (denom == 0.0) {
    out.ratio = std::numeric_limits<double>::infinity();
    out.infinite = true;
  } else {
    out.ratio = out.numerator / denom;
  }
  return out;
}

DominationResult domination_ratio(std::span<const TestFunction> fs, std::span<const double> x, int k,
                                  const OperatorConfig& cfg, const LinearConfig& linear) {
  check_factors(fs, x);
  if (k < 1 || k > static_cast<int>(fs.size())) throw ConfigError("domination: k must lie in 1..m");
  for (const auto& f : fs)
    if (!f.nonnegative()) throw DomainError("domination: functions must be nonnegative");
  const MaximalResult num = maximal_multi(fs, x, cfg);
  std::vector<MaximalResult> hardy(fs.size());
  std::vector<MaximalResult> sph(fs.size());
  for (std::size_t j = 0; j < fs.size(); ++j) {
    if (static_cast<int>(j) == k - 1) continue;
    hardy[j] = hardy_littlewood(fs[j], x, linear);
  }
  sph[static_cast<std::size_t>(k - 1)] = linear_spherical_maximal(fs[static_cast<std::size_t>(k - 1)], x, linear);
  return domination_ratio_from(num, hardy, sph, k);
}

}  // namespace sphmax
