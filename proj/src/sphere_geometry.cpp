#include "sphmax/sphere_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "sphmax/errors.hpp"
#include "sphmax/gauss_jacobi.hpp"
#include "sphmax/rng.hpp"

namespace sphmax {

namespace {

std::string describe_point(Point p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

double norm2(Point p) noexcept {
  double s = 0.0;
  for (double v : p) s += v * v;
  return s;
}

std::size_t nominal_count(const NodeSet& nodes, const Provenance& prov) {
  if (!prov.is_random()) return nodes.size();
  if (prov.count < nodes.size()) throw ConfigError("rule keeps more nodes than its nominal sample count");
  return prov.count;
}

EstimateResult finish(Moments m, std::size_t nominal, bool random) {
  if (static_cast<double>(nominal) > m.count)
    m = Moments::merge(m, Moments{static_cast<double>(nominal) - m.count, 0.0, 0.0});
  EstimateResult r;
  r.value = m.mean;
  r.node_count = nominal;
  r.std_error = random && nominal > 1 ? std::sqrt(m.variance() / static_cast<double>(nominal)) : 0.0;
  return r;
}

// Nodes and SurfaceArea weights of the tensor rule on S^{d-1}.
void build_product_sphere(int d, int order, std::vector<double>& coords, std::vector<double>& weights) {
  if (d == 2) {
    const int count = 2 * order;
    for (int j = 0; j < count; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / count;
      coords.push_back(std::cos(phi));
      coords.push_back(std::sin(phi));
      weights.push_back(2.0 * std::numbers::pi / count);
    }
    return;
  }
  std::vector<double> sub_coords, sub_weights;
  build_product_sphere(d - 1, order, sub_coords, sub_weights);
  const double gamma = (d - 3) / 2.0;
  const GaussRule polar = gauss_jacobi(order, gamma, gamma);
  for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
    const double t = polar.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (std::size_t j = 0; j < sub_weights.size(); ++j) {
      coords.push_back(t);
      for (int c = 0; c < d - 1; ++c) coords.push_back(s * sub_coords[j * static_cast<std::size_t>(d - 1) + c]);
      weights.push_back(polar.weights[i] * sub_weights[j]);
    }
  }
}

}  // namespace

NodeSet::NodeSet(int dim, std::vector<double> coords, std::vector<double> weights)
    : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {
  if (dim < 1) throw DomainError("node set dimension must be positive");
  if (coords_.size() != weights_.size() * static_cast<std::size_t>(dim))
    throw ConfigError("node coordinates do not match dimension times node count");
}

double NodeSet::weight_sum() const noexcept { return pairwise_sum(weights_); }

SphereQuadrature::SphereQuadrature(NodeSet nodes, MeasureConvention convention, Provenance provenance)
    : nodes_(std::move(nodes)), convention_(convention), provenance_(provenance) {
  if (nodes_.dim() < 2) throw DomainError("sphere rule needs ambient dimension >= 2");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (std::abs(std::sqrt(norm2(nodes_.node(i))) - 1.0) > 1e-12)
      throw DomainError("sphere node " + std::to_string(i) + " is not a unit vector");
    if (!(nodes_.weight(i) >= 0.0)) throw DomainError("negative sphere weight");
  }
  if (provenance_.kind == Provenance::Kind::ProductRule) {
    const double target = convention_ == MeasureConvention::Probability ? 1.0 : surface_area(nodes_.dim());
    if (std::abs(nodes_.weight_sum() - target) > 1e-9 * target)
      throw ConfigError("product rule weights do not sum to the total measure");
  }
}

SphereQuadrature SphereQuadrature::with_convention(MeasureConvention target) const {
  if (target == convention_) return *this;
  const double area = surface_area(dim());
  const double scale = target == MeasureConvention::SurfaceArea ? area : 1.0 / area;
  std::vector<double> coords(nodes_.coords().begin(), nodes_.coords().end());
  std::vector<double> weights(nodes_.weights().begin(), nodes_.weights().end());
  for (double& w : weights) w *= scale;
  return SphereQuadrature(NodeSet(dim(), std::move(coords), std::move(weights)), target, provenance_);
}

BallQuadrature::BallQuadrature(NodeSet nodes, Provenance provenance)
    : nodes_(std::move(nodes)), provenance_(provenance) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(norm2(nodes_.node(i)) < 1.0))
      throw DomainError("ball node " + std::to_string(i) + " is not strictly inside the unit ball");
    if (!(nodes_.weight(i) >= 0.0)) throw DomainError("negative ball weight");
  }
  if (provenance_.kind == Provenance::Kind::ProductRule && provenance_.boundary_exponent == 0.0) {
    const double target = ball_volume(nodes_.dim());
    if (std::abs(nodes_.weight_sum() - target) > 1e-9 * target)
      throw ConfigError("product rule weights do not sum to the ball volume");
  }
}

double surface_area(int d) {
  if (d <= 0) throw DomainError("surface_area: dimension must be positive, got " + std::to_string(d));
  return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

double ball_volume(int d) {
  if (d <= 0) throw DomainError("ball_volume: dimension must be positive, got " + std::to_string(d));
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

SphereQuadrature sample_sphere(int d, std::size_t count, std::uint64_t seed) {
  if (d < 2) throw DomainError("sample_sphere: dimension must be >= 2");
  if (count == 0) throw DomainError("sample_sphere: count must be >= 1");
  std::vector<double> coords(count * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < count; ++i) {
    CounterStream rng(seed, i);
    rng.unit_vector(std::span<double>(coords.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)));
  }
  std::vector<double> weights(count, 1.0 / static_cast<double>(count));
  return SphereQuadrature(NodeSet(d, std::move(coords), std::move(weights)), MeasureConvention::Probability,
                          {Provenance::Kind::MonteCarlo, seed, count, 0});
}

SphereQuadrature product_rule_sphere(int d, int order) {
  if (d < 2 || d > 6)
    throw UnsupportedDimensionError("product_rule_sphere supports 2 <= d <= 6, got " + std::to_string(d));
  if (order < 2) throw DomainError("product_rule_sphere: order must be >= 2");
  std::vector<double> coords, weights;
  build_product_sphere(d, order, coords, weights);
  return SphereQuadrature(NodeSet(d, std::move(coords), std::move(weights)), MeasureConvention::SurfaceArea,
                          {Provenance::Kind::ProductRule, 0, 0, order});
}

BallQuadrature sample_ball(int d, std::size_t count, std::uint64_t seed) {
  if (d < 1) throw DomainError("sample_ball: dimension must be >= 1");
  if (count == 0) throw DomainError("sample_ball: count must be >= 1");
  const auto du = static_cast<std::size_t>(d);
  std::vector<double> coords(count * du);
  for (std::size_t i = 0; i < count; ++i) {
    CounterStream rng(seed, i);
    std::span<double> node(coords.data() + i * du, du);
    rng.unit_vector(node);
    const double radius = std::pow(rng.uniform(), 1.0 / d);
    for (double& v : node) v *= radius;
  }
  std::vector<double> weights(count, ball_volume(d) / static_cast<double>(count));
  return BallQuadrature(NodeSet(d, std::move(coords), std::move(weights)),
                        {Provenance::Kind::MonteCarlo, seed, count, 0});
}

BallQuadrature sample_ball_stratified(int d, std::size_t count, std::uint64_t seed, double shell_inner,
                                      double shell_fraction) {
  if (d < 1) throw DomainError("sample_ball_stratified: dimension must be >= 1");
  if (count < 2) throw DomainError("sample_ball_stratified: count must be >= 2");
  if (!(shell_inner > 0.0 && shell_inner < 1.0) || !(shell_fraction > 0.0 && shell_fraction < 1.0))
    throw DomainError("sample_ball_stratified: shell parameters must lie in (0, 1)");
  const auto du = static_cast<std::size_t>(d);
  const auto shell_count = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(shell_fraction * static_cast<double>(count))), 1, count - 1);
  const std::size_t core_count = count - shell_count;
  const double inner_pow = std::pow(shell_inner, d);
  const double core_weight = ball_volume(d) * inner_pow / static_cast<double>(core_count);
  const double shell_weight = ball_volume(d) * (1.0 - inner_pow) / static_cast<double>(shell_count);

  std::vector<double> coords(count * du);
  std::vector<double> weights(count);
  for (std::size_t i = 0; i < count; ++i) {
    CounterStream rng(seed, i);
    std::span<double> node(coords.data() + i * du, du);
    rng.unit_vector(node);
    const double u = rng.uniform();
    const bool core = i < core_count;
    const double radius = core ? shell_inner * std::pow(u, 1.0 / d) : std::pow(inner_pow + u * (1.0 - inner_pow), 1.0 / d);
    for (double& v : node) v *= std::min(radius, std::nextafter(1.0, 0.0));
    weights[i] = core ? core_weight : shell_weight;
  }
  return BallQuadrature(NodeSet(d, std::move(coords), std::move(weights)),
                        {Provenance::Kind::MonteCarlo, seed, count, 0});
}

BallQuadrature product_rule_ball(int d, int order, double boundary_exponent) {
  if (d < 1 || d > 6)
    throw UnsupportedDimensionError("product_rule_ball supports 1 <= d <= 6, got " + std::to_string(d));
  if (order < 2) throw DomainError("product_rule_ball: order must be >= 2");
  if (!(boundary_exponent >= 0.0) || (d == 1 && boundary_exponent != 0.0))
    throw DomainError("product_rule_ball: boundary exponent must be >= 0 and needs d >= 2");
  std::vector<double> coords, weights;
  if (d == 1) {
    const GaussRule line = gauss_jacobi(order, 0.0, 0.0);
    coords = line.nodes;
    weights = line.weights;
  } else {
    // radius rho = (1 + u) / 2 with weight (1 - rho)^e rho^{d-1} d rho
    const GaussRule radial = gauss_jacobi(order, boundary_exponent, d - 1.0);
    const double radial_scale = std::pow(0.5, d + boundary_exponent);
    const SphereQuadrature dirs = product_rule_sphere(d, order);
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
      const double rho = 0.5 * (1.0 + radial.nodes[i]);
      const double unweight = std::pow(1.0 - rho, -boundary_exponent);
      for (std::size_t j = 0; j < dirs.size(); ++j) {
        for (double c : dirs.node(j)) coords.push_back(rho * c);
        weights.push_back(radial.weights[i] * radial_scale * unweight * dirs.weight(j));
      }
    }
  }
  return BallQuadrature(NodeSet(d, std::move(coords), std::move(weights)),
                        {Provenance::Kind::ProductRule, 0, 0, order, boundary_exponent});
}

EstimateResult integrate_nodes(const NodeSet& nodes, const Provenance& provenance, const Integrand& f) {
  const std::size_t nominal = nominal_count(nodes, provenance);
  const double scale = static_cast<double>(nominal);
  const Moments m = reduce_terms(nodes.size(), [&](std::size_t i) {
    const Point p = nodes.node(i);
    const double value = f(p);
    if (!std::isfinite(value))
      throw EvaluationError(i, "integrand is not finite at node " + std::to_string(i) + " " + describe_point(p));
    return scale * nodes.weight(i) * value;
  });
  return finish(m, nominal, provenance.is_random());
}

EstimateResult integrate(const SphereQuadrature& rule, const Integrand& f) {
  return integrate_nodes(rule.nodes(), rule.provenance(), f);
}

EstimateResult integrate(const BallQuadrature& rule, const Integrand& f) {
  return integrate_nodes(rule.nodes(), rule.provenance(), f);
}

EstimateResult slice_integrate(int m, int n, int k, const Integrand& f, const BallQuadrature& ball_rule,
                               const SphereQuadrature& inner_rule, SliceMode mode) {
  if (n < 2) throw DomainError("slice_integrate: n must be >= 2");
  if (k < 1 || k >= m) throw DomainError("slice_integrate: need 1 <= k < m");
  if (ball_rule.dim() != k * n) throw ConfigError("slice_integrate: ball rule must live in dimension k*n");
  if (inner_rule.dim() != (m - k) * n)
    throw ConfigError("slice_integrate: inner rule must live on S^{(m-k)n-1}");
  if (inner_rule.convention() != MeasureConvention::SurfaceArea)
    throw ConventionError("slice_integrate: inner rule must use the SurfaceArea convention");

  const bool ball_random = ball_rule.provenance().is_random();
  const bool inner_random = inner_rule.provenance().is_random();
  if (mode == SliceMode::Auto)
    mode = (ball_random && inner_random && inner_rule.size() >= ball_rule.size()) ? SliceMode::Paired : SliceMode::Nested;
  if (mode == SliceMode::Paired && (!ball_random || !inner_random || inner_rule.size() < ball_rule.size()))
    throw ConfigError("slice_integrate: paired mode needs two random rules with enough inner nodes");

  const auto kn = static_cast<std::size_t>(k * n);
  const auto inner_dim = static_cast<std::size_t>((m - k) * n);
  const int radial_power = (m - k) * n - 2;
  const std::size_t ball_nominal = nominal_count(ball_rule.nodes(), ball_rule.provenance());
  const std::size_t inner_nominal = nominal_count(inner_rule.nodes(), inner_rule.provenance());

  // r_Y per ball node; NaN marks nodes within 1e-14 of the unit sphere.
  std::vector<double> radius(ball_rule.size());
  std::size_t degenerate = 0;
  for (std::size_t i = 0; i < ball_rule.size(); ++i) {
    const double y2 = norm2(ball_rule.node(i));
    if (1.0 - std::sqrt(y2) <= 1e-14) {
      radius[i] = std::nan("");
      ++degenerate;
    } else {
      radius[i] = std::sqrt(1.0 - y2);
    }
  }

  auto eval_at = [&](std::size_t bi, std::size_t si) {
    thread_local std::vector<double> point;
    point.resize(kn + inner_dim);
    const Point y = ball_rule.node(bi);
    std::copy(y.begin(), y.end(), point.begin());
    const Point w = inner_rule.node(si);
    for (std::size_t c = 0; c < inner_dim; ++c) point[kn + c] = radius[bi] * w[c];
    const double value = f(Point(point.data(), point.size()));
    if (!std::isfinite(value))
      throw EvaluationError(bi, "integrand is not finite at slice node (" + std::to_string(bi) + ", " +
                                    std::to_string(si) + ") " + describe_point(Point(point.data(), point.size())));
    return value;
  };

  EstimateResult result;
  if (mode == SliceMode::Paired) {
    const double bscale = static_cast<double>(ball_nominal);
    const double sscale = static_cast<double>(inner_nominal);
    const Moments mo = reduce_terms(ball_rule.size(), [&](std::size_t i) {
      if (std::isnan(radius[i])) return 0.0;
      return bscale * ball_rule.weight(i) * std::pow(radius[i], radial_power) * sscale * inner_rule.weight(i) *
             eval_at(i, i);
    });
    result = finish(mo, ball_nominal, true);
  } else if (ball_random || !inner_random) {
    const double bscale = static_cast<double>(ball_nominal);
    const Moments mo = reduce_terms(ball_rule.size(), [&](std::size_t i) {
      if (std::isnan(radius[i])) return 0.0;
      double inner = 0.0;
      for (std::size_t j = 0; j < inner_rule.size(); ++j) inner += inner_rule.weight(j) * eval_at(i, j);
      return bscale * ball_rule.weight(i) * std::pow(radius[i], radial_power) * inner;
    });
    result = finish(mo, ball_nominal, ball_random);
  } else {
    // deterministic ball, random inner: the spread comes from the inner draws
    const double sscale = static_cast<double>(inner_nominal);
    const Moments mo = reduce_terms(inner_rule.size(), [&](std::size_t j) {
      double outer = 0.0;
      for (std::size_t i = 0; i < ball_rule.size(); ++i) {
        if (std::isnan(radius[i])) continue;
        outer += ball_rule.weight(i) * std::pow(radius[i], radial_power) * eval_at(i, j);
      }
      return sscale * inner_rule.weight(j) * outer;
    });
    result = finish(mo, inner_nominal, true);
  }
  result.degenerate_nodes = degenerate;
  return result;
}

}  // namespace sphmax
