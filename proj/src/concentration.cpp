// Importance-sampled slice rules for integrands concentrated near the foci of
// the factors (small supports far from x relative to the support size).

#include <algorithm>
#include <cmath>
#include <limits>

#include "sphmax/errors.hpp"
#include "sphmax/operators.hpp"
#include "sphmax/rng.hpp"

namespace sphmax {

namespace {

// Radial power law |z|^{-alpha} on B^n(0, rho).
struct RadialProposal {
  int n;
  double rho;
  double alpha;

  double sample_radius(double u) const { return rho * std::pow(u, 1.0 / (n - alpha)); }
  double density(double r) const {
    return (n - alpha) / (surface_area(n) * std::pow(rho, n - alpha)) * std::pow(r, -alpha);
  }
};

struct OuterBlock {
  bool bounded = false;
  std::vector<double> center;  // (x - focus) / t
  RadialProposal radial{2, 1.0, 0.0};
  double t = 1.0;
};

// Householder reflection exchanging e_0 and `axis` (unit).
void reflect_to_axis(std::span<double> v, std::span<const double> axis) {
  const std::size_t d = v.size();
  std::vector<double> u(axis.begin(), axis.end());
  for (double& c : u) c = -c;
  u[0] += 1.0;
  double uu = 0.0, uv = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    uu += u[i] * u[i];
    uv += u[i] * v[i];
  }
  if (uu < 1e-30) return;
  const double s = 2.0 * uv / uu;
  for (std::size_t i = 0; i < d; ++i) v[i] -= s * u[i];
}

}  // namespace

SliceRules build_slice_rules(std::span<const TestFunction> fs, std::span<const double> x, double t,
                             const SlicingConfig& cfg) {
  const int m = static_cast<int>(fs.size());
  if (m < 2) throw ConfigError("sliced mean needs at least two factors");
  const int n = fs[0].dim();
  const int k = cfg.k;
  if (k < 1 || k >= m) throw ConfigError("slicing: need 1 <= k < m");
  if (cfg.samples == 0) throw ConfigError("slicing: sample count must be positive");
  if (!(t > 0.0)) throw DomainError("slicing: radius must be positive");
  const int inner_dim = (m - k) * n;
  const auto nu = static_cast<std::size_t>(n);
  const std::uint64_t ball_seed = derive_seed(cfg.seed, 0);
  const std::uint64_t inner_seed = derive_seed(cfg.seed, 1);

  if (!cfg.concentrate) {
    return {sample_ball(k * n, cfg.samples, ball_seed),
            sample_sphere(inner_dim, cfg.samples, inner_seed).with_convention(MeasureConvention::SurfaceArea)};
  }

  // outer proposal, block by block
  std::vector<OuterBlock> blocks(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const TestFunction& f = fs[static_cast<std::size_t>(j)];
    const auto focus = f.focus();
    const double rho = f.support_radius();
    OuterBlock& b = blocks[static_cast<std::size_t>(j)];
    b.t = t;
    if (focus && std::isfinite(rho)) {
      b.bounded = true;
      b.center.resize(nu);
      for (std::size_t c = 0; c < nu; ++c) b.center[c] = (x[c] - (*focus)[c]) / t;
      const double alpha = std::clamp(f.singular_exponent(), 0.0, n - cfg.exponent_margin);
      b.radial = RadialProposal{n, rho, alpha};
    }
  }

  const std::size_t kn = static_cast<std::size_t>(k) * nu;
  std::vector<double> ball_coords;
  std::vector<double> ball_weights;
  ball_coords.reserve(cfg.samples * kn);
  ball_weights.reserve(cfg.samples);
  const double inv_count = 1.0 / static_cast<double>(cfg.samples);
  std::vector<double> node(kn);
  std::vector<double> dir(nu);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    CounterStream rng(ball_seed, i);
    double density = 1.0;
    double norm2 = 0.0;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      const OuterBlock& b = blocks[j];
      std::span<double> y(node.data() + j * nu, nu);
      rng.unit_vector(dir);
      const double u = rng.uniform();
      if (b.bounded) {
        const double r = b.radial.sample_radius(u);
        for (std::size_t c = 0; c < nu; ++c) y[c] = b.center[c] - r * dir[c] / t;
        density *= b.radial.density(r) * std::pow(t, n);
      } else {
        const double r = std::pow(u, 1.0 / n);
        for (std::size_t c = 0; c < nu; ++c) y[c] = r * dir[c];
        density /= ball_volume(n);
      }
      for (double v : y) norm2 += v * v;
    }
    if (!(norm2 < 1.0)) continue;  // outside B^{kn}: a zero term
    ball_coords.insert(ball_coords.end(), node.begin(), node.end());
    ball_weights.push_back(inv_count / density);
  }
  BallQuadrature ball(NodeSet(k * n, std::move(ball_coords), std::move(ball_weights)),
                      {Provenance::Kind::ImportanceSampled, ball_seed, cfg.samples, 0});

  // inner proposal: a cap around the focus direction when every inner factor is bounded
  std::vector<double> axis(static_cast<std::size_t>(inner_dim));
  double joint_radius2 = 0.0;
  double inner_exponent = 0.0;
  bool inner_bounded = true;
  for (int j = k; j < m; ++j) {
    const TestFunction& f = fs[static_cast<std::size_t>(j)];
    const auto focus = f.focus();
    const double rho = f.support_radius();
    if (!focus || !std::isfinite(rho)) {
      inner_bounded = false;
      break;
    }
    for (std::size_t c = 0; c < nu; ++c) axis[static_cast<std::size_t>(j - k) * nu + c] = (x[c] - (*focus)[c]) / t;
    joint_radius2 += rho * rho / (t * t);
    inner_exponent = std::max(inner_exponent, f.singular_exponent());
  }
  double axis_norm = 0.0;
  for (double v : axis) axis_norm += v * v;
  axis_norm = std::sqrt(axis_norm);
  if (!inner_bounded || std::sqrt(joint_radius2) >= axis_norm) {
    return {std::move(ball),
            sample_sphere(inner_dim, cfg.samples, inner_seed).with_convention(MeasureConvention::SurfaceArea)};
  }
  for (double& v : axis) v /= axis_norm;
  // the sphere point r W lies within the joint support only if sin(angle(W, axis)) <= radius / |axis|
  const double cap = std::asin(std::sqrt(joint_radius2) / axis_norm);
  const int tangent_dim = inner_dim - 1;
  const double beta = cfg.cap_exponent_fraction * inner_exponent;
  const double tangent_area = surface_area(tangent_dim);

  // Inner node i is drawn given ball node i. For the sphere of radius r_Y the
  // joint argument behaves like (core^2 + angle^2)^{1/2} with
  // core = ||P| - r_Y| / sqrt(r_Y |P|), so the angle density is flat inside
  // the core and a power law outside it.
  const std::size_t kept = ball.size();
  const auto id = static_cast<std::size_t>(inner_dim);
  std::vector<double> inner_coords(kept * id);
  std::vector<double> inner_weights(kept);
  std::vector<double> tangent(static_cast<std::size_t>(tangent_dim));
  const double td = tangent_dim;
  for (std::size_t i = 0; i < kept; ++i) {
    CounterStream rng(inner_seed, i);
    double y2 = 0.0;
    for (double v : ball.node(i)) y2 += v * v;
    const double r_y = std::sqrt(std::max(0.0, 1.0 - y2));
    const double core = std::clamp(r_y > 0.0 ? std::abs(axis_norm - r_y) / std::sqrt(r_y * axis_norm) : cap,
                                   1e-12 * cap, cap);
    const double e = td - beta;
    const double core_mass = std::pow(core, e) / td;
    double tail_mass = 0.0;
    if (core < cap) tail_mass = std::abs(e) < 1e-12 ? std::log(cap / core) : (std::pow(cap, e) - std::pow(core, e)) / e;
    const double norm = tangent_area * (core_mass + tail_mass);

    if (tangent_dim == 1) {
      tangent[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    } else {
      rng.unit_vector(tangent);
    }
    const double pick = rng.uniform();
    const double u = rng.uniform();
    double angle;
    if (pick * (core_mass + tail_mass) < core_mass) {
      angle = core * std::pow(u, 1.0 / td);
    } else if (std::abs(e) < 1e-12) {
      angle = core * std::pow(cap / core, u);
    } else {
      angle = std::pow(std::pow(core, e) + u * (std::pow(cap, e) - std::pow(core, e)), 1.0 / e);
    }
    angle = std::max(angle, 1e-300);
    std::span<double> w(inner_coords.data() + i * id, id);
    w[0] = std::cos(angle);
    for (std::size_t c = 0; c < tangent.size(); ++c) w[c + 1] = std::sin(angle) * tangent[c];
    reflect_to_axis(w, axis);
    double wn = 0.0;
    for (double v : w) wn += v * v;
    wn = std::sqrt(wn);
    for (double& v : w) v /= wn;
    const double flat = std::pow(std::max(core, angle), -beta) / norm;
    const double jacobian = tangent_dim > 1 ? std::pow(angle / std::sin(angle), tangent_dim - 1) : 1.0;
    inner_weights[i] = inv_count / (flat * jacobian);
  }
  SphereQuadrature inner(NodeSet(inner_dim, std::move(inner_coords), std::move(inner_weights)),
                         MeasureConvention::SurfaceArea,
                         {Provenance::Kind::ImportanceSampled, inner_seed, cfg.samples, 0});
  return {std::move(ball), std::move(inner)};
}

}  // namespace sphmax
