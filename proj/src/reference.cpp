#include "sphmax/reference.hpp"

#include <cmath>
#include <vector>

#include "sphmax/errors.hpp"

namespace sphmax::reference {

namespace {

struct Welford {
  double count = 0, mean = 0, m2 = 0;
  void add(double v) {
    count += 1;
    const double d = v - mean;
    mean += d / count;
    m2 += d * (v - mean);
  }
};

std::size_t nominal(const NodeSet& nodes, const Provenance& p) {
  return p.is_random() && p.count > nodes.size() ? p.count : nodes.size();
}

EstimateResult finish(Welford w, std::size_t total, bool random) {
  while (w.count < static_cast<double>(total)) w.add(0.0);
  EstimateResult out;
  out.value = w.mean;
  out.node_count = total;
  out.std_error = random && w.count > 1 ? std::sqrt(w.m2 / (w.count - 1) / w.count) : 0.0;
  return out;
}

}  // namespace

EstimateResult integrate(const SphereQuadrature& rule, const Integrand& f) {
  const std::size_t total = nominal(rule.nodes(), rule.provenance());
  Welford w;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double v = f(rule.node(i));
    if (!std::isfinite(v)) throw EvaluationError(i, "integrand is not finite");
    w.add(static_cast<double>(total) * rule.weight(i) * v);
  }
  return finish(w, total, rule.provenance().is_random());
}

EstimateResult slice_paired(int m, int n, int k, const Integrand& f, const BallQuadrature& ball,
                            const SphereQuadrature& inner) {
  if (inner.convention() != MeasureConvention::SurfaceArea) throw ConventionError("inner rule must be SurfaceArea");
  if (inner.size() < ball.size()) throw ConfigError("paired slice: inner rule too small");
  const auto kn = static_cast<std::size_t>(k * n);
  const auto d = static_cast<std::size_t>((m - k) * n);
  const double bn = static_cast<double>(nominal(ball.nodes(), ball.provenance()));
  const double sn = static_cast<double>(nominal(inner.nodes(), inner.provenance()));
  std::vector<double> p(kn + d);
  Welford w;
  std::size_t degenerate = 0;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const Point y = ball.node(i);
    double y2 = 0.0;
    for (double v : y) y2 += v * v;
    if (1.0 - std::sqrt(y2) <= 1e-14) {
      ++degenerate;
      w.add(0.0);
      continue;
    }
    const double r = std::sqrt(1.0 - y2);
    for (std::size_t c = 0; c < kn; ++c) p[c] = y[c];
    const Point s = inner.node(i);
    for (std::size_t c = 0; c < d; ++c) p[kn + c] = r * s[c];
    const double v = f(Point(p.data(), p.size()));
    if (!std::isfinite(v)) throw EvaluationError(i, "integrand is not finite");
    w.add(bn * ball.weight(i) * std::pow(r, (m - k) * n - 2) * sn * inner.weight(i) * v);
  }
  EstimateResult out = finish(w, static_cast<std::size_t>(bn), true);
  out.degenerate_nodes = degenerate;
  return out;
}

double spherical_mean(std::span<const TestFunction> fs, std::span<const double> x, double t,
                      const SphereQuadrature& quad) {
  const std::size_t n = x.size();
  const double scale = quad.convention() == MeasureConvention::Probability ? 1.0 : 1.0 / surface_area(quad.dim());
  std::vector<double> arg(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const Point y = quad.node(i);
    double prod = 1.0;
    for (std::size_t j = 0; j < fs.size(); ++j) {
      for (std::size_t c = 0; c < n; ++c) arg[c] = x[c] - t * y[j * n + c];
      prod *= fs[j].eval(arg);
    }
    sum += quad.weight(i) * prod;
  }
  return scale * sum;
}

}  // namespace sphmax::reference
