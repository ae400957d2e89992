#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sphmax/errors.hpp"
#include "sphmax/gauss_jacobi.hpp"
#include "sphmax/rng.hpp"
#include "sphmax/sphere_geometry.hpp"

using namespace sphmax;
using std::numbers::pi;

namespace {

Integrand monomial(std::vector<int> a) {
  return [a](Point y) {
    double v = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) v *= std::pow(y[i], a[i]);
    return v;
  };
}

bool within(const EstimateResult& r, double expect, double sigmas = 3.0) {
  return std::abs(r.value - expect) <= sigmas * r.std_error + 1e-12 * std::abs(expect);
}

}  // namespace

TEST_CASE("surface area") {
  CHECK(surface_area(1) == doctest::Approx(2.0));
  CHECK(surface_area(2) == doctest::Approx(2 * pi).epsilon(1e-14));
  CHECK(surface_area(3) == doctest::Approx(4 * pi).epsilon(1e-14));
  CHECK(surface_area(4) == doctest::Approx(2 * pi * pi).epsilon(1e-14));
  CHECK_THROWS_AS(surface_area(0), DomainError);
  CHECK_THROWS_AS(surface_area(-3), DomainError);
  // shell volume: |B^d| = |S^{d-1}| / d, and the MC fraction of the cube inside B^4
  CHECK(ball_volume(4) == doctest::Approx(surface_area(4) / 4).epsilon(1e-14));
  CounterStream s(99, 0);
  int inside = 0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    double r2 = 0;
    for (int j = 0; j < 4; ++j) {
      const double u = 2 * s.uniform() - 1;
      r2 += u * u;
    }
    inside += r2 < 1.0;
  }
  const double frac = static_cast<double>(inside) / n;
  const double est = 4.0 * 16.0 * frac;  // |S^3| = 4 |B^4|
  const double se = 4.0 * 16.0 * std::sqrt(frac * (1 - frac) / n);
  CHECK(std::abs(est - surface_area(4)) < 4 * se);
}

TEST_CASE("uniform sphere sampling") {
  const SphereQuadrature q = sample_sphere(4, 100000, 42);
  CHECK(q.convention() == MeasureConvention::Probability);
  CHECK(integrate(q, [](Point) { return 1.0; }).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(within(integrate(q, [](Point y) { return y[0]; }), 0.0));
  CHECK(within(integrate(q, [](Point y) { return y[0] * y[0]; }), 0.25));
  for (std::size_t i = 0; i < q.size(); i += 997) {
    double r2 = 0;
    for (double v : q.node(i)) r2 += v * v;
    CHECK(std::abs(std::sqrt(r2) - 1.0) < 1e-12);
  }
  const SphereQuadrature again = sample_sphere(4, 100000, 42);
  CHECK(std::equal(q.nodes().coords().begin(), q.nodes().coords().end(), again.nodes().coords().begin()));
  CHECK_THROWS_AS(sample_sphere(4, 0, 1), DomainError);
  const EstimateResult c = integrate(q, [](Point) { return 3.25; });
  CHECK(c.value == doctest::Approx(3.25).epsilon(1e-14));
}

TEST_CASE("convention change rescales weights") {
  const SphereQuadrature q = sample_sphere(2, 1000, 3).with_convention(MeasureConvention::SurfaceArea);
  CHECK(integrate(q, [](Point) { return 1.0; }).value == doctest::Approx(2 * pi).epsilon(1e-12));
  const SphereQuadrature back = q.with_convention(MeasureConvention::Probability);
  CHECK(back.nodes().weight_sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("product rule spot values") {
  const SphereQuadrature q3 = product_rule_sphere(3, 8);
  CHECK(q3.convention() == MeasureConvention::SurfaceArea);
  CHECK(integrate(q3, [](Point) { return 1.0; }).value == doctest::Approx(4 * pi).epsilon(1e-9));
  CHECK(integrate(q3, [](Point y) { return y[2] * y[2]; }).value == doctest::Approx(4 * pi / 3).epsilon(1e-9));
  const SphereQuadrature q4 = product_rule_sphere(4, 8);
  CHECK(integrate(q4, monomial({4, 0, 0, 0})).value == doctest::Approx(pi * pi / 4).epsilon(1e-8));
  CHECK(integrate(q4, monomial({4, 0, 0, 0})).std_error == 0.0);
  CHECK_THROWS_AS(product_rule_sphere(7, 4), UnsupportedDimensionError);
  CHECK_THROWS_AS(product_rule_sphere(1, 4), UnsupportedDimensionError);
}

TEST_CASE("large-N Monte Carlo agrees with the y1^4 moment on S^3") {
  const EstimateResult mc = integrate(sample_sphere(4, 400000, 5), monomial({4, 0, 0, 0}));
  const double expect = oracle::sphere_moment({4, 0, 0, 0}) / surface_area(4);
  CHECK(within(mc, expect, 4.0));
  CHECK(expect * surface_area(4) == doctest::Approx(pi * pi / 4).epsilon(1e-12));
}

TEST_CASE("product rules integrate monomials exactly") {
  for (int d = 2; d <= 6; ++d) {
    const int order = d <= 4 ? 5 : 4;
    const SphereQuadrature q = product_rule_sphere(d, order);
    CHECK(q.nodes().weight_sum() == doctest::Approx(surface_area(d)).epsilon(1e-9));
    for (const auto& a : oracle::monomials(d, 2 * order - 1)) {
      const double exact = oracle::sphere_moment(a);
      const double got = integrate(q, monomial(a)).value;
      CAPTURE(d);
      CHECK(std::abs(got - exact) <= 1e-8 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("ball rules") {
  const BallQuadrature b = sample_ball(2, 200000, 8);
  CHECK(b.nodes().weight_sum() == doctest::Approx(pi).epsilon(1e-12));
  for (std::size_t i = 0; i < b.size(); i += 101) {
    double r2 = 0;
    for (double v : b.node(i)) r2 += v * v;
    CHECK(r2 < 1.0);
  }
  const EstimateResult r2 = integrate(b, [](Point y) { return (y[0] * y[0] + y[1] * y[1]) / pi; });
  CHECK(within(r2, 0.5));  // 2 * int_0^1 r^3 dr
  for (int d : {1, 3, 5}) {
    const EstimateResult m1 = integrate(sample_ball(d, 50000, 9), [](Point y) { return y[0]; });
    CHECK(within(m1, 0.0));
  }
  for (int d = 1; d <= 4; ++d) {
    const BallQuadrature pb = product_rule_ball(d, 5);
    CHECK(pb.nodes().weight_sum() == doctest::Approx(ball_volume(d)).epsilon(1e-9));
    for (const auto& a : oracle::monomials(d, 9)) {
      const double exact = oracle::ball_moment(a);
      CHECK(std::abs(integrate(pb, monomial(a)).value - exact) <= 1e-8 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("non-finite integrand values are errors") {
  const SphereQuadrature q = sample_sphere(3, 100, 1);
  CHECK_THROWS_AS(integrate(q, [](Point y) { return y[0] > 0.9 ? NAN : 1.0; }), EvaluationError);
  CHECK_THROWS_AS(integrate(q, [](Point) { return INFINITY; }), EvaluationError);
}

TEST_CASE("slice identity examples") {
  const BallQuadrature ball = sample_ball(2, 100000, 21);
  const SphereQuadrature inner = sample_sphere(2, 100000, 22).with_convention(MeasureConvention::SurfaceArea);
  const EstimateResult one = slice_integrate(2, 2, 1, [](Point) { return 1.0; }, ball, inner);
  CHECK(within(one, 2 * pi * pi));
  const EstimateResult odd = slice_integrate(2, 2, 1, [](Point y) { return y[0]; }, ball, inner);
  CHECK(within(odd, 0.0));
  const Integrand g = [](Point y) {
    const double c[4] = {0.3, -0.2, 0.5, 0.1};
    double s = 0;
    for (int i = 0; i < 4; ++i) s += (y[i] - c[i]) * (y[i] - c[i]);
    return std::exp(-s);
  };
  const EstimateResult sliced = slice_integrate(2, 2, 1, g, ball, inner);
  const EstimateResult direct =
      integrate(sample_sphere(4, 100000, 23).with_convention(MeasureConvention::SurfaceArea), g);
  CHECK(std::abs(sliced.value - direct.value) <= 3 * std::hypot(sliced.std_error, direct.std_error));
}

TEST_CASE("slice identity with product rules") {
  struct Case {
    int m, n, k;
  };
  const Integrand g = [](Point y) {
    double s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - 0.2 * static_cast<double>(i % 3)) * (y[i] - 0.2 * static_cast<double>(i % 3));
    return std::exp(-s) + y[0] * y[0] * y[1] * y[1];
  };
  for (Case c : {Case{2, 2, 1}, Case{3, 2, 1}, Case{3, 2, 2}, Case{2, 3, 1}}) {
    const int kn = c.k * c.n, rest = (c.m - c.k) * c.n, d = c.m * c.n;
    if (kn > 6 || rest > 6 || d > 6) continue;
    // an odd inner dimension leaves one factor sqrt(1 - |Y|^2) on the ball
    const BallQuadrature ball = product_rule_ball(kn, 8, rest % 2 ? 0.5 : 0.0);
    const SphereQuadrature inner = product_rule_sphere(rest, 8);
    const double sliced = slice_integrate(c.m, c.n, c.k, g, ball, inner, SliceMode::Nested).value;
    const double direct = integrate(product_rule_sphere(d, 8), g).value;
    CAPTURE(c.m);
    CAPTURE(c.k);
    CHECK(std::abs(sliced - direct) <= 1e-3 * std::abs(direct));
  }
}

TEST_CASE("slice rules must use surface-area inner weights") {
  const BallQuadrature ball = sample_ball(2, 100, 1);
  const SphereQuadrature inner = sample_sphere(2, 100, 2);
  CHECK_THROWS_AS(slice_integrate(2, 2, 1, [](Point) { return 1.0; }, ball, inner), ConventionError);
  CHECK_THROWS_AS(slice_integrate(2, 2, 2, [](Point) { return 1.0; }, ball,
                                  inner.with_convention(MeasureConvention::SurfaceArea)),
                  DomainError);
}

TEST_CASE("nodes on the ball boundary are skipped and counted") {
  NodeSet ns(2, {0.0, 0.0, 1.0 - 1e-16, 0.0, 0.6, 0.0}, {pi / 3, pi / 3, pi / 3});
  const BallQuadrature ball(ns, Provenance{Provenance::Kind::ProductRule, 0, 3, 1});
  const SphereQuadrature inner = product_rule_sphere(2, 4);
  const EstimateResult r = slice_integrate(2, 2, 1, [](Point) { return 1.0; }, ball, inner, SliceMode::Nested);
  CHECK(r.degenerate_nodes == 1);
  // r^{n-2} = 1 at n = 2, so each surviving node contributes 2 pi
  CHECK(r.value == doctest::Approx(2 * (pi / 3) * 2 * pi).epsilon(1e-12));
}

TEST_CASE("boundary-weighted ball rule") {
  // exact for sqrt(1 - rho) times polynomials: int_{B^3} sqrt(1 - |y|) |y|^2 dy = 4 pi B(5, 3/2)
  const BallQuadrature b = product_rule_ball(3, 6, 0.5);
  CHECK(b.provenance().boundary_exponent == 0.5);
  const double got = integrate(b, [](Point y) {
                       const double r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
                       return std::sqrt(1.0 - std::sqrt(r2)) * r2;
                     }).value;
  const double beta = std::tgamma(5.0) * std::tgamma(1.5) / std::tgamma(6.5);
  CHECK(got == doctest::Approx(4 * pi * beta).epsilon(1e-12));
  CHECK_THROWS_AS(product_rule_ball(1, 4, 0.5), DomainError);
}

TEST_CASE("stratified ball sampler keeps the total weight") {
  const BallQuadrature b = sample_ball_stratified(3, 20000, 4);
  CHECK(b.nodes().weight_sum() == doctest::Approx(ball_volume(3)).epsilon(1e-12));
  const EstimateResult r2 = integrate(b, [](Point y) { return y[0] * y[0] + y[1] * y[1] + y[2] * y[2]; });
  CHECK(within(r2, oracle::ball_moment({2, 0, 0}) * 3, 4.0));
}

TEST_CASE("rotation of one block leaves the sphere integral unchanged") {
  const SphereQuadrature q = sample_sphere(4, 100000, 31);
  const Integrand f = [](Point y) { return std::exp(y[0] + 0.5 * y[1] - y[3]); };
  const double c = std::cos(0.7), s = std::sin(0.7);
  const Integrand g = [&](Point y) {
    const double z[4] = {c * y[0] - s * y[1], s * y[0] + c * y[1], y[2], y[3]};
    return f(Point(z, 4));
  };
  const EstimateResult a = integrate(q, f), b = integrate(q, g);
  CHECK(std::abs(a.value - b.value) <= 3 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("gauss-jacobi rules") {
  // int_{-1}^{1} (1-x)^a (1+x)^b x^k dx against a fine trapezoid-free closed form for a = b = 0
  const GaussRule legendre = gauss_jacobi(6, 0.0, 0.0);
  double s = 0;
  for (std::size_t i = 0; i < legendre.nodes.size(); ++i) s += legendre.weights[i] * std::pow(legendre.nodes[i], 10);
  CHECK(s == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
  // (1+x)^2 weight: int x^2 (1+x)^2 = 2/3 + 2/5
  const GaussRule jac = gauss_jacobi(4, 0.0, 2.0);
  double t = 0;
  for (std::size_t i = 0; i < jac.nodes.size(); ++i) t += jac.weights[i] * jac.nodes[i] * jac.nodes[i];
  CHECK(t == doctest::Approx(2.0 / 3.0 + 2.0 / 5.0).epsilon(1e-13));
}
