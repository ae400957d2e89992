#pragma once

// Independent closed forms and brute-force enumerations used as test oracles.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "sphmax/region.hpp"

namespace oracle {

/// Surface integral over S^{d-1} of prod y_i^{a_i}.
inline double sphere_moment(const std::vector<int>& a) {
  double num = 2.0;
  int total = 0;
  for (int e : a) {
    if (e % 2) return 0.0;
    num *= std::tgamma((e + 1) / 2.0);
    total += e;
  }
  return num / std::tgamma((total + static_cast<double>(a.size())) / 2.0);
}

/// Lebesgue integral over B^d of prod y_i^{a_i}.
inline double ball_moment(const std::vector<int>& a) {
  int total = 0;
  for (int e : a) total += e;
  return sphere_moment(a) / (total + static_cast<double>(a.size()));
}

/// All exponent vectors of length d with total degree <= deg.
inline std::vector<std::vector<int>> monomials(int d, int deg) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(static_cast<std::size_t>(d), 0);
  for (;;) {
    int total = 0;
    for (int e : a) total += e;
    if (total <= deg) out.push_back(a);
    std::size_t i = 0;
    while (i < a.size() && ++a[i] > deg) a[i++] = 0;
    if (i == a.size()) break;
  }
  return out;
}

/// Area of B(0,1) ∩ B(c, r) in the plane, |c| = dist.
inline double lens_area(double dist, double r) {
  const double R = 1.0;
  if (dist >= R + r) return 0.0;
  if (dist <= std::abs(R - r)) return std::numbers::pi * std::min(R, r) * std::min(R, r);
  const double a = r * r * std::acos((dist * dist + r * r - R * R) / (2 * dist * r));
  const double b = R * R * std::acos((dist * dist + R * R - r * r) / (2 * dist * R));
  const double c = 0.5 * std::sqrt((-dist + r + R) * (dist + r - R) * (dist - r + R) * (dist + r + R));
  return a + b - c;
}

/// Fraction of the circle |y - x| = t inside the unit disk, |x| = dist.
inline double arc_fraction(double dist, double t) {
  if (dist + t <= 1.0) return 1.0;
  if (t >= dist + 1.0 || dist >= t + 1.0) return 0.0;
  const double c = (t * t + dist * dist - 1.0) / (2.0 * t * dist);
  return std::acos(std::clamp(c, -1.0, 1.0)) / std::numbers::pi;
}

using sphmax::Rational;

/// Solves A x = b exactly; false when singular.
inline bool solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b, std::vector<Rational>& x) {
  const std::size_t n = b.size();
  const Rational zero(0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == zero) ++piv;
    if (piv == n) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == zero) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

/// Extreme points of [0,1]^m ∩ {sum <= (mn-1)/n} from its 2m+1 halfspaces:
/// every m-subset of tight constraints, solved and filtered for feasibility.
inline std::vector<std::vector<Rational>> brute_force_vertices(int m, int n) {
  struct Half {
    std::vector<Rational> a;
    Rational b;
  };
  std::vector<Half> hs;
  const auto um = static_cast<std::size_t>(m);
  for (std::size_t j = 0; j < um; ++j) {
    std::vector<Rational> lo(um, Rational(0)), hi(um, Rational(0));
    lo[j] = Rational(-1);
    hi[j] = Rational(1);
    hs.push_back({lo, Rational(0)});
    hs.push_back({hi, Rational(1)});
  }
  hs.push_back({std::vector<Rational>(um, Rational(1)), Rational(static_cast<long long>(m) * n - 1, n)});
  std::vector<std::vector<Rational>> out;
  std::vector<bool> pick(hs.size(), false);
  std::fill(pick.begin(), pick.begin() + m, true);
  do {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    for (std::size_t i = 0; i < hs.size(); ++i)
      if (pick[i]) {
        a.push_back(hs[i].a);
        b.push_back(hs[i].b);
      }
    std::vector<Rational> x;
    if (!solve(a, b, x)) continue;
    bool feasible = true;
    for (const auto& h : hs) {
      Rational s(0);
      for (std::size_t j = 0; j < um; ++j) s += h.a[j] * x[j];
      feasible = feasible && !(s > h.b);
    }
    if (feasible && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

}  // namespace oracle
