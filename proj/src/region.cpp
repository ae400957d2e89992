#include "sphmax/region.hpp"

#include <algorithm>
#include <charconv>

#include "sphmax/errors.hpp"

namespace sphmax {

namespace {

// mixed rational/int comparisons recurse in some Boost releases
const Rational kZero(0);
const Rational kOne(1);

long long parse_integer(std::string_view s, std::string_view whole) {
  long long v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e || b == e)
    throw ConfigError("not an exact fraction: '" + std::string(whole) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_fraction(std::string_view text) {
  const std::string_view s = trim(text);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s, text));
  const long long num = parse_integer(trim(s.substr(0, slash)), text);
  const long long den = parse_integer(trim(s.substr(slash + 1)), text);
  if (den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
  return {num, den};
}

std::string format_fraction(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::vector<Rational> parse_fraction_list(std::string_view text) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_fraction(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

ExponentTuple ExponentTuple::make(int n, std::vector<Rational> recips) {
  if (n < 2) throw ConfigError("exponent tuple: n must be >= 2");
  if (recips.size() < 2) throw ConfigError("exponent tuple: m must be >= 2");
  for (const auto& r : recips)
    if (r < kZero || r > kOne) throw ConfigError("exponent tuple: each 1/p_j must lie in [0, 1], got " + format_fraction(r));
  return {static_cast<int>(recips.size()), n, std::move(recips)};
}

Rational ExponentTuple::recip_p() const {
  Rational s(0);
  for (const auto& r : recips) s += r;
  return s;
}

std::string ExponentTuple::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < recips.size(); ++i) {
    if (i) out += ", ";
    out += format_fraction(recips[i]);
  }
  return out + ")";
}

Rational critical_sum(int m, int n) { return {static_cast<long long>(m) * n - 1, n}; }

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::InteriorStrong: return "InteriorStrong";
    case Verdict::VertexOrigin_a: return "VertexOrigin_a";
    case Verdict::VertexWeak_b: return "VertexWeak_b";
    case Verdict::FaceStrongZeros_c: return "FaceStrongZeros_c";
    case Verdict::FaceStrongOnes_d: return "FaceStrongOnes_d";
    case Verdict::CriticalBoundaryV_e: return "CriticalBoundaryV_e";
    case Verdict::CriticalInteriorV_f: return "CriticalInteriorV_f";
    case Verdict::CriticalOutsideV: return "CriticalOutsideV";
    case Verdict::Unbounded: return "Unbounded";
  }
  return "?";
}

std::string_view to_string(HullMembership h) {
  switch (h) {
    case HullMembership::Interior: return "Interior";
    case HullMembership::Boundary: return "Boundary";
    case HullMembership::Outside: return "Outside";
  }
  return "?";
}

HullMembership in_hull_V(const ExponentTuple& t) {
  if (t.recip_p() != critical_sum(t.m, t.n)) return HullMembership::Outside;
  bool on_face = false;
  for (const auto& r : t.recips) {
    const Rational lambda = Rational(t.n) * (Rational(1) - r);
    if (lambda < kZero || lambda > kOne) return HullMembership::Outside;
    if (lambda == kZero) on_face = true;
  }
  return on_face ? HullMembership::Boundary : HullMembership::Interior;
}

RegionClassification classify(const ExponentTuple& t) {
  const Rational s = t.recip_p();
  const Rational crit = critical_sum(t.m, t.n);
  RegionClassification out;
  if (s > crit) {
    out.verdict = Verdict::Unbounded;
    out.governing_case = "outside the polytope";
    out.notes = "1/p = " + format_fraction(s) + " exceeds (mn-1)/n = " + format_fraction(crit) +
                "; power-log inputs give an infinite norm";
    return out;
  }
  if (s == crit) {
    const HullMembership h = in_hull_V(t);
    if (h == HullMembership::Outside) {
      out.verdict = Verdict::CriticalOutsideV;
      out.governing_case = "Case III";
      out.notes = "critical hyperplane outside V; no estimate claimed";
    } else if (h == HullMembership::Boundary) {
      out.verdict = Verdict::CriticalBoundaryV_e;
      out.governing_case = "Case III(e)";
      out.notes = "boundary of V: restricted weak type (Lorentz L^{p_j,1} inputs)";
    } else {
      out.verdict = Verdict::CriticalInteriorV_f;
      out.governing_case = "Case III(f)";
      out.notes = "interior of V: weak type";
    }
    out.notes += "; strong type fails on the critical hyperplane (power-log counterexample)";
    if (t.n == 2) out.notes += "; at n=2 the endpoint estimate is not available (linear restricted weak type fails)";
    return out;
  }
  std::vector<Rational> fixed;
  for (const auto& r : t.recips)
    if (r == kZero || r == kOne) fixed.push_back(r);
  if (fixed.empty()) {
    out.verdict = Verdict::InteriorStrong;
    out.governing_case = "Case I";
    out.notes = "all 1 < p_j < inf and p > n/(mn-1): strong type";
    return out;
  }
  const bool any_one = std::any_of(fixed.begin(), fixed.end(), [](const Rational& r) { return r == kOne; });
  if (fixed.size() == t.recips.size()) {
    out.verdict = any_one ? Verdict::VertexWeak_b : Verdict::VertexOrigin_a;
    out.governing_case = any_one ? "Case II(b)" : "Case II(a)";
    out.notes = any_one ? "vertex of [0,1]^m other than the origin: weak type" : "origin: strong type (L^inf inputs)";
    return out;
  }
  const std::string k = std::to_string(t.recips.size() - fixed.size());
  if (!any_one) {
    out.verdict = Verdict::FaceStrongZeros_c;
    out.governing_case = "Case II(c)";
    out.notes = "open " + k + "-dimensional face with fixed coordinates 0: strong type for all n >= 2";
  } else {
    out.verdict = Verdict::FaceStrongOnes_d;
    out.governing_case = "Case II(d)";
    out.notes = "open " + k + "-dimensional face with a fixed coordinate 1: strong type for n >= 3";
    if (t.n == 2) out.notes += "; open at n=2 (no claim either way)";
  }
  return out;
}

std::vector<ExponentTuple> polytope_vertices(int m, int n) {
  if (m < 2 || n < 2) throw ConfigError("polytope vertices: need m, n >= 2");
  if (m > 20) throw ConfigError("polytope vertices: m too large");
  std::vector<ExponentTuple> out;
  const unsigned corners = 1u << m;
  for (unsigned mask = 0; mask + 1 < corners; ++mask) {
    std::vector<Rational> r(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) r[static_cast<std::size_t>(j)] = Rational((mask >> (m - 1 - j)) & 1u);
    out.push_back({m, n, std::move(r)});
  }
  for (int j = 0; j < m; ++j) {
    std::vector<Rational> r(static_cast<std::size_t>(m), Rational(1));
    r[static_cast<std::size_t>(j)] = Rational(n - 1, n);
    out.push_back({m, n, std::move(r)});
  }
  return out;
}

}  // namespace sphmax
