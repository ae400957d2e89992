#pragma once

// Exact classification of reciprocal-exponent tuples (1/p_1, ..., 1/p_m)
// against the boundedness polytope [0,1]^m ∩ {sum <= (mn-1)/n} and the
// critical simplex V = conv{v_1, ..., v_m}.

#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace sphmax {

using Rational = boost::rational<long long>;

/// Parses "a/b" or an integer "a". Floats are rejected.
Rational parse_fraction(std::string_view text);
std::string format_fraction(const Rational& r);
/// Comma-separated fractions.
std::vector<Rational> parse_fraction_list(std::string_view text);

struct ExponentTuple {
  int m = 2;
  int n = 2;
  std::vector<Rational> recips;

  /// Validates m, n >= 2 and each entry in [0, 1].
  static ExponentTuple make(int n, std::vector<Rational> recips);
  Rational recip_p() const;
  std::string str() const;
};

/// (mn - 1) / n.
Rational critical_sum(int m, int n);

enum class Verdict {
  InteriorStrong,
  VertexOrigin_a,
  VertexWeak_b,
  FaceStrongZeros_c,
  FaceStrongOnes_d,
  CriticalBoundaryV_e,
  CriticalInteriorV_f,
  CriticalOutsideV,
  Unbounded,
};
std::string_view to_string(Verdict v);

struct RegionClassification {
  Verdict verdict = Verdict::Unbounded;
  std::string governing_case;  // e.g. "Case II(c)"
  std::string notes;
};

RegionClassification classify(const ExponentTuple& t);

enum class HullMembership { Interior, Boundary, Outside };
std::string_view to_string(HullMembership h);

/// Membership in V. On the critical hyperplane the barycentric coordinate of
/// v_j is n (1 - recip_j).
HullMembership in_hull_V(const ExponentTuple& t);

/// 0/1 corners except (1,...,1), then v_1..v_m.
std::vector<ExponentTuple> polytope_vertices(int m, int n);

}  // namespace sphmax
