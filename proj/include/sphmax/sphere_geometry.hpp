#pragma once

// Quadrature on unit spheres S^{d-1} and balls B^d, and the slicing
// decomposition that rewrites an integral over S^{mn-1} as an integral over
// the ball B^{kn} of sphere integrals of radius sqrt(1 - |Y|^2).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sphmax/parallel.hpp"

namespace sphmax {

using Point = std::span<const double>;
using Integrand = std::function<double(Point)>;

enum class MeasureConvention { Probability, SurfaceArea };

/// How a rule was produced. Monte Carlo rules carry their seed and nominal
/// sample count; importance-sampled rules may keep fewer nodes than `count`
/// (draws outside the domain are dropped and count as zero terms).
struct Provenance {
  enum class Kind { MonteCarlo, ProductRule, ImportanceSampled };
  Kind kind = Kind::MonteCarlo;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  int order = 0;
  double boundary_exponent = 0.0;  // ball product rules weighted by (1 - |y|)^e

  bool is_random() const noexcept { return kind != Kind::ProductRule; }
};

/// Flat node storage shared by sphere and ball rules.
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(int dim, std::vector<double> coords, std::vector<double> weights);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return weights_.size(); }
  Point node(std::size_t i) const noexcept {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  double weight(std::size_t i) const noexcept { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> coords() const noexcept { return coords_; }
  double weight_sum() const noexcept;

 private:
  int dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

class SphereQuadrature {
 public:
  SphereQuadrature(NodeSet nodes, MeasureConvention convention, Provenance provenance);

  int dim() const noexcept { return nodes_.dim(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  Point node(std::size_t i) const noexcept { return nodes_.node(i); }
  double weight(std::size_t i) const noexcept { return nodes_.weight(i); }
  const NodeSet& nodes() const noexcept { return nodes_; }
  MeasureConvention convention() const noexcept { return convention_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  /// Same nodes, weights rescaled to the requested convention.
  SphereQuadrature with_convention(MeasureConvention target) const;

 private:
  NodeSet nodes_;
  MeasureConvention convention_;
  Provenance provenance_;
};

/// Nodes in the open unit ball; weights integrate against Lebesgue measure.
class BallQuadrature {
 public:
  BallQuadrature(NodeSet nodes, Provenance provenance);

  int dim() const noexcept { return nodes_.dim(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  Point node(std::size_t i) const noexcept { return nodes_.node(i); }
  double weight(std::size_t i) const noexcept { return nodes_.weight(i); }
  const NodeSet& nodes() const noexcept { return nodes_; }
  const Provenance& provenance() const noexcept { return provenance_; }

 private:
  NodeSet nodes_;
  Provenance provenance_;
};

struct EstimateResult {
  double value = 0.0;
  double std_error = 0.0;  // 0 for deterministic rules
  std::size_t node_count = 0;
  std::size_t degenerate_nodes = 0;  // slice nodes skipped at |Y| ~ 1
};

/// Total surface measure of S^{d-1}, 2 pi^{d/2} / Gamma(d/2). Throws DomainError for d <= 0.
double surface_area(int d);
/// Lebesgue volume of B^d.
double ball_volume(int d);

/// i.i.d. uniform nodes on S^{d-1}, Probability convention, weights 1/count.
SphereQuadrature sample_sphere(int d, std::size_t count, std::uint64_t seed);

/// Tensor rule in spherical coordinates, SurfaceArea convention. Exact for
/// polynomials of total degree <= 2*order-1. Supports 2 <= d <= 6.
SphereQuadrature product_rule_sphere(int d, int order);

/// Uniform nodes in B^d, weights v_d / count.
BallQuadrature sample_ball(int d, std::size_t count, std::uint64_t seed);

/// Radial Gauss-Jacobi times product_rule_sphere; exact for polynomials of
/// degree <= 2*order-1. Supports 1 <= d <= 6. With boundary_exponent = e > 0
/// (d >= 2) the rule is instead exact for (1 - |y|)^e times such polynomials,
/// which suits slice integrands carrying an odd power of sqrt(1 - |Y|^2).
BallQuadrature product_rule_ball(int d, int order, double boundary_exponent = 0.0);

/// Sum of w_i F(node_i). For random rules std_error = sd(N w_i F_i) / sqrt(N).
EstimateResult integrate(const SphereQuadrature& rule, const Integrand& f);
EstimateResult integrate(const BallQuadrature& rule, const Integrand& f);
/// Shared kernel over a bare node set.
EstimateResult integrate_nodes(const NodeSet& nodes, const Provenance& provenance, const Integrand& f);

enum class SliceMode {
  Auto,    // Paired when both rules are random and the inner rule is at least as large
  Paired,  // ball node i with inner node i: one draw from the product measure
  Nested,  // every ball node against every inner node
};

/// Right-hand side of the slicing identity: integral over B^{kn} of
/// r_Y^{(m-k)n-2} times the SurfaceArea integral of F(Y, r_Y W) over
/// W in S^{(m-k)n-1}, with r_Y = sqrt(1 - |Y|^2). Equals the SurfaceArea
/// integral of F over S^{mn-1}. The inner rule must use the SurfaceArea
/// convention.
EstimateResult slice_integrate(int m, int n, int k, const Integrand& f, const BallQuadrature& ball_rule,
                               const SphereQuadrature& inner_rule, SliceMode mode = SliceMode::Auto);

/// Stratified uniform ball sampler: a fraction of the draws is placed in the
/// radial shell [shell_inner, 1) where the slice weight is steepest.
BallQuadrature sample_ball_stratified(int d, std::size_t count, std::uint64_t seed, double shell_inner = 0.99,
                                      double shell_fraction = 0.1);

}  // namespace sphmax
