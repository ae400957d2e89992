#pragma once

// Multilinear spherical means and the maximal operators built on them:
// the m-linear maximal function (common radius), its independent-radii
// variant, the Hardy-Littlewood maximal function, the linear spherical
// maximal function, and the pointwise domination ratio between them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sphmax/function_space.hpp"
#include "sphmax/sphere_geometry.hpp"

namespace sphmax {

/// Geometric grid of dilation radii standing in for sup over t > 0.
class RadiusGrid {
 public:
  RadiusGrid(double t_min, double t_max, std::size_t count);
  static RadiusGrid per_decade(double t_min, double t_max, int per_decade);
  /// 64 radii per decade over [1e-3, 1e3].
  static RadiusGrid standard();
  static RadiusGrid single(double t);

  double t_min() const noexcept { return radii_.front(); }
  double t_max() const noexcept { return radii_.back(); }
  std::size_t count() const noexcept { return radii_.size(); }
  const std::vector<double>& radii() const noexcept { return radii_; }

  /// Inserts the geometric midpoint between neighbours; the original radii
  /// are kept bit-for-bit.
  RadiusGrid refined() const;

  /// `extra` radii packed geometrically between the neighbours of radii()[index].
  std::vector<double> local_refinement(std::size_t index, int extra = 10) const;

 private:
  explicit RadiusGrid(std::vector<double> radii) : radii_(std::move(radii)) {}
  std::vector<double> radii_;
};

/// Sliced evaluation of the mean: ball over the first k blocks, paired with a
/// sphere over the remaining blocks.
struct SlicingConfig {
  int k = 1;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  /// Cap-centred importance sampling around each factor's focus: bounded
  /// outer blocks draw from a radial power law on their support; a bounded
  /// inner part draws, given the paired ball node, from a cored power law in
  /// a cap around its focus direction.
  bool concentrate = false;
  double exponent_margin = 0.05;        // outer exponent <= n - margin
  double cap_exponent_fraction = 1.0;   // inner exponent = fraction * a
  /// Draws whose joint argument (x - t y^j - focus_j)_j lies within this
  /// distance of zero contribute nothing. 0 disables the cut.
  double exclusion_radius = 0.0;
};

struct OperatorConfig {
  SphereQuadrature quad;  // Probability convention on S^{mn-1}
  RadiusGrid radius_grid = RadiusGrid::standard();
  bool refine = true;     // one local refinement pass around the coarse argmax
  std::optional<SlicingConfig> slicing;

  static OperatorConfig monte_carlo(int m, int n, std::size_t nodes, std::uint64_t seed,
                                    RadiusGrid grid = RadiusGrid::standard());
};

/// Rules for the linear operators on R^n (Hardy-Littlewood and spherical).
struct LinearConfig {
  BallQuadrature ball;      // dimension n
  SphereQuadrature sphere;  // Probability convention on S^{n-1}
  RadiusGrid radius_grid = RadiusGrid::standard();
  bool refine = true;

  static LinearConfig monte_carlo(int n, std::size_t nodes, std::uint64_t seed,
                                  RadiusGrid grid = RadiusGrid::standard());
};

struct MeanResult {
  EstimateResult estimate;
  std::size_t rejected = 0;  // nodes dropped at a singular point
  bool unreliable = false;   // more than 0.1% of nodes rejected
};

struct MaximalResult {
  double value = 0.0;
  std::vector<double> argmax;  // maximizing radius (one per factor for the independent variant)
  bool unreliable = false;
};

struct DominationResult {
  double ratio = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  bool infinite = false;  // denominator 0 with a nonzero numerator
  bool unreliable = false;
};

inline constexpr double kRejectedFractionLimit = 1e-3;

/// Probability average over S^{mn-1} of prod_j f_j(x - t y^j).
MeanResult spherical_mean_multi(std::span<const TestFunction> fs, std::span<const double> x, double t,
                                const OperatorConfig& cfg);

/// Same average with a separate radius per factor: prod_j f_j(x - t_j y^j).
MeanResult spherical_mean_multi(std::span<const TestFunction> fs, std::span<const double> x,
                                std::span<const double> radii, const OperatorConfig& cfg);

/// max over the radius grid of |mean|, plus one refinement pass.
MaximalResult maximal_multi(std::span<const TestFunction> fs, std::span<const double> x, const OperatorConfig& cfg);

inline constexpr std::size_t kIndependentGridBudget = 10000;

/// max over the product grid (t_1, ..., t_m) of |mean|. Throws ConfigError
/// when the product grid exceeds kIndependentGridBudget radii tuples.
MaximalResult maximal_multi_independent(std::span<const TestFunction> fs, std::span<const double> x,
                                        const OperatorConfig& cfg, std::span<const RadiusGrid> per_factor_grids);

/// max over grid radii of the average of |f| over B(x, r).
MaximalResult hardy_littlewood(const TestFunction& f, std::span<const double> x, const LinearConfig& cfg);

/// max over grid radii of |average of f over the sphere x - t S^{n-1}|.
MaximalResult linear_spherical_maximal(const TestFunction& f, std::span<const double> x, const LinearConfig& cfg);

/// maximal_multi / (prod_{j != k} M f_j(x) * S f_k(x)), k is 1-based.
DominationResult domination_ratio(std::span<const TestFunction> fs, std::span<const double> x, int k,
                                  const OperatorConfig& cfg, const LinearConfig& linear);

/// Ratio from precomputed factors; shared with surveys that reuse them.
DominationResult domination_ratio_from(const MaximalResult& numerator, std::span<const MaximalResult> hardy,
                                       std::span<const MaximalResult> spherical, int k);

/// Paired importance-sampled rules for the sliced path at (x, t).
struct SliceRules {
  BallQuadrature ball;
  SphereQuadrature inner;  // SurfaceArea convention
};
SliceRules build_slice_rules(std::span<const TestFunction> fs, std::span<const double> x, double t,
                             const SlicingConfig& cfg);

}  // namespace sphmax
