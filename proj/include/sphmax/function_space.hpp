#pragma once

// Test-function families, lattice-sampled fields, and numerical L^p,
// weak-L^p and L^{p,1} (indicator) quasi-norms.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sphmax {

class TestFunction;

/// Values of a function on a uniform lattice origin + spacing * index.
/// Storage is row-major: the last axis varies fastest.
class LatticeGrid {
 public:
  LatticeGrid(std::vector<double> origin, double spacing, std::vector<std::size_t> extents,
              std::vector<double> values);

  /// Lattice with the given shape and all values zero.
  static LatticeGrid zeros(std::vector<double> origin, double spacing, std::vector<std::size_t> extents);

  /// Cube [-half_width, half_width]^n sampled at cell centres, so the origin is
  /// never a lattice point (offset h/2 on every axis).
  static LatticeGrid punctured_cube(int dim, double half_width, double spacing);

  /// Samples f at every lattice point of `shape`.
  static LatticeGrid sample(const TestFunction& f, const LatticeGrid& shape);

  int dim() const noexcept { return static_cast<int>(extents_.size()); }
  double spacing() const noexcept { return spacing_; }
  const std::vector<double>& origin() const noexcept { return origin_; }
  const std::vector<std::size_t>& extents() const noexcept { return extents_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double cell_volume() const noexcept;

  /// Coordinates of lattice point `flat` written to `out` (size dim()).
  void point(std::size_t flat, std::span<double> out) const;
  std::vector<double> point(std::size_t flat) const;

  /// Multilinear interpolation; 0 outside the lattice hull.
  double interpolate(std::span<const double> x) const;

  /// CSV interchange: "dim,n" / "origin,..." / "spacing,h" / "extents,..."
  /// header lines, then one value per line in row-major order.
  void write_csv(std::ostream& os) const;
  static LatticeGrid read_csv(std::istream& is);

 private:
  std::vector<double> origin_;
  double spacing_;
  std::vector<std::size_t> extents_;
  std::vector<double> values_;
};

struct ConstantFn {
  double value = 1.0;
};
struct BallIndicatorFn {
  std::vector<double> center;
  double radius = 1.0;
};
/// exp(-|x - center|^2 / width^2)
struct GaussianFn {
  std::vector<double> center;
  double width = 1.0;
};
/// |x|^{-power} (log 1/|x|)^{-log_power} for 0 < |x| <= cutoff, else 0.
struct RadialPowerLogFn {
  double power = 1.0;
  double log_power = 0.0;
  double cutoff = 0.5;
};
struct LatticeFieldFn {
  std::shared_ptr<const LatticeGrid> grid;
};

class TestFunction {
 public:
  using Variant = std::variant<ConstantFn, BallIndicatorFn, GaussianFn, RadialPowerLogFn, LatticeFieldFn>;

  static TestFunction constant(int dim, double value);
  static TestFunction ball_indicator(std::vector<double> center, double radius);
  static TestFunction gaussian(std::vector<double> center, double width);
  static TestFunction radial_power_log(int dim, double power, double log_power, double cutoff);
  static TestFunction lattice_field(std::shared_ptr<const LatticeGrid> grid);

  int dim() const noexcept { return dim_; }
  const Variant& variant() const noexcept { return variant_; }
  std::string describe() const;

  /// Pointwise value. Throws SingularPointError at the origin of a
  /// RadialPowerLog function.
  double eval(std::span<const double> x) const;
  /// Same as eval but returns NaN at the singular point.
  double eval_or_nan(std::span<const double> x) const noexcept;

  /// Point the function concentrates around (centre / singularity), if any.
  std::optional<std::vector<double>> focus() const;
  /// Radius of the support around focus(); +inf when unbounded.
  double support_radius() const noexcept;
  /// Exponent of the radial singularity at focus() (0 if bounded).
  double singular_exponent() const noexcept;
  bool nonnegative() const noexcept;

  /// x -> f(lambda x). Closed for Constant, BallIndicator, Gaussian.
  TestFunction dilated(double lambda) const;
  /// x -> f(A x) for a row-major orthogonal matrix A. Closed for Constant,
  /// BallIndicator, Gaussian and RadialPowerLog.
  TestFunction rotated(std::span<const double> a) const;

 private:
  TestFunction(int dim, Variant v) : dim_(dim), variant_(std::move(v)) {}
  int dim_;
  Variant variant_;
};

struct NormEstimate {
  enum class Method { ClosedForm, LatticeSum, LayerCake };
  double value = 0.0;  // +inf when the norm diverges
  Method method = Method::ClosedForm;
  double resolution = 0.0;  // lattice spacing h (0 for closed forms)

  bool finite() const noexcept { return value < std::numeric_limits<double>::infinity(); }
};

/// Closed-form L^p norm (BallIndicator, Gaussian, Constant, RadialPowerLog via
/// an adaptive radial integral). LatticeField falls back to a lattice sum.
NormEstimate lp_norm(const TestFunction& f, double p);
/// (sum |f|^p h^n)^{1/p} over f sampled on `shape`.
NormEstimate lp_norm(const TestFunction& f, double p, const LatticeGrid& shape);
/// (sum |v|^p h^n)^{1/p} over the field's values.
NormEstimate lp_norm(const LatticeGrid& field, double p);

inline constexpr std::size_t kDefaultLambdaGrid = 200;
/// Superlevel sets smaller than this many lattice points are below resolution.
inline constexpr std::size_t kWeakNormMinCells = 256;

/// sup over a geometric lambda grid of lambda * d(lambda)^{1/p}, with
/// d(lambda) = h^n #{|v| >= lambda}. The grid spans [min positive |v|, max |v|];
/// levels whose superlevel set holds fewer than min(min_cells, #nonzero)
/// points are skipped.
NormEstimate weak_lp_quasinorm(const LatticeGrid& field, double p, std::size_t lambda_points = kDefaultLambdaGrid,
                               std::size_t min_cells = kWeakNormMinCells);

/// L^{p,1} norm of an indicator of a set of the given measure: p * measure^{1/p}.
double lorentz_p1_indicator(double measure, double p);

/// The radial integral of |f|^p for RadialPowerLog, without the 1/p root.
double radial_power_log_integral(const RadialPowerLogFn& f, int dim, double p);

}  // namespace sphmax
