#include "sphmax/function_space.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <functional>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "sphmax/errors.hpp"
#include "sphmax/parallel.hpp"
#include "sphmax/sphere_geometry.hpp"

namespace sphmax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double distance2(std::span<const double> x, const std::vector<double>& c) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
  return s;
}

double norm(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(line);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ConfigError("lattice csv: malformed number '" + s + "'");
  return v;
}

}  // namespace

// --- LatticeGrid ------------------------------------------------------------

LatticeGrid::LatticeGrid(std::vector<double> origin, double spacing, std::vector<std::size_t> extents,
                         std::vector<double> values)
    : origin_(std::move(origin)), spacing_(spacing), extents_(std::move(extents)), values_(std::move(values)) {
  if (extents_.empty()) throw DomainError("lattice needs at least one axis");
  if (origin_.size() != extents_.size()) throw ConfigError("lattice origin and extents disagree on dimension");
  if (!(spacing_ > 0.0)) throw DomainError("lattice spacing must be positive");
  const std::size_t count =
      std::accumulate(extents_.begin(), extents_.end(), std::size_t{1}, std::multiplies<std::size_t>());
  if (count != values_.size()) throw ConfigError("lattice value count must equal the product of extents");
}

LatticeGrid LatticeGrid::zeros(std::vector<double> origin, double spacing, std::vector<std::size_t> extents) {
  const std::size_t count =
      std::accumulate(extents.begin(), extents.end(), std::size_t{1}, std::multiplies<std::size_t>());
  return LatticeGrid(std::move(origin), spacing, std::move(extents), std::vector<double>(count, 0.0));
}

LatticeGrid LatticeGrid::punctured_cube(int dim, double half_width, double spacing) {
  if (dim < 1) throw DomainError("punctured_cube: dimension must be positive");
  if (!(half_width > 0.0) || !(spacing > 0.0)) throw DomainError("punctured_cube: sizes must be positive");
  const auto per_axis = static_cast<std::size_t>(std::llround(2.0 * half_width / spacing));
  if (per_axis == 0) throw DomainError("punctured_cube: spacing exceeds the cube");
  const double start = -0.5 * static_cast<double>(per_axis) * spacing + 0.5 * spacing;
  return zeros(std::vector<double>(static_cast<std::size_t>(dim), start), spacing,
               std::vector<std::size_t>(static_cast<std::size_t>(dim), per_axis));
}

LatticeGrid LatticeGrid::sample(const TestFunction& f, const LatticeGrid& shape) {
  if (f.dim() != shape.dim()) throw ConfigError("lattice sample: function and lattice dimensions differ");
  LatticeGrid out = zeros(shape.origin_, shape.spacing_, shape.extents_);
  const auto n = static_cast<long long>(out.size());
#pragma omp parallel
  {
    std::vector<double> x(static_cast<std::size_t>(out.dim()));
#pragma omp for schedule(static)
    for (long long i = 0; i < n; ++i) {
      out.point(static_cast<std::size_t>(i), x);
      out.values_[static_cast<std::size_t>(i)] = f.eval_or_nan(x);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    if (std::isnan(out.values_[i])) throw SingularPointError("lattice sample hits a singular point; puncture the lattice");
  return out;
}

double LatticeGrid::cell_volume() const noexcept { return std::pow(spacing_, dim()); }

void LatticeGrid::point(std::size_t flat, std::span<double> out) const {
  for (std::size_t axis = extents_.size(); axis-- > 0;) {
    const std::size_t idx = flat % extents_[axis];
    flat /= extents_[axis];
    out[axis] = origin_[axis] + spacing_ * static_cast<double>(idx);
  }
}

std::vector<double> LatticeGrid::point(std::size_t flat) const {
  std::vector<double> out(extents_.size());
  point(flat, out);
  return out;
}

double LatticeGrid::interpolate(std::span<const double> x) const {
  const std::size_t d = extents_.size();
  std::vector<std::size_t> base(d);
  std::vector<double> frac(d);
  for (std::size_t a = 0; a < d; ++a) {
    const double u = (x[a] - origin_[a]) / spacing_;
    const double last = static_cast<double>(extents_[a] - 1);
    if (u < 0.0 || u > last) return 0.0;
    const double fl = std::min(std::floor(u), std::max(0.0, last - 1.0));
    base[a] = static_cast<std::size_t>(fl);
    frac[a] = extents_[a] == 1 ? 0.0 : u - fl;
  }
  double acc = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t a = 0; a < d; ++a) {
      const bool up = (corner >> a) & 1u;
      const std::size_t idx = std::min(base[a] + (up ? 1 : 0), extents_[a] - 1);
      w *= up ? frac[a] : 1.0 - frac[a];
      flat = flat * extents_[a] + idx;
    }
    if (w != 0.0) acc += w * values_[flat];
  }
  return acc;
}

void LatticeGrid::write_csv(std::ostream& os) const {
  std::ostringstream body;
  body.precision(17);
  body << "dim," << dim() << '\n';
  body << "origin," << join(origin_) << '\n';
  body << "spacing," << spacing_ << '\n';
  body << "extents";
  for (std::size_t e : extents_) body << ',' << e;
  body << '\n';
  for (double v : values_) body << v << '\n';
  os << body.str();
}

LatticeGrid LatticeGrid::read_csv(std::istream& is) {
  std::string line;
  auto header = [&](const char* key) {
    if (!std::getline(is, line)) throw ConfigError(std::string("lattice csv: missing header ") + key);
    auto fields = split(line, ',');
    if (fields.empty() || fields[0] != key) throw ConfigError(std::string("lattice csv: expected header ") + key);
    fields.erase(fields.begin());
    return fields;
  };
  const auto dim_f = header("dim");
  if (dim_f.size() != 1) throw ConfigError("lattice csv: bad dim line");
  const int dim = std::stoi(dim_f[0]);
  std::vector<double> origin;
  for (const auto& s : header("origin")) origin.push_back(parse_double(s));
  const auto spacing_f = header("spacing");
  if (spacing_f.size() != 1) throw ConfigError("lattice csv: bad spacing line");
  const double spacing = parse_double(spacing_f[0]);
  std::vector<std::size_t> extents;
  for (const auto& s : header("extents")) extents.push_back(static_cast<std::size_t>(std::stoull(s)));
  if (static_cast<int>(origin.size()) != dim || static_cast<int>(extents.size()) != dim)
    throw ConfigError("lattice csv: header dimension mismatch");
  std::vector<double> values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    values.push_back(parse_double(line));
  }
  return LatticeGrid(std::move(origin), spacing, std::move(extents), std::move(values));
}

// --- TestFunction -----------------------------------------------------------

TestFunction TestFunction::constant(int dim, double value) {
  if (dim < 1) throw DomainError("constant: dimension must be positive");
  return TestFunction(dim, ConstantFn{value});
}

TestFunction TestFunction::ball_indicator(std::vector<double> center, double radius) {
  if (center.empty()) throw DomainError("ball_indicator: empty centre");
  if (!(radius > 0.0)) throw DomainError("ball_indicator: radius must be positive");
  const int dim = static_cast<int>(center.size());
  return TestFunction(dim, BallIndicatorFn{std::move(center), radius});
}

TestFunction TestFunction::gaussian(std::vector<double> center, double width) {
  if (center.empty()) throw DomainError("gaussian: empty centre");
  if (!(width > 0.0)) throw DomainError("gaussian: width must be positive");
  const int dim = static_cast<int>(center.size());
  return TestFunction(dim, GaussianFn{std::move(center), width});
}

TestFunction TestFunction::radial_power_log(int dim, double power, double log_power, double cutoff) {
  if (dim < 1) throw DomainError("radial_power_log: dimension must be positive");
  if (!(power > 0.0)) throw DomainError("radial_power_log: power must be positive");
  if (!(log_power >= 0.0)) throw DomainError("radial_power_log: log power must be nonnegative");
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw DomainError("radial_power_log: cutoff must lie in (0, 1)");
  return TestFunction(dim, RadialPowerLogFn{power, log_power, cutoff});
}

TestFunction TestFunction::lattice_field(std::shared_ptr<const LatticeGrid> grid) {
  if (!grid) throw ConfigError("lattice_field: null grid");
  const int dim = grid->dim();
  return TestFunction(dim, LatticeFieldFn{std::move(grid)});
}

std::string TestFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const ConstantFn& c) { os << "Constant(" << c.value << ")"; },
                 [&](const BallIndicatorFn& b) { os << "BallIndicator([" << join(b.center) << "], " << b.radius << ")"; },
                 [&](const GaussianFn& g) { os << "Gaussian([" << join(g.center) << "], " << g.width << ")"; },
                 [&](const RadialPowerLogFn& r) {
                   os << "RadialPowerLog(" << r.power << ", " << r.log_power << ", " << r.cutoff << ")";
                 },
                 [&](const LatticeFieldFn& l) { os << "LatticeField(" << l.grid->size() << " points)"; },
             },
             variant_);
  return os.str();
}

double TestFunction::eval_or_nan(std::span<const double> x) const noexcept {
  return std::visit(Overloaded{
                        [](const ConstantFn& c) { return c.value; },
                        [&](const BallIndicatorFn& b) {
                          return distance2(x, b.center) < b.radius * b.radius ? 1.0 : 0.0;
                        },
                        [&](const GaussianFn& g) { return std::exp(-distance2(x, g.center) / (g.width * g.width)); },
                        [&](const RadialPowerLogFn& r) {
                          const double rho = norm(x);
                          if (rho > r.cutoff) return 0.0;
                          if (rho == 0.0) return std::nan("");
                          return std::pow(rho, -r.power) * std::pow(-std::log(rho), -r.log_power);
                        },
                        [&](const LatticeFieldFn& l) { return l.grid->interpolate(x); },
                    },
                    variant_);
}

double TestFunction::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw DomainError("eval: point dimension does not match the function");
  const double v = eval_or_nan(x);
  if (std::isnan(v)) throw SingularPointError("eval: " + describe() + " is singular at the origin");
  return v;
}

std::optional<std::vector<double>> TestFunction::focus() const {
  return std::visit(Overloaded{
                        [](const ConstantFn&) -> std::optional<std::vector<double>> { return std::nullopt; },
                        [](const BallIndicatorFn& b) -> std::optional<std::vector<double>> { return b.center; },
                        [](const GaussianFn& g) -> std::optional<std::vector<double>> { return g.center; },
                        [&](const RadialPowerLogFn&) -> std::optional<std::vector<double>> {
                          return std::vector<double>(static_cast<std::size_t>(dim_), 0.0);
                        },
                        [](const LatticeFieldFn&) -> std::optional<std::vector<double>> { return std::nullopt; },
                    },
                    variant_);
}

double TestFunction::support_radius() const noexcept {
  if (const auto* b = std::get_if<BallIndicatorFn>(&variant_)) return b->radius;
  if (const auto* r = std::get_if<RadialPowerLogFn>(&variant_)) return r->cutoff;
  return kInf;
}

double TestFunction::singular_exponent() const noexcept {
  if (const auto* r = std::get_if<RadialPowerLogFn>(&variant_)) return r->power;
  return 0.0;
}

bool TestFunction::nonnegative() const noexcept {
  if (const auto* c = std::get_if<ConstantFn>(&variant_)) return c->value >= 0.0;
  if (const auto* l = std::get_if<LatticeFieldFn>(&variant_)) {
    const auto v = l->grid->values();
    return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
  }
  return true;
}

TestFunction TestFunction::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("dilated: factor must be positive");
  auto scale = [lambda](std::vector<double> c) {
    for (double& v : c) v /= lambda;
    return c;
  };
  if (std::holds_alternative<ConstantFn>(variant_)) return *this;
  if (const auto* b = std::get_if<BallIndicatorFn>(&variant_)) return ball_indicator(scale(b->center), b->radius / lambda);
  if (const auto* g = std::get_if<GaussianFn>(&variant_)) return gaussian(scale(g->center), g->width / lambda);
  throw ConfigError("dilated: family not closed under dilation: " + describe());
}

TestFunction TestFunction::rotated(std::span<const double> a) const {
  const auto n = static_cast<std::size_t>(dim_);
  if (a.size() != n * n) throw ConfigError("rotated: matrix must be dim x dim");
  // f(Ax) = g(|Ax - c|) = g(|x - A^T c|)
  auto pull_back = [&](const std::vector<double>& c) {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i] += a[j * n + i] * c[j];
    return out;
  };
  if (std::holds_alternative<ConstantFn>(variant_) || std::holds_alternative<RadialPowerLogFn>(variant_)) return *this;
  if (const auto* b = std::get_if<BallIndicatorFn>(&variant_)) return ball_indicator(pull_back(b->center), b->radius);
  if (const auto* g = std::get_if<GaussianFn>(&variant_)) return gaussian(pull_back(g->center), g->width);
  throw ConfigError("rotated: family not closed under rotation: " + describe());
}

// --- norms ------------------------------------------------------------------

double radial_power_log_integral(const RadialPowerLogFn& f, int dim, double p) {
  // substitute u = log(1/r): |S^{n-1}| * int_L^inf exp(-(n - a p) u) u^{-b p} du
  const double rate = dim - f.power * p;
  const double q = f.log_power * p;
  const double lower = -std::log(f.cutoff);
  const double tol = 1e-12 * std::max(1.0, static_cast<double>(dim));
  double radial;
  if (rate < -tol) {
    radial = kInf;
  } else if (std::abs(rate) <= tol) {
    radial = q > 1.0 + 1e-12 ? std::pow(lower, 1.0 - q) / (q - 1.0) : kInf;
  } else {
    boost::math::quadrature::exp_sinh<double> integrator;
    auto integrand = [&](double v) {
      const double u = lower + v;
      return std::exp(-rate * v) * std::pow(u, -q);
    };
    radial = std::exp(-rate * lower) * integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity());
  }
  return surface_area(dim) * radial;
}

NormEstimate lp_norm(const LatticeGrid& field, double p) {
  if (!(p > 0.0)) throw DomainError("lp_norm: p must be positive");
  const auto v = field.values();
  const Moments m = reduce_terms(v.size(), [&](std::size_t i) { return std::pow(std::abs(v[i]), p); });
  const double total = m.sum() * field.cell_volume();
  return {std::pow(total, 1.0 / p), NormEstimate::Method::LatticeSum, field.spacing()};
}

NormEstimate lp_norm(const TestFunction& f, double p, const LatticeGrid& shape) {
  if (!(p > 0.0)) throw DomainError("lp_norm: p must be positive");
  return lp_norm(LatticeGrid::sample(f, shape), p);
}

NormEstimate lp_norm(const TestFunction& f, double p) {
  if (!(p > 0.0)) throw DomainError("lp_norm: p must be positive");
  const int n = f.dim();
  return std::visit(
      Overloaded{
          [&](const ConstantFn& c) -> NormEstimate {
            return {c.value == 0.0 ? 0.0 : kInf, NormEstimate::Method::ClosedForm, 0.0};
          },
          [&](const BallIndicatorFn& b) -> NormEstimate {
            return {std::pow(ball_volume(n) * std::pow(b.radius, n), 1.0 / p), NormEstimate::Method::ClosedForm, 0.0};
          },
          [&](const GaussianFn& g) -> NormEstimate {
            // int exp(-p |x|^2 / w^2) dx = (pi w^2 / p)^{n/2}
            const double integral = std::pow(std::numbers::pi * g.width * g.width / p, n / 2.0);
            return {std::pow(integral, 1.0 / p), NormEstimate::Method::ClosedForm, 0.0};
          },
          [&](const RadialPowerLogFn& r) -> NormEstimate {
            const double integral = radial_power_log_integral(r, n, p);
            return {std::isinf(integral) ? kInf : std::pow(integral, 1.0 / p), NormEstimate::Method::ClosedForm, 0.0};
          },
          [&](const LatticeFieldFn& l) -> NormEstimate { return lp_norm(*l.grid, p); },
      },
      f.variant());
}

NormEstimate weak_lp_quasinorm(const LatticeGrid& field, double p, std::size_t lambda_points, std::size_t min_cells) {
  if (!(p > 0.0)) throw DomainError("weak_lp_quasinorm: p must be positive");
  if (lambda_points < 2) throw DomainError("weak_lp_quasinorm: lambda grid needs at least two points");
  std::vector<double> mags;
  mags.reserve(field.size());
  for (double v : field.values()) {
    if (!std::isfinite(v)) throw DomainError("weak_lp_quasinorm: field values must be finite");
    if (v != 0.0) mags.push_back(std::abs(v));
  }
  NormEstimate out{0.0, NormEstimate::Method::LayerCake, field.spacing()};
  if (mags.empty()) return out;
  std::sort(mags.begin(), mags.end());
  const double lo = mags.front();
  const double hi = mags.back();
  const double cell = field.cell_volume();
  const auto floor_count = static_cast<double>(std::min(min_cells, mags.size()));
  const double ratio = lo == hi ? 1.0 : std::pow(hi / lo, 1.0 / static_cast<double>(lambda_points - 1));
  for (std::size_t i = 0; i < lambda_points; ++i) {
    const double lambda = i + 1 == lambda_points ? hi : lo * std::pow(ratio, static_cast<double>(i));
    const auto above = static_cast<double>(mags.end() - std::lower_bound(mags.begin(), mags.end(), lambda));
    if (above < floor_count) continue;
    out.value = std::max(out.value, lambda * std::pow(cell * above, 1.0 / p));
  }
  return out;
}

double lorentz_p1_indicator(double measure, double p) {
  if (!(measure >= 0.0)) throw DomainError("lorentz_p1_indicator: measure must be nonnegative");
  if (!(p > 0.0)) throw DomainError("lorentz_p1_indicator: p must be positive");
  return p * std::pow(measure, 1.0 / p);
}

}  // namespace sphmax
