#pragma once

// Single-threaded reference kernels. Plain loops with Welford updates; the
// OpenMP kernels must agree with these to rounding.

#include <span>

#include "sphmax/function_space.hpp"
#include "sphmax/sphere_geometry.hpp"

namespace sphmax::reference {

EstimateResult integrate(const SphereQuadrature& rule, const Integrand& f);

/// Paired slice estimate; same contract as slice_integrate in paired mode.
EstimateResult slice_paired(int m, int n, int k, const Integrand& f, const BallQuadrature& ball,
                            const SphereQuadrature& inner);

/// Direct probability mean of prod_j f_j(x - t y^j) on a Probability rule.
double spherical_mean(std::span<const TestFunction> fs, std::span<const double> x, double t,
                      const SphereQuadrature& quad);

}  // namespace sphmax::reference
