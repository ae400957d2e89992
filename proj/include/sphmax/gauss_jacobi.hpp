#pragma once

#include <vector>

namespace sphmax {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss rule on [-1, 1] for the weight (1 - x)^alpha (1 + x)^beta,
/// alpha, beta > -1, via Golub-Welsch.
GaussRule gauss_jacobi(int n, double alpha, double beta);

}  // namespace sphmax
