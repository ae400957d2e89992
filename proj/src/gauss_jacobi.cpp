#include "sphmax/gauss_jacobi.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "sphmax/errors.hpp"

namespace sphmax {

GaussRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("gauss_jacobi: need at least one node");
  if (alpha <= -1.0 || beta <= -1.0) throw DomainError("gauss_jacobi: exponents must exceed -1");

  const double ab = alpha + beta;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const double s = 2.0 * j + ab;
    jacobi(j, j) = (j == 0) ? (beta - alpha) / (ab + 2.0) : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    if (j + 1 < n) {
      const double k = j + 1.0;
      const double t = 2.0 * k + ab;
      // (k + ab) / (t - 1) cancels at k = 1; keep it exact when alpha + beta = -1.
      const double b = (j == 0) ? 4.0 * (1.0 + alpha) * (1.0 + beta) / (t * t * (t + 1.0))
                                : 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (t * t * (t + 1.0) * (t - 1.0));
      jacobi(j, j + 1) = jacobi(j + 1, j) = std::sqrt(b);
    }
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                              std::lgamma(ab + 2.0));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace sphmax
