#include "sphmax/parallel.hpp"

namespace sphmax {

double pairwise_sum(std::span<const double> xs) noexcept {
  if (xs.size() <= 16) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

Moments buffer_moments(std::span<const double> xs) noexcept {
  if (xs.empty()) return {};
  const double n = static_cast<double>(xs.size());
  const double mean = pairwise_sum(xs) / n;
  double m2 = 0.0;
  for (double x : xs) m2 += (x - mean) * (x - mean);
  return {n, mean, m2};
}

Moments tree_merge(std::span<const Moments> parts) noexcept {
  if (parts.empty()) return {};
  if (parts.size() == 1) return parts[0];
  const std::size_t half = parts.size() / 2;
  return Moments::merge(tree_merge(parts.first(half)), tree_merge(parts.subspan(half)));
}

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int threads) noexcept {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

}  // namespace sphmax
