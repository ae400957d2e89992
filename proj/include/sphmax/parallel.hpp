#pragma once

// Deterministic OpenMP reductions. Work is cut into fixed-size chunks that do
// not depend on the thread count; chunk moments are merged in a fixed binary
// tree, so results are bit-identical for any number of workers.

#include <algorithm>
#include <array>
#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sphmax {

/// Count, mean and sum of squared deviations of a batch of terms.
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  double sum() const noexcept { return mean * count; }
  double variance() const noexcept { return count > 1.0 ? m2 / (count - 1.0) : 0.0; }

  // Chan et al. pairwise update.
  static Moments merge(const Moments& a, const Moments& b) noexcept {
    if (a.count == 0.0) return b;
    if (b.count == 0.0) return a;
    const double n = a.count + b.count;
    const double delta = b.mean - a.mean;
    return {n, a.mean + delta * (b.count / n), a.m2 + b.m2 + delta * delta * (a.count * b.count / n)};
  }
};

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> xs) noexcept;

/// Moments of a contiguous buffer (two-pass within the buffer).
Moments buffer_moments(std::span<const double> xs) noexcept;

/// Merges moments in a fixed balanced tree over index order.
Moments tree_merge(std::span<const Moments> parts) noexcept;

inline constexpr std::size_t kReductionChunk = 1024;

int max_threads() noexcept;
void set_threads(int threads) noexcept;

/// Moments of term(0..n-1), evaluated in parallel with a deterministic
/// reduction order. If any term throws, the exception from the lowest chunk
/// is rethrown after the loop.
template <class TermFn>
Moments reduce_terms(std::size_t n, TermFn&& term) {
  const std::size_t chunks = (n + kReductionChunk - 1) / kReductionChunk;
  std::vector<Moments> parts(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  const auto signed_chunks = static_cast<long long>(chunks);
#pragma omp parallel for schedule(dynamic, 4)
  for (long long c = 0; c < signed_chunks; ++c) {
    std::array<double, kReductionChunk> buf;
    const std::size_t begin = static_cast<std::size_t>(c) * kReductionChunk;
    const std::size_t end = std::min(n, begin + kReductionChunk);
    try {
      for (std::size_t i = begin; i < end; ++i) buf[i - begin] = term(i);
      parts[static_cast<std::size_t>(c)] = buffer_moments(std::span<const double>(buf.data(), end - begin));
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return tree_merge(parts);
}

/// Deterministic parallel maximum of term(0..n-1).
template <class TermFn>
double reduce_max(std::size_t n, double init, TermFn&& term) {
  const std::size_t chunks = (n + kReductionChunk - 1) / kReductionChunk;
  std::vector<double> parts(chunks, init);
  std::vector<std::exception_ptr> errors(chunks);
  const auto signed_chunks = static_cast<long long>(chunks);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long c = 0; c < signed_chunks; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kReductionChunk;
    const std::size_t end = std::min(n, begin + kReductionChunk);
    try {
      double best = init;
      for (std::size_t i = begin; i < end; ++i) best = std::max(best, term(i));
      parts[static_cast<std::size_t>(c)] = best;
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  double best = init;
  for (double v : parts) best = std::max(best, v);
  return best;
}

}  // namespace sphmax
