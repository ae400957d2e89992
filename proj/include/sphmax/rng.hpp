#pragma once

// Counter-based random numbers. Every draw is a pure function of
// (seed, stream index, position), so node i of a Monte Carlo rule is the
// same no matter how many threads generate the rule.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace sphmax {

/// Philox4x32-10 block function (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }
};

/// SplitMix64 finalizer; used to derive per-task seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed for parallel task `task` under root seed `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task) noexcept {
  return splitmix64(seed ^ splitmix64(task + 0x632BE59BD9B4E019ull));
}

/// Sequential draws from the Philox stream keyed by `seed` at index `stream`.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  std::uint32_t next_u32() noexcept {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform() noexcept {
    const std::uint64_t a = next_u32() >> 5;
    const std::uint64_t b = next_u32() >> 6;
    return (static_cast<double>(a * 67108864ull + b) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Fills `out` with a uniformly distributed unit vector.
  void unit_vector(std::span<double> out) noexcept {
    for (;;) {
      double norm2 = 0.0;
      for (double& v : out) {
        v = normal();
        norm2 += v * v;
      }
      if (norm2 > 1e-300) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : out) v *= inv;
        return;
      }
    }
  }

 private:
  void refill() noexcept {
    buf_ = Philox4x32::block({static_cast<std::uint32_t>(stream_),
                              static_cast<std::uint32_t>(stream_ >> 32),
                              static_cast<std::uint32_t>(block_),
                              static_cast<std::uint32_t>(block_ >> 32)},
                             key_);
    ++block_;
    pos_ = 0;
  }

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buf_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sphmax
