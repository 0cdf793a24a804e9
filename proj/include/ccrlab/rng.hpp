#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace ccrlab {

/// splitmix64 step; used for key mixing and state expansion.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Deterministic random stream (xoshiro256++ core).
///
/// A stream is a pure function of (seed, keys...): the same keys always
/// reproduce the same draw sequence, independent of what any other stream
/// did. Replicates and experiments get their own keys, so Monte Carlo
/// results cannot depend on evaluation order or worker count.
class Rng {
 public:
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t acc = seed;
    for (std::uint64_t k : keys) {
      acc ^= splitmix64(acc) + 0x632BE59BD9B4E019ull * (k + 1);
      (void)splitmix64(acc);
    }
    Rng rng;
    for (auto& word : rng.state_) word = splitmix64(acc);
    // xoshiro must not start from the all-zero state
    if ((rng.state_[0] | rng.state_[1] | rng.state_[2] | rng.state_[3]) == 0)
      rng.state_[0] = 0x9E3779B97F4A7C15ull;
    return rng;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Exponential with the given rate (inverse-cdf).
  double exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("Rng::exponential: rate must be positive");
    return -std::log1p(-uniform01()) / rate;
  }

  /// Poisson draw by cdf inversion; large means are split additively so the
  /// per-block mean stays in a numerically safe range.
  std::int64_t poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
      throw std::invalid_argument("Rng::poisson: mean must be finite and nonnegative");
    if (mean == 0.0) return 0;
    std::int64_t total = 0;
    double remaining = mean;
    while (remaining > kPoissonBlock) {
      total += poisson_inverted(kPoissonBlock);
      remaining -= kPoissonBlock;
    }
    return total + poisson_inverted(remaining);
  }

  /// Index draw from cumulative weights (strictly increasing, last = total).
  std::size_t discrete_cumulative(const std::vector<double>& cumulative) {
    const double u = uniform01() * cumulative.back();
    std::size_t lo = 0;
    while (lo + 1 < cumulative.size() && cumulative[lo] <= u) ++lo;
    return lo;
  }

 private:
  static constexpr double kPoissonBlock = 30.0;

  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::int64_t poisson_inverted(double mean) {
    const double u = uniform01();
    double p = std::exp(-mean);
    double cdf = p;
    std::int64_t k = 0;
    const std::int64_t cap =
        static_cast<std::int64_t>(mean + 40.0 * std::sqrt(mean) + 64.0);
    while (u > cdf && k < cap) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }

  std::uint64_t state_[4] = {};
};

/// FNV-1a hash of a string; used to derive per-check stream keys from ids.
inline std::uint64_t key_of(const char* text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (const char* p = text; *p != '\0'; ++p) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(*p));
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace ccrlab
