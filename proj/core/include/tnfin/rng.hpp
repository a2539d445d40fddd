#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace tnfin {

// Deterministic random source. All real/integer mappings are hand-rolled on
// top of the mt19937_64 bit stream so that results do not depend on the
// standard library's distribution implementations. Substreams derived from a
// (seed, path) pair make results independent of evaluation order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform index in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n) {
    // Multiply-shift mapping; bias is < 2^-64 * n, irrelevant here.
    const auto x = next_u64();
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(x) * n) >> 64);
  }

  /// Standard normal deviate (polar Box-Muller, cached pair).
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * f;
    has_cached_ = true;
    return u * f;
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = uniform_index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  /// Derives a child seed from a root seed and a path of indices, so that
  /// per-(iteration, cat, ...) substreams are reproducible regardless of
  /// execution order.
  static std::uint64_t derive(std::uint64_t seed,
                              std::initializer_list<std::uint64_t> path) {
    std::uint64_t x = seed;
    for (const auto p : path) {
      x = splitmix64(x ^ (p + 0x9e3779b97f4a7c15ULL));
    }
    return splitmix64(x);
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace tnfin
