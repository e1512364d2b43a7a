#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string_view>
#include <utility>

namespace qmint {

// Counter-based pseudorandom stream. The output at position i is a strong
// 64-bit mix of (key, i), so streams can be split by label without sharing
// state: a child stream gets a fresh key derived from the parent key and the
// label, and starts at counter zero. Identical seeds give identical
// sequences, and sibling streams are independent of the order in which they
// are consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix64(seed ^ 0x6a09e667f3bcc908ull)), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ull);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound); unbiased (Lemire rejection).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t threshold = -bound % bound;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool next_bool() { return (next_u64() >> 63) != 0; }

  bool bernoulli(double p) { return next_double() < p; }

  // Box-Muller pair of independent standard normals.
  std::pair<double, double> normal_pair() {
    const double u1 = (static_cast<double>(next_u64()) + 1.0) * 0x1.0p-64;  // (0, 1]
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

  double normal() { return normal_pair().first; }

  // Child stream for a labeled subtask. Reproducible regardless of how much
  // output the parent has produced after the split point.
  Rng split(std::uint64_t label) const {
    Rng child(0);
    child.key_ = mix64(mix64(key_ ^ 0x9e3779b97f4a7c15ull) + mix64(label ^ 0xbb67ae8584caa73bull));
    child.seed_ = seed_;
    child.counter_ = 0;
    return child;
  }

  Rng split(std::string_view label) const { return split(fnv1a(label)); }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
    return h;
  }

 private:
  static std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  std::uint64_t seed_ = 0;
};

}  // namespace qmint
