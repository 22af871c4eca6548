#ifndef BOOLEDYN_RNG_HPP
#define BOOLEDYN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <string_view>

namespace booledyn {

// SplitMix64 finalizer. Used both as the per-step output function and to
// derive independent stream states from (seed, index) pairs.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_name(std::string_view name) {
  // FNV-1a, then mixed.
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return mix64(h);
}

// One deterministic random stream. Same (seed, index) gives a bit-identical
// sequence; distinct indices give statistically independent streams, so
// sample ranges can be partitioned freely across worker threads.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index)
      : state_(mix64(mix64(seed) ^ mix64(index * 0xda942042e4dd58b5ULL + 1))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform on the open interval (0,1); never returns an exact endpoint.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard Cauchy via the inverse CDF; endpoints of (0,1) are unreachable
  // so the tangent stays finite.
  double cauchy() { return std::tan(M_PI * (uniform01() - 0.5)); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = uniform01(), v = uniform01();
    double r = std::sqrt(-2.0 * std::log(u));
    double a = 2.0 * M_PI * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Counter-based, splittable sampler: hands out independent RandomStreams by
// sample index. Forking with a salt (e.g. the experiment name) keeps
// different experiments decorrelated under a single run seed.
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  RandomStream stream(std::uint64_t index) const { return RandomStream(seed_, index); }

  SeededSampler fork(std::string_view salt) const {
    return SeededSampler(mix64(seed_ ^ hash_name(salt)));
  }

 private:
  std::uint64_t seed_;
};

}  // namespace booledyn

#endif
