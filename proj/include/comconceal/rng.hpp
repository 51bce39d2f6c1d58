#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace comconceal {

// SplitMix64 step. Also used to derive sub-seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Combines a master seed with stream identifiers into a derived seed.
// Deterministic and order-sensitive, so seed_mix(s, 1, 2) != seed_mix(s, 2, 1).
inline std::uint64_t seed_mix(std::uint64_t master,
                              std::initializer_list<std::uint64_t> parts) {
  std::uint64_t state = master;
  splitmix64_next(state);
  for (std::uint64_t p : parts) {
    state ^= p + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
    splitmix64_next(state);
  }
  return state;
}

inline std::uint64_t double_bits(double x) {
  static_assert(sizeof(double) == sizeof(std::uint64_t));
  std::uint64_t b;
  __builtin_memcpy(&b, &x, sizeof(b));
  return b;
}

// Deterministic PRNG used everywhere in the toolkit. We avoid the standard
// <random> distributions because their exact output sequences are
// implementation-defined; every sampler here is spelled out so that a seed
// pins the byte-exact output of a run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // Warm up so that small seeds do not produce correlated first draws.
    splitmix64_next(state_);
  }

  std::uint64_t next() { return splitmix64_next(state_); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return r % bound;
  }

  // Uniform integer in [lo, hi], inclusive.
  long uniform_int(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Standard normal via Box-Muller; the spare draw is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace comconceal
