#pragma once

#include <cmath>
#include <cstdint>

namespace dcg {

// splitmix64 finalizer; bijective on 64-bit words.
inline uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based stream key for (master seed, cell, realization). Streams are
// stateless functions of their key, so parallel evaluation order cannot
// change any drawn value.
inline uint64_t derive_stream(uint64_t seed, uint64_t cell, uint64_t k = 0) {
  return mix64(mix64(mix64(seed) + cell) + k);
}

struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t s) : state(s) {}
  uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

// Standard-normal stream: Box-Muller over splitmix64 uniforms.
class NormalStream {
 public:
  explicit NormalStream(uint64_t key) : gen_(key) {}

  double next() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.141592653589793238462643 * u2;
    cached_ = r * std::sin(a);
    have_ = true;
    return r * std::cos(a);
  }

  // Uniform in the open interval (0, 1).
  double uniform01() { return (static_cast<double>(gen_.next() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  SplitMix64 gen_;
  bool have_ = false;
  double cached_ = 0.0;
};

}  // namespace dcg
