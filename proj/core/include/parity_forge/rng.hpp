#pragma once

#include <cstdint>

namespace pf {

// splitmix64: tiny, portable, and identical on every platform, which the
// reproducibility contracts need (std <random> distributions are not
// implementation-stable).
class Rng {
 public:
  explicit Rng(uint64_t seed) : x_(seed) {}

  uint64_t next() {
    uint64_t z = (x_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, n) without modulo bias
  uint64_t below(uint64_t n) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  // uniform double in [0, 1)
  double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  uint64_t x_;
};

}  // namespace pf
