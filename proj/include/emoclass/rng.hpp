#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace emoclass {

// Deterministic generator used everywhere randomness is needed. The standard
// library distributions are implementation-defined, so sampling is done by
// hand to keep outputs byte-identical across platforms and toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {  // splitmix64
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // [0, n); n must be > 0. Modulo bias is irrelevant at the scales used here.
  size_t index(size_t n) { return static_cast<size_t>(next() % n); }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

 private:
  uint64_t state_;
};

uint64_t hash_bytes(std::string_view bytes, uint64_t seed);
uint64_t mix_hash(uint64_t a, uint64_t b);

}  // namespace emoclass
