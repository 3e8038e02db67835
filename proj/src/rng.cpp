#include "emoclass/rng.hpp"

namespace emoclass {

uint64_t hash_bytes(std::string_view bytes, uint64_t seed) {
  // FNV-1a seeded, then a finalizing mix so nearby seeds decorrelate.
  uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix_hash(h, seed);
}

uint64_t mix_hash(uint64_t a, uint64_t b) {
  uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace emoclass
