#pragma once

#include <cstdint>
#include <string_view>

namespace symtrot {

// splitmix64 (Steele/Lea/Flood); used only to expand seeds into streams.
inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// PCG-XSH-RR 64/32 (O'Neill, pcg-random.org), the minimal variant.
// Fixed algorithm so that sampled histograms are bit-reproducible for a
// given seed on any platform.
class Pcg32 {
 public:
  Pcg32(std::uint64_t seed, std::uint64_t stream = 0) {
    state_ = 0u;
    inc_ = (stream << 1u) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ull + inc_;
    std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
  }

  // uniform in [0,1): 32-bit mantissa, deterministic across platforms
  double uniform01() { return next_u32() * 0x1p-32; }

  // uniform integer in [0, n); plain modulo (bias < 2^-32 * n, negligible
  // for the n used here and keeps the draw sequence trivially portable)
  std::uint32_t below(std::uint32_t n) { return next_u32() % n; }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

// Deterministic sub-stream derivation: hash a purpose label and indices
// into (seed, stream) so parallel jobs never share a draw sequence.
inline Pcg32 derive_stream(std::uint64_t master, std::string_view purpose,
                           std::uint64_t a = 0, std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t x = master ^ fnv1a64(purpose);
  std::uint64_t s1 = splitmix64(x);
  x ^= a * 0x9E3779B97F4A7C15ull + 1;
  std::uint64_t s2 = splitmix64(x);
  x ^= b * 0xBF58476D1CE4E5B9ull + 3;
  std::uint64_t s3 = splitmix64(x);
  x ^= c * 0x94D049BB133111EBull + 5;
  std::uint64_t s4 = splitmix64(x);
  return Pcg32(s1 ^ s3, s2 ^ s4);
}

}  // namespace symtrot
