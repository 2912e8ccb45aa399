#pragma once

#include <cstdint>

namespace bbg {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t addmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  uint64_t s = a + b;
  if (s < a || s >= m)
    s -= m;
  return s;
}

inline uint64_t submod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return a >= b ? a - b : m - (b - a);
}

uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m);

/// Modular inverse by extended gcd; m need not be prime but gcd(a,m) must be 1.
uint64_t invmod_u64(uint64_t a, uint64_t m);

/// Deterministic Miller-Rabin, correct for all n < 2^64.
bool is_prime_u64(uint64_t n);

}  // namespace bbg
