#include "bbg/modarith.hpp"

#include <stdexcept>

namespace bbg {

uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
  if (m == 1)
    return 0;
  uint64_t result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1u)
      result = mulmod_u64(result, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return result;
}

uint64_t invmod_u64(uint64_t a, uint64_t m) {
  // extended gcd on (a, m), tracking only the coefficient of a
  int64_t t0 = 0, t1 = 1;
  uint64_t r0 = m, r1 = a % m;
  while (r1 != 0) {
    uint64_t q = r0 / r1;
    uint64_t r2 = r0 - q * r1;
    int64_t t2 = t0 - static_cast<int64_t>(q) * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (r0 != 1)
    throw std::invalid_argument("invmod_u64: not invertible");
  return t0 >= 0 ? static_cast<uint64_t>(t0) : m - static_cast<uint64_t>(-t0);
}

bool is_prime_u64(uint64_t n) {
  if (n < 2)
    return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0)
      return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1u) == 0) {
    d >>= 1;
    ++s;
  }
  // these bases are a known deterministic set for n < 2^64
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod_u64(a % n, d, n);
    if (x == 1 || x == n - 1)
      continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness)
      return false;
  }
  return true;
}

}  // namespace bbg
