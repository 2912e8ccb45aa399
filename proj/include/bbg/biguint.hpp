#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bbg {

/// Unsigned big integer, little-endian 64-bit limbs.
///
/// Group exponents such as q(q^2-1) overflow 64 bits long before q does, and
/// all order-type tests are phrased as powers by (pieces of) the exponent, so
/// everything exponent-shaped in the library is a BigUint.
class BigUint {
public:
  BigUint() = default;
  BigUint(uint64_t v);

  static BigUint from_decimal(std::string_view s);
  static BigUint from_u128(unsigned __int128 v);

  std::string to_decimal() const;

  bool is_zero() const { return limbs_.empty(); }
  bool is_even() const { return limbs_.empty() || (limbs_[0] & 1u) == 0; }
  bool is_one() const { return limbs_.size() == 1 && limbs_[0] == 1; }

  size_t bit_length() const;
  bool bit(size_t i) const;

  /// Number of trailing zero bits; 0 for zero.
  size_t two_adic_valuation() const;

  BigUint operator+(const BigUint &rhs) const;
  BigUint operator-(const BigUint &rhs) const;  // requires *this >= rhs
  BigUint operator*(const BigUint &rhs) const;

  BigUint shifted_right(size_t bits) const;
  BigUint shifted_left(size_t bits) const;

  uint64_t mod_u64(uint64_t m) const;
  BigUint div_u64(uint64_t d) const;

  /// Shift-subtract long division.
  std::pair<BigUint, BigUint> divmod(const BigUint &d) const;

  static BigUint gcd(BigUint a, BigUint b);
  static BigUint lcm(const BigUint &a, const BigUint &b);

  /// Fits in uint64_t?
  bool fits_u64() const { return limbs_.size() <= 1; }
  uint64_t as_u64() const { return limbs_.empty() ? 0 : limbs_[0]; }

  int compare(const BigUint &rhs) const;
  bool operator==(const BigUint &rhs) const { return limbs_ == rhs.limbs_; }
  bool operator!=(const BigUint &rhs) const { return limbs_ != rhs.limbs_; }
  bool operator<(const BigUint &rhs) const { return compare(rhs) < 0; }
  bool operator<=(const BigUint &rhs) const { return compare(rhs) <= 0; }
  bool operator>(const BigUint &rhs) const { return compare(rhs) > 0; }
  bool operator>=(const BigUint &rhs) const { return compare(rhs) >= 0; }

private:
  void trim();
  std::vector<uint64_t> limbs_;
};

}  // namespace bbg
