#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bbg/biguint.hpp"

namespace bbg {

/// Element of an ExplicitField: k residues mod p (coefficients over the prime
/// field in the basis 1, x, ..., x^(k-1)), stored least-nonnegative.
struct FieldValue {
  std::vector<uint64_t> c;

  bool operator==(const FieldValue &rhs) const { return c == rhs.c; }
};

/// An explicitly given finite field F_{p^k}: a prime field for k = 1, an
/// extension presented by a monic irreducible polynomial otherwise.
/// Multiplication in the extension case runs through the structure constants
/// c_ijk with s_i s_j = sum_k c_ijk s_k derived from the polynomial.
class ExplicitField {
public:
  static ExplicitField prime(uint64_t p);
  /// Deterministic per (p, k): smallest monic irreducible in coefficient
  /// lexicographic order, so fixtures are reproducible.
  static ExplicitField extension(uint64_t p, unsigned k);
  static ExplicitField with_poly(uint64_t p, std::vector<uint64_t> poly);

  uint64_t p() const { return p_; }
  unsigned k() const { return k_; }
  const BigUint &q() const { return q_; }
  const std::vector<uint64_t> &poly() const { return poly_; }
  const std::vector<uint64_t> &structure_constants() const { return sc_; }

  FieldValue zero() const;
  FieldValue one() const;
  FieldValue from_u64(uint64_t r) const;  // image of a residue in the prime subfield
  FieldValue element(std::vector<uint64_t> coeffs) const;
  /// Enumeration of all q elements in base-p digit order (index < q required).
  FieldValue element_at(uint64_t index) const;

  bool is_zero(const FieldValue &a) const;
  bool is_one(const FieldValue &a) const;

  FieldValue add(const FieldValue &a, const FieldValue &b) const;
  FieldValue sub(const FieldValue &a, const FieldValue &b) const;
  FieldValue neg(const FieldValue &a) const;
  FieldValue mul(const FieldValue &a, const FieldValue &b) const;
  FieldValue inv(const FieldValue &a) const;
  FieldValue pow(const FieldValue &a, const BigUint &e) const;
  std::optional<FieldValue> sqrt(const FieldValue &a) const;
  bool is_square(const FieldValue &a) const;

  std::string to_json() const;
  static ExplicitField from_json(const std::string &text);

private:
  ExplicitField() = default;
  void init_structure_constants();
  void check(const FieldValue &a) const;

  uint64_t p_ = 0;
  unsigned k_ = 0;
  std::vector<uint64_t> poly_;  // monic, degree k, low-to-high, size k+1
  std::vector<uint64_t> sc_;    // k^3 entries, sc_[(i*k + j)*k + l]
  BigUint q_;
};

}  // namespace bbg
