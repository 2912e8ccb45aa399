#pragma once

#include <array>

#include "bbg/serendipity.hpp"

namespace bbg {

/// 3x3 matrix over the black box field K, row-major.
struct Matrix3K {
  std::array<FieldElementK, 9> m;

  FieldElementK &at(int r, int c) { return m[3 * r + c]; }
  const FieldElementK &at(int r, int c) const { return m[3 * r + c]; }
};

/// The two-way morphisms between the black box group and SO3(K): rho sends a
/// group string to the matrix of its adjoint action in the frame coordinates,
/// rho_inverse reconstructs the string from a matrix.
class Adjoint {
public:
  /// q is the field order, needed for square roots in K.
  Adjoint(FieldK &K, BigUint q);

  FieldK &field() { return K_; }

  Matrix3K identity_matrix();
  Matrix3K rho(const Element &x);
  Element rho_inverse(const Matrix3K &r);

  Matrix3K so3k_mul(const Matrix3K &a, const Matrix3K &b);
  Matrix3K so3k_transpose(const Matrix3K &a);
  FieldElementK so3k_det(const Matrix3K &a);
  /// M M^T = I and det M = 1.
  bool so3k_check(const Matrix3K &a);
  bool matrix_eq(const Matrix3K &a, const Matrix3K &b);

  /// Homogeneous coordinate triple of a plane point (third entry zero on the
  /// line at infinity).
  std::array<FieldElementK, 3> homogeneous_coordinates(const Element &x);

  /// Prime-field leg of the standard-field morphism: residues map through
  /// the canonical map into K0. Verifies that p matches the characteristic.
  FieldElementK standard_to_k(const BigUint &p, const BigUint &residue);

private:
  Matrix3K rho_involution(const Element &x, unsigned depth);
  Element rho_inverse_involution(const Matrix3K &r, unsigned depth);
  bool general_position(const Element &x) const;
  bool matrix_general_position(const Matrix3K &r);
  /// Writes a K-matrix in SO3(K) as a product of two involutions.
  std::pair<Matrix3K, Matrix3K> matrix_as_two_involutions(const Matrix3K &r);

  FieldK &K_;
  BigUint q_;
  std::array<std::optional<Matrix3K>, 3> frame_images_;
  std::optional<BigUint> checked_p_;
};

}  // namespace bbg
