#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "bbg/blackbox.hpp"
#include "bbg/explicit_field.hpp"

namespace bbg {

/// 2x2 matrix over an explicit field, row-major entries a, b, c, d.
using Matrix2 = std::array<FieldValue, 4>;

enum class MatrixKind { PSL2, PGL2 };

enum class PayloadEncoding {
  Canonical,  // first nonzero entry normalized to 1; payload equality = group equality
  Scrambled   // representatives carry a payload-dependent scalar; eq normalizes on compare
};

/// Oracle over projective classes of invertible 2x2 matrices. PSL2 mode
/// restricts element construction to classes of determinant-1 matrices; the
/// group operations themselves are the same.
class MatrixGroupOps : public GroupOps {
public:
  MatrixGroupOps(ExplicitField field, MatrixKind kind, PayloadEncoding enc);

  const ExplicitField &field() const { return field_; }
  MatrixKind kind() const { return kind_; }
  bool canonical_encoding() const override { return enc_ == PayloadEncoding::Canonical; }

  /// Validates invertibility (and det = 1 for PSL2) and normalizes.
  Element element_from_matrix(const Matrix2 &m) const;
  /// Decoded, normalized representative.
  Matrix2 matrix_of(const Element &e) const;

  std::string element_to_json(const Element &e) const;
  Element element_from_json(const std::string &text) const;

protected:
  Element do_mul(const Element &a, const Element &b) const override;
  Element do_inv(const Element &a) const override;
  bool do_eq(const Element &a, const Element &b) const override;

private:
  Matrix2 decode(const Element &e) const;
  Element encode(const Matrix2 &m) const;
  Matrix2 normalized(Matrix2 m) const;
  Element finish(Matrix2 m, uint64_t scramble_key) const;

  ExplicitField field_;
  MatrixKind kind_;
  PayloadEncoding enc_;
};

/// Black box over PSL2(F_q), q >= 4, with global exponent q(q^2-1).
BlackBox make_psl2_box(const ExplicitField &field, uint64_t seed,
                       PayloadEncoding enc = PayloadEncoding::Canonical);

/// Black box over PGL2(F_q) (isomorphic to SO3(F_q)), q odd.
BlackBox make_pgl2_box(const ExplicitField &field, uint64_t seed,
                       PayloadEncoding enc = PayloadEncoding::Canonical);

/// Componentwise product box; exponent lcm(E_A, E_B).
class DirectProductOps : public GroupOps {
public:
  DirectProductOps(std::shared_ptr<const GroupOps> a, std::shared_ptr<const GroupOps> b);

  Element pair(const Element &a, const Element &b) const;
  Element left(const Element &p) const;
  Element right(const Element &p) const;
  bool canonical_encoding() const override {
    return a_->canonical_encoding() && b_->canonical_encoding();
  }
  const std::shared_ptr<const GroupOps> &a_ops() const { return a_; }
  const std::shared_ptr<const GroupOps> &b_ops() const { return b_; }

protected:
  Element do_mul(const Element &a, const Element &b) const override;
  Element do_inv(const Element &a) const override;
  bool do_eq(const Element &a, const Element &b) const override;

private:
  std::shared_ptr<const GroupOps> a_;
  std::shared_ptr<const GroupOps> b_;
  size_t la_;
};

BlackBox direct_product(const BlackBox &A, const BlackBox &B, uint64_t seed_salt = 2);

/// Semidirect product A x| B for an action (x, y) -> x^y of B on A by
/// automorphisms: (x1,y1)(x2,y2) = (x1 * x2^(y1^-1), y1 y2).
class SemidirectProductOps : public GroupOps {
public:
  using Action = std::function<Element(const Element &x, const Element &y)>;

  SemidirectProductOps(std::shared_ptr<const GroupOps> a, std::shared_ptr<const GroupOps> b,
                       Action action);

  Element pair(const Element &a, const Element &b) const;
  Element left(const Element &p) const;
  Element right(const Element &p) const;
  bool canonical_encoding() const override {
    return a_->canonical_encoding() && b_->canonical_encoding();
  }

protected:
  Element do_mul(const Element &a, const Element &b) const override;
  Element do_inv(const Element &a) const override;
  bool do_eq(const Element &a, const Element &b) const override;

private:
  std::shared_ptr<const GroupOps> a_;
  std::shared_ptr<const GroupOps> b_;
  Action action_;
  size_t la_;
};

BlackBox semidirect_product(const BlackBox &A, const BlackBox &B,
                            SemidirectProductOps::Action action, uint64_t seed_salt = 3);

/// Subgroup of A x B generated by explicit pairs (already encoded in the
/// product box's payload form).
BlackBox graph_subgroup(const BlackBox &product_box, std::vector<Element> pairs,
                        uint64_t seed_salt = 4);

/// Group-spec JSON: {"type": "PSL2"|"PGL2", "field": {...}, "E": "<decimal>",
/// "seed": N, "encoding": "canonical"|"scrambled"}. E defaults to q(q^2-1).
struct GroupSpec {
  MatrixKind kind = MatrixKind::PSL2;
  ExplicitField field = ExplicitField::prime(5);
  BigUint E;
  uint64_t seed = 0;
  PayloadEncoding encoding = PayloadEncoding::Canonical;

  BlackBox instantiate() const;
  std::string to_json() const;
  static GroupSpec from_json(const std::string &text);
};

}  // namespace bbg
