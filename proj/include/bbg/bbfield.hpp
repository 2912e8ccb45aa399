#pragma once

#include <functional>

#include "bbg/plane.hpp"
#include "bbg/sym4.hpp"

namespace bbg {

/// Element of the black box field K on the coordinate axis e1 v e3, or more
/// generally a point of the plane: either a regular point (an involution;
/// e3 encodes zero) or a parabolic point (the tangent-line record of a
/// quadric point). Parabolic field values exist exactly when -1 is a square:
/// the axis then meets the quadric in two points.
struct FieldElementK {
  std::optional<Element> regular;
  std::optional<PlaneLine> parabolic;

  bool is_regular() const { return regular.has_value(); }
  static FieldElementK from_regular(Element e) {
    FieldElementK v;
    v.regular = std::move(e);
    return v;
  }
  static FieldElementK from_parabolic(PlaneLine l) {
    FieldElementK v;
    v.parabolic = std::move(l);
    return v;
  }
};

/// The black box field: addition and multiplication by straightedge
/// constructions in the plane of involutions, negation and inversion by
/// single conjugations.
class FieldK {
public:
  FieldK(Engine &eng, SpinorFrame frame);

  Engine &engine() { return eng_; }
  Plane &plane() { return plane_; }
  const SpinorFrame &frame() const { return frame_; }

  FieldElementK zero() const { return FieldElementK::from_regular(frame_.e3); }
  /// The unit: the frame transposition lying on the axis (coordinates (1,0,1)).
  FieldElementK one() const { return FieldElementK::from_regular(frame_.d2); }

  bool eq(const FieldElementK &a, const FieldElementK &b);
  bool is_zero(const FieldElementK &a) { return eq(a, zero()); }

  SerendipityOutcome<FieldElementK> add(const FieldElementK &a, const FieldElementK &b);
  SerendipityOutcome<FieldElementK> mul(const FieldElementK &a, const FieldElementK &b);

  /// Conjugation by e3 (the half-turn at the origin).
  FieldElementK neg(const FieldElementK &a);
  /// Conjugation by d2 (the half-turn at (1,0,1)); requires a != 0.
  FieldElementK inv(const FieldElementK &a);

  /// a^e under field multiplication.
  SerendipityOutcome<FieldElementK> pow(const FieldElementK &a, const BigUint &e);

  /// Square root in K, given the field order q: exponentiation when
  /// q = 3 mod 4, Tonelli-Shanks over K multiplication when q = 1 mod 4.
  std::optional<FieldElementK> sqrt(const FieldElementK &a, const BigUint &q);

  /// Image of a nonnegative residue under the canonical map Z -> K0
  /// (double-and-add on the unit).
  SerendipityOutcome<FieldElementK> residue_image(const BigUint &r);

  /// Uniform nonzero element of K (a random axis involution, e1 excluded).
  FieldElementK random_element();

  /// Fires on every unipotent event seen inside K constructions, including
  /// intermediate ones that do not abort the operation.
  void set_unipotent_observer(std::function<void(const UnipotentEvent &)> fn) {
    observer_ = std::move(fn);
  }

  /// True when the value lies on the coordinate axis (sanity checking).
  bool on_axis(const FieldElementK &a);

  /// Number of field additions / multiplications performed (cost probes).
  uint64_t add_count() const { return add_count_; }
  uint64_t mul_count() const { return mul_count_; }

  // -- coordinate scaffolding (affine coordinates relative to the frame) --

  /// Polar projections of an involution onto the coordinate axes, both
  /// transported to the x1-axis: the affine coordinate pair.
  std::pair<FieldElementK, FieldElementK> coordinates(const Element &x);

  /// The point with affine coordinates (a, b): regular or parabolic.
  FieldElementK point_from_coordinates(const FieldElementK &a, const FieldElementK &b);

  /// The plane point for homogeneous coordinates (a, b, c) given as axis
  /// values; c = 0 selects the line at infinity.
  FieldElementK point_from_homogeneous(const FieldElementK &a, const FieldElementK &b,
                                       const FieldElementK &c);

  /// Lines of the coordinate triangle.
  const PlaneLine &axis_line() const { return axis_; }        // e1 v e3
  const PlaneLine &second_axis() const { return x2_axis_; }   // e2 v e3
  const PlaneLine &infinity_line() const { return infty_; }   // e1 v e2

private:
  FieldElementK conj_value(const FieldElementK &a, const Element &g);
  SerendipityOutcome<PlaneLine> join_points(const FieldElementK &a, const FieldElementK &b);
  FieldElementK meet_lines(const PlaneLine &k, const PlaneLine &l);
  FieldElementK transport_to_axis(const FieldElementK &x2_value);
  FieldElementK transport_from_axis(const FieldElementK &axis_value);
  void notify(const UnipotentEvent &ev);

  SerendipityOutcome<FieldElementK> add_uncached(const FieldElementK &a, const FieldElementK &b);
  SerendipityOutcome<FieldElementK> mul_uncached(const FieldElementK &a, const FieldElementK &b);
  const FieldElementK *memo_lookup(uint64_t tag, const FieldElementK &a, const FieldElementK &b,
                                   std::vector<uint64_t> *key);
  void memo_store(std::vector<uint64_t> key, const FieldElementK &v);

  Engine &eng_;
  Plane plane_;
  SpinorFrame frame_;
  PlaneLine axis_, x2_axis_, infty_;
  std::function<void(const UnipotentEvent &)> observer_;
  uint64_t add_count_ = 0;
  uint64_t mul_count_ = 0;
  // operands and results repeat heavily in matrix arithmetic; since the
  // group operations behind one addition cost O((xi+mu+rho) log log E), a
  // payload-keyed memo pays for itself quickly (canonical encodings only)
  std::unordered_map<std::vector<uint64_t>, FieldElementK, WordsHash> op_memo_;
  Element neg_one_;
  bool neg_one_set_ = false;
};

}  // namespace bbg
