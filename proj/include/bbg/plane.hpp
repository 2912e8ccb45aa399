#pragma once

#include "bbg/engine.hpp"

namespace bbg {

/// Line of the involution plane, carried by generating data rather than
/// point enumeration. A toric line is the involution coset T*flip of a torus
/// T; a parabolic (tangent) line is the coset U*flip of a maximal unipotent
/// subgroup U. A parabolic line doubles as its tangent point on the quadric.
struct PlaneLine {
  bool parabolic = false;
  std::vector<Element> gens;
  Element flip;
  std::optional<Element> pole;  // toric lines only
};

/// Toolbox operations on the black box projective plane of involutions.
class Plane {
public:
  explicit Plane(Engine &eng) : eng_(eng) {}

  Engine &engine() { return eng_; }

  /// Fact: r, s, t lie on one line iff rst is again an involution.
  bool collinear(const Element &r, const Element &s, const Element &t);

  /// The polar line of s: involutions commuting with s, as the coset T_s * w.
  PlaneLine polar_line(const Element &s);

  /// The line through two distinct regular points; parabolic when st is
  /// unipotent.
  PlaneLine join(const Element &s, const Element &t);

  /// The line through a regular point and a parabolic point.
  PlaneLine join_with_parabolic(const Element &x, const PlaneLine &tangent);

  /// The parabolic line s v t harvested from a unipotent event u = st.
  PlaneLine parabolic_join(const UnipotentEvent &ev);

  /// Common point of two distinct lines: the common involution, or the
  /// unipotent event when the lines meet on the quadric.
  SerendipityOutcome<Element> meet(const PlaneLine &k, const PlaneLine &l);

  /// The pole of a toric line (unique involution perpendicular to it).
  Element pole(const PlaneLine &k) const;

  /// Central projection onto the polar line of s: x -> j(j(x,s),s).
  SerendipityOutcome<Element> polar_project(const Element &s, const Element &x);

  /// Incidence test without enumeration: x*flip must centralize the line's
  /// group.
  bool on_line(const PlaneLine &l, const Element &x) const;

  /// Uniformly distributed involution on the line.
  Element sample_point(const PlaneLine &l);

private:
  BlackBox &line_box(const PlaneLine &l);

  Engine &eng_;
  std::unordered_map<std::vector<uint64_t>, BlackBox, WordsHash> line_boxes_;
};

}  // namespace bbg
