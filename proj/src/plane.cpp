#include "bbg/plane.hpp"

namespace bbg {

bool Plane::collinear(const Element &r, const Element &s, const Element &t) {
  BlackBox &box = eng_.box();
  if (box.eq(r, s) || box.eq(s, t) || box.eq(r, t))
    throw std::invalid_argument("collinear: points must be pairwise distinct");
  Element z = box.mul(box.mul(r, s), t);
  if (box.eq(z, box.identity()))
    return false;
  return box.eq(box.mul(z, z), box.identity());
}

PlaneLine Plane::polar_line(const Element &s) {
  InvolutionPoint pt = eng_.point_of(s);
  PlaneLine l;
  l.parabolic = false;
  l.gens = pt.torus_gens;
  l.flip = pt.w;
  l.pole = s;
  return l;
}

PlaneLine Plane::join(const Element &s, const Element &t) {
  auto out = eng_.j_of(s, t);
  if (out.is_ok()) {
    PlaneLine l = polar_line(out.value());
    // s lies on the line and inverts its torus: use it as the flip
    l.flip = s;
    return l;
  }
  return parabolic_join(out.event());
}

PlaneLine Plane::parabolic_join(const UnipotentEvent &ev) {
  BlackBox &box = eng_.box();
  InvolutionPoint pt = eng_.point_of(ev.s);
  BlackBox torus = make_subgroup_box(box, pt.torus_gens, eng_.fresh_salt(), /*burnin_per_gen=*/4);
  PlaneLine l;
  l.parabolic = true;
  l.gens.push_back(ev.u);
  unsigned conjugates = eng_.loglog_exponent() + 8;
  for (unsigned i = 0; i < conjugates; ++i)
    l.gens.push_back(eng_.conj(ev.u, torus.random()));
  l.flip = ev.s;
  return l;
}

PlaneLine Plane::join_with_parabolic(const Element &x, const PlaneLine &tangent) {
  if (!tangent.parabolic)
    throw std::invalid_argument("join_with_parabolic: second argument must be parabolic");
  if (on_line(tangent, x))
    return tangent;  // the only line through the tangent point and x is the tangent itself
  auto z = meet(polar_line(x), tangent);
  if (!z.is_ok())
    throw RetryExhausted("join_with_parabolic: polar meet unexpectedly parabolic");
  return polar_line(z.value());
}

SerendipityOutcome<Element> Plane::meet(const PlaneLine &k, const PlaneLine &l) {
  BlackBox &box = eng_.box();
  if (!k.parabolic && !l.parabolic) {
    if (box.eq(*k.pole, *l.pole))
      throw std::invalid_argument("meet: lines coincide");
    // the common point is polar to both poles
    return eng_.j_of(*k.pole, *l.pole);
  }

  // tangency fast paths: a line through the tangent point meets the tangent
  // line exactly there, on the quadric
  auto tangent_event = [&](const PlaneLine &tang) {
    Element u = tang.gens.front();
    Element s = box.mul(u, tang.flip);  // involution on the tangent line
    return SerendipityOutcome<Element>::unipotent(UnipotentEvent{u, s, tang.flip});
  };
  if (k.parabolic && !l.parabolic && on_line(k, *l.pole))
    return tangent_event(k);
  if (l.parabolic && !k.parabolic && on_line(l, *k.pole))
    return tangent_event(l);

  // reify the common involution: it inverts both line groups
  std::vector<std::pair<Element, Element>> pairs;
  for (const Element &g : k.gens)
    pairs.emplace_back(g, box.inv(g));
  for (const Element &g : l.gens)
    pairs.emplace_back(g, box.inv(g));
  ProtoInvolution proto = eng_.proto_from_pairs(pairs);
  auto accept = [&](const Element &cand) { return on_line(k, cand) && on_line(l, cand); };
  Element w = eng_.reify(proto, accept);
  return SerendipityOutcome<Element>::ok(w);
}

Element Plane::pole(const PlaneLine &k) const {
  if (k.parabolic || !k.pole)
    throw std::invalid_argument("pole: parabolic lines have no regular pole");
  return *k.pole;
}

SerendipityOutcome<Element> Plane::polar_project(const Element &s, const Element &x) {
  if (eng_.box().eq(s, x))
    throw std::invalid_argument("polar_project: x must differ from the center");
  auto inner = eng_.j_of(x, s);
  if (!inner.is_ok())
    return inner;
  return eng_.j_of(inner.value(), s);
}

bool Plane::on_line(const PlaneLine &l, const Element &x) const {
  BlackBox &box = eng_.box();
  if (!eng_.is_involution(x))
    return false;
  Element c = box.mul(x, l.flip);
  for (const Element &g : l.gens) {
    if (!box.eq(box.mul(c, g), box.mul(g, c)))
      return false;
  }
  return true;
}

BlackBox &Plane::line_box(const PlaneLine &l) {
  std::vector<uint64_t> key = l.flip.w;
  for (const Element &g : l.gens) {
    key.push_back(~0ull);
    key.insert(key.end(), g.w.begin(), g.w.end());
  }
  auto it = line_boxes_.find(key);
  if (it == line_boxes_.end()) {
    if (line_boxes_.size() > 512)
      line_boxes_.clear();
    it = line_boxes_.emplace(std::move(key), make_subgroup_box(eng_.box(), l.gens, eng_.fresh_salt()))
             .first;
  }
  return it->second;
}

Element Plane::sample_point(const PlaneLine &l) {
  return eng_.box().mul(line_box(l).random(), l.flip);
}

}  // namespace bbg
