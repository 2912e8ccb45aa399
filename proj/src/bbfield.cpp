#include "bbg/bbfield.hpp"

namespace bbg {

FieldK::FieldK(Engine &eng, SpinorFrame frame)
    : eng_(eng), plane_(eng), frame_(std::move(frame)) {
  validate_frame(eng_, frame_);
  axis_ = plane_.polar_line(frame_.e2);
  axis_.flip = frame_.e3;  // e3 inverts the torus of e2 and lies on the axis
  x2_axis_ = plane_.polar_line(frame_.e1);
  x2_axis_.flip = frame_.e3;
  infty_ = plane_.polar_line(frame_.e3);
  infty_.flip = frame_.e1;
}

void FieldK::notify(const UnipotentEvent &ev) {
  if (observer_)
    observer_(ev);
}

bool FieldK::eq(const FieldElementK &a, const FieldElementK &b) {
  BlackBox &box = eng_.box();
  if (a.is_regular() != b.is_regular())
    return false;
  if (a.is_regular())
    return box.eq(*a.regular, *b.regular);
  // parabolic points agree iff their unipotent subgroups agree; distinct
  // maximal unipotents never commute elementwise
  return eng_.commute(a.parabolic->gens.front(), b.parabolic->gens.front());
}

FieldElementK FieldK::conj_value(const FieldElementK &a, const Element &g) {
  if (a.is_regular())
    return FieldElementK::from_regular(eng_.conj(*a.regular, g));
  PlaneLine l = *a.parabolic;
  for (Element &u : l.gens)
    u = eng_.conj(u, g);
  l.flip = eng_.conj(l.flip, g);
  l.pole.reset();
  return FieldElementK::from_parabolic(std::move(l));
}

FieldElementK FieldK::neg(const FieldElementK &a) { return conj_value(a, frame_.e3); }

FieldElementK FieldK::inv(const FieldElementK &a) {
  if (is_zero(a))
    throw std::invalid_argument("FieldK::inv: zero has no inverse");
  return conj_value(a, frame_.d2);
}

SerendipityOutcome<PlaneLine> FieldK::join_points(const FieldElementK &a,
                                                  const FieldElementK &b) {
  BlackBox &box = eng_.box();
  if (a.is_regular() && b.is_regular()) {
    if (box.eq(*a.regular, *b.regular))
      throw std::invalid_argument("join_points: points coincide");
    return SerendipityOutcome<PlaneLine>::ok(plane_.join(*a.regular, *b.regular));
  }
  if (a.is_regular() != b.is_regular()) {
    const Element &x = a.is_regular() ? *a.regular : *b.regular;
    const PlaneLine &tang = a.is_regular() ? *b.parabolic : *a.parabolic;
    return SerendipityOutcome<PlaneLine>::ok(plane_.join_with_parabolic(x, tang));
  }
  // two quadric points: the secant's pole is the meet of the tangents
  auto z = plane_.meet(*a.parabolic, *b.parabolic);
  if (!z.is_ok()) {
    notify(z.event());
    throw std::invalid_argument("join_points: parabolic points coincide");
  }
  return SerendipityOutcome<PlaneLine>::ok(plane_.polar_line(z.value()));
}

FieldElementK FieldK::meet_lines(const PlaneLine &k, const PlaneLine &l) {
  auto out = plane_.meet(k, l);
  if (out.is_ok())
    return FieldElementK::from_regular(out.value());
  notify(out.event());
  return FieldElementK::from_parabolic(plane_.parabolic_join(out.event()));
}

FieldElementK FieldK::transport_to_axis(const FieldElementK &v) { return conj_value(v, frame_.d3); }
FieldElementK FieldK::transport_from_axis(const FieldElementK &v) {
  return conj_value(v, frame_.d3);
}

SerendipityOutcome<FieldElementK> FieldK::add_uncached(const FieldElementK &a,
                                                       const FieldElementK &b) {
  if (is_zero(a))
    return SerendipityOutcome<FieldElementK>::ok(b);
  if (is_zero(b))
    return SerendipityOutcome<FieldElementK>::ok(a);
  FieldElementK e1pt = FieldElementK::from_regular(frame_.e1);
  FieldElementK e2pt = FieldElementK::from_regular(frame_.e2);
  FieldElementK d1pt = FieldElementK::from_regular(frame_.d1);

  // c = (a v e2) ^ (d1 v e1): the point over a at the helper height
  PlaneLine a_vert = join_points(a, e2pt).value();
  PlaneLine helper_horiz = join_points(d1pt, e1pt).value();
  FieldElementK c = meet_lines(a_vert, helper_horiz);

  // direction of the helper-to-b line
  PlaneLine slope = join_points(d1pt, b).value();
  FieldElementK inf = meet_lines(slope, infty_);

  // translate: the parallel through c meets the axis at a + b
  PlaneLine sum_line = join_points(c, inf).value();
  return SerendipityOutcome<FieldElementK>::ok(meet_lines(sum_line, axis_));
}

SerendipityOutcome<FieldElementK> FieldK::mul_uncached(const FieldElementK &a,
                                                       const FieldElementK &b) {
  if (is_zero(a) || is_zero(b))
    return SerendipityOutcome<FieldElementK>::ok(zero());
  if (eq(a, one()))
    return SerendipityOutcome<FieldElementK>::ok(b);
  if (eq(b, one()))
    return SerendipityOutcome<FieldElementK>::ok(a);
  FieldElementK e1pt = FieldElementK::from_regular(frame_.e1);
  FieldElementK e2pt = FieldElementK::from_regular(frame_.e2);
  FieldElementK zero_pt = zero();
  FieldElementK d3pt = FieldElementK::from_regular(frame_.d3);

  // the diagonal x1 = x2 and the unit point c = (1,1) on it
  PlaneLine diag = join_points(zero_pt, d3pt).value();
  PlaneLine one_vert = join_points(one(), e2pt).value();
  FieldElementK c = meet_lines(diag, one_vert);

  // d = (a, a) on the diagonal
  PlaneLine a_vert = join_points(a, e2pt).value();
  FieldElementK d = meet_lines(diag, a_vert);

  // direction of b v c, then the parallel through d
  PlaneLine bc = join_points(b, c).value();
  FieldElementK inf = meet_lines(bc, infty_);
  PlaneLine prod_line = join_points(d, inf).value();
  return SerendipityOutcome<FieldElementK>::ok(meet_lines(prod_line, axis_));
}

namespace {

// payload identity of a value: distinct keys may denote equal parabolic
// values (different records of one unipotent subgroup), which only costs
// cache sharing, never correctness
std::vector<uint64_t> value_key(const FieldElementK &v) {
  std::vector<uint64_t> k;
  if (v.is_regular()) {
    k.push_back(0);
    k.insert(k.end(), v.regular->w.begin(), v.regular->w.end());
  } else {
    k.push_back(1);
    const Element &u = v.parabolic->gens.front();
    k.insert(k.end(), u.w.begin(), u.w.end());
    k.push_back(~0ull);
    k.insert(k.end(), v.parabolic->flip.w.begin(), v.parabolic->flip.w.end());
  }
  return k;
}

}  // namespace

const FieldElementK *FieldK::memo_lookup(uint64_t tag, const FieldElementK &a,
                                          const FieldElementK &b, std::vector<uint64_t> *key) {
  if (!eng_.box().ops().canonical_encoding())
    return nullptr;
  // both operations are commutative: normalize the operand order
  std::vector<uint64_t> ka = value_key(a);
  std::vector<uint64_t> kb = value_key(b);
  if (kb < ka)
    std::swap(ka, kb);
  key->clear();
  key->reserve(ka.size() + kb.size() + 2);
  key->push_back(tag);
  key->insert(key->end(), ka.begin(), ka.end());
  key->push_back(~0ull);
  key->insert(key->end(), kb.begin(), kb.end());
  auto it = op_memo_.find(*key);
  return it == op_memo_.end() ? nullptr : &it->second;
}

void FieldK::memo_store(std::vector<uint64_t> key, const FieldElementK &v) {
  if (key.empty())
    return;
  if (op_memo_.size() > (1u << 16))
    op_memo_.clear();
  op_memo_.emplace(std::move(key), v);
}

SerendipityOutcome<FieldElementK> FieldK::add(const FieldElementK &a, const FieldElementK &b) {
  ++add_count_;
  // a + (-a) = 0 without any construction
  if (a.is_regular() && b.is_regular() &&
      eng_.box().eq(*b.regular, eng_.conj(*a.regular, frame_.e3)))
    return SerendipityOutcome<FieldElementK>::ok(zero());
  std::vector<uint64_t> key;
  if (const FieldElementK *hit = memo_lookup(1, a, b, &key))
    return SerendipityOutcome<FieldElementK>::ok(*hit);
  auto out = add_uncached(a, b);
  if (out.is_ok())
    memo_store(std::move(key), out.value());
  return out;
}

SerendipityOutcome<FieldElementK> FieldK::mul(const FieldElementK &a, const FieldElementK &b) {
  ++mul_count_;
  if (!neg_one_set_) {
    neg_one_ = eng_.conj(frame_.d2, frame_.e3);  // -1 as an axis involution
    neg_one_set_ = true;
  }
  if (a.is_regular() && eng_.box().eq(*a.regular, neg_one_))
    return SerendipityOutcome<FieldElementK>::ok(neg(b));
  if (b.is_regular() && eng_.box().eq(*b.regular, neg_one_))
    return SerendipityOutcome<FieldElementK>::ok(neg(a));
  std::vector<uint64_t> key;
  if (const FieldElementK *hit = memo_lookup(2, a, b, &key))
    return SerendipityOutcome<FieldElementK>::ok(*hit);
  auto out = mul_uncached(a, b);
  if (out.is_ok())
    memo_store(std::move(key), out.value());
  return out;
}

SerendipityOutcome<FieldElementK> FieldK::pow(const FieldElementK &a, const BigUint &e) {
  FieldElementK r = one();
  if (e.is_zero())
    return SerendipityOutcome<FieldElementK>::ok(r);
  size_t bits = e.bit_length();
  for (size_t i = bits; i-- > 0;) {
    r = mul(r, r).value();
    if (e.bit(i))
      r = mul(r, a).value();
  }
  return SerendipityOutcome<FieldElementK>::ok(r);
}

std::optional<FieldElementK> FieldK::sqrt(const FieldElementK &a, const BigUint &q) {
  if (is_zero(a))
    return zero();
  if (q.mod_u64(4) == 3) {
    FieldElementK r = pow(a, (q + BigUint(1)).shifted_right(2)).value();
    if (eq(mul(r, r).value(), a))
      return r;
    return std::nullopt;
  }
  // q = 1 mod 4: Tonelli-Shanks over K multiplication
  BigUint qm1 = q - BigUint(1);
  BigUint half = qm1.shifted_right(1);
  if (!eq(pow(a, half).value(), one()))
    return std::nullopt;
  size_t s = qm1.two_adic_valuation();
  BigUint t = qm1.shifted_right(s);
  // non-residue by sampling the axis: residues alone would not do, the
  // whole prime subfield consists of squares once the extension degree is
  // even
  FieldElementK z = one();
  bool found = false;
  for (unsigned tries = 0; tries < 192 && !found; ++tries) {
    // alternate axis samples with small residues: in tiny fields the only
    // non-residues can be the parabolic values (q = 5: {2, 3})
    z = (tries & 1) ? residue_image(BigUint(2 + tries / 2)).value() : random_element();
    if (is_zero(z))
      continue;
    if (!eq(pow(z, half).value(), one()))
      found = true;
  }
  if (!found)
    return std::nullopt;
  FieldElementK c = pow(z, t).value();
  FieldElementK r = pow(a, (t + BigUint(1)).shifted_right(1)).value();
  FieldElementK d = pow(a, t).value();
  size_t m = s;
  while (!eq(d, one())) {
    size_t i = 0;
    FieldElementK probe = d;
    while (!eq(probe, one())) {
      probe = mul(probe, probe).value();
      if (++i > m)
        return std::nullopt;
    }
    FieldElementK b = c;
    for (size_t j = 0; j + i + 1 < m; ++j)
      b = mul(b, b).value();
    r = mul(r, b).value();
    c = mul(b, b).value();
    d = mul(d, c).value();
    m = i;
  }
  if (!eq(mul(r, r).value(), a))
    return std::nullopt;
  return r;
}

SerendipityOutcome<FieldElementK> FieldK::residue_image(const BigUint &r) {
  FieldElementK acc = zero();
  if (r.is_zero())
    return SerendipityOutcome<FieldElementK>::ok(acc);
  size_t bits = r.bit_length();
  for (size_t i = bits; i-- > 0;) {
    acc = add(acc, acc).value();
    if (r.bit(i))
      acc = add(acc, one()).value();
  }
  return SerendipityOutcome<FieldElementK>::ok(acc);
}

FieldElementK FieldK::random_element() {
  for (;;) {
    Element pt = plane_.sample_point(axis_);
    if (eng_.box().eq(pt, frame_.e1))
      continue;  // the infinity point is not a field element
    return FieldElementK::from_regular(pt);
  }
}

bool FieldK::on_axis(const FieldElementK &a) {
  if (a.is_regular())
    return eng_.box().eq(*a.regular, frame_.e3) || plane_.on_line(axis_, *a.regular);
  return plane_.on_line(*a.parabolic, frame_.e2);
}

std::pair<FieldElementK, FieldElementK> FieldK::coordinates(const Element &x) {
  BlackBox &box = eng_.box();
  if (!eng_.is_involution(x))
    throw std::invalid_argument("coordinates: input must be an involution");
  if (box.eq(x, frame_.e3))
    return {zero(), zero()};
  if (eng_.commute(x, frame_.e3))
    throw std::invalid_argument("coordinates: point lies on the line at infinity");

  auto project = [&](const Element &center) -> FieldElementK {
    if (box.eq(x, center))
      throw std::invalid_argument("coordinates: degenerate projection");
    if (eng_.commute(x, center))
      return FieldElementK::from_regular(x);  // already on the target axis
    auto inner = eng_.j_of(x, center);
    if (!inner.is_ok()) {
      notify(inner.event());
      return FieldElementK::from_parabolic(plane_.parabolic_join(inner.event()));
    }
    auto outer = eng_.j_of(inner.value(), center);
    if (!outer.is_ok()) {
      notify(outer.event());
      return FieldElementK::from_parabolic(plane_.parabolic_join(outer.event()));
    }
    return FieldElementK::from_regular(outer.value());
  };

  FieldElementK x1 = project(frame_.e2);
  FieldElementK x2 = project(frame_.e1);
  return {x1, transport_to_axis(x2)};
}

FieldElementK FieldK::point_from_coordinates(const FieldElementK &a, const FieldElementK &b) {
  FieldElementK e1pt = FieldElementK::from_regular(frame_.e1);
  FieldElementK e2pt = FieldElementK::from_regular(frame_.e2);
  if (is_zero(a) && is_zero(b))
    return zero();
  FieldElementK b_on_x2 = transport_from_axis(b);
  PlaneLine la = join_points(a, e2pt).value();
  PlaneLine lb = join_points(b_on_x2, e1pt).value();
  return meet_lines(la, lb);
}

FieldElementK FieldK::point_from_homogeneous(const FieldElementK &a, const FieldElementK &b,
                                             const FieldElementK &c) {
  if (!is_zero(c)) {
    FieldElementK cinv = inv(c);
    return point_from_coordinates(mul(a, cinv).value(), mul(b, cinv).value());
  }
  if (is_zero(a) && is_zero(b))
    throw std::invalid_argument("point_from_homogeneous: zero vector");
  if (is_zero(a))
    return FieldElementK::from_regular(frame_.e2);
  if (is_zero(b))
    return FieldElementK::from_regular(frame_.e1);
  // direction of the line from the origin through (a, b, 1)
  FieldElementK affine = point_from_coordinates(a, b);
  PlaneLine through_origin = join_points(zero(), affine).value();
  return meet_lines(through_origin, infty_);
}

}  // namespace bbg
