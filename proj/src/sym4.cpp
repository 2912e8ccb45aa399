#include "bbg/sym4.hpp"

#include <unordered_set>

#include <nlohmann/json.hpp>

namespace bbg {

namespace {

std::vector<Element> closure_capped(const BlackBox &box, const std::vector<Element> &gens,
                                    size_t cap) {
  std::unordered_set<std::vector<uint64_t>, WordsHash> seen{box.identity().w};
  std::vector<Element> all{box.identity()};
  for (size_t i = 0; i < all.size(); ++i) {
    for (const Element &g : gens) {
      Element y = box.mul(all[i], g);
      if (seen.insert(y.w).second) {
        all.push_back(y);
        if (all.size() > cap)
          return all;
      }
    }
  }
  return all;
}

// closure that works without canonical payloads (eq-based dedup); tiny sets only
std::vector<Element> closure_eq(const BlackBox &box, const std::vector<Element> &gens,
                                size_t cap) {
  std::vector<Element> all{box.identity()};
  auto known = [&](const Element &x) {
    for (const Element &y : all)
      if (box.eq(x, y))
        return true;
    return false;
  };
  for (size_t i = 0; i < all.size(); ++i) {
    for (const Element &g : gens) {
      Element y = box.mul(all[i], g);
      if (!known(y)) {
        all.push_back(y);
        if (all.size() > cap)
          return all;
      }
    }
  }
  return all;
}

}  // namespace

std::vector<Element> sym4_closure(Engine &eng, const SpinorFrame &frame) {
  BlackBox &box = eng.box();
  std::vector<Element> gens{frame.theta, frame.s4};
  std::vector<Element> h = box.ops().canonical_encoding() ? closure_capped(box, gens, 25)
                                                          : closure_eq(box, gens, 25);
  if (h.size() != 24)
    throw RetryExhausted("sym4_closure: generated subgroup is not Sym4");
  return h;
}

void validate_frame(Engine &eng, const SpinorFrame &f) {
  BlackBox &box = eng.box();
  auto check = [&](bool ok, const char *what) {
    if (!ok)
      throw std::invalid_argument(std::string("spinor frame: ") + what);
  };
  check(eng.is_involution(f.e1) && eng.is_involution(f.e2) && eng.is_involution(f.e3),
        "e_i must be involutions");
  check(eng.commute(f.e1, f.e2) && eng.commute(f.e2, f.e3) && eng.commute(f.e1, f.e3),
        "e_i must commute");
  check(box.eq(box.mul(f.e1, f.e2), f.e3), "e1 e2 = e3");
  Element t3 = box.mul(box.mul(f.theta, f.theta), f.theta);
  check(box.eq(t3, box.identity()) && !box.eq(f.theta, box.identity()), "theta has order 3");
  check(box.eq(eng.conj(f.e1, f.theta), f.e2), "e1^theta = e2");
  check(box.eq(eng.conj(f.e2, f.theta), f.e3), "e2^theta = e3");
  check(eng.is_involution(f.d1) && eng.commute(f.d1, f.e1), "d1 commutes with e1");
  check(box.eq(eng.conj(f.e2, f.d1), f.e3), "e2^d1 = e3");
  check(box.eq(f.d2, eng.conj(f.d1, f.theta)), "d2 = d1^theta");
  check(box.eq(f.d3, eng.conj(f.d2, f.theta)), "d3 = d2^theta");
  check(box.eq(eng.conj(f.d2, f.d3), f.d1), "d2^d3 = d1");
  check(box.eq(eng.conj(f.e1, f.d3), f.e2), "e1^d3 = e2");
  Element s2 = box.mul(f.s4, f.s4);
  check(box.eq(s2, f.e1) && !eng.is_involution(f.s4), "s4 has order 4 over e1");
}

SpinorFrame build_sym4(Engine &eng) {
  BlackBox &box = eng.box();
  unsigned outer = 8 + eng.config().confidence / 4;
  for (unsigned attempt = 0; attempt < outer; ++attempt) {
    // right-type involution with an order-4 companion
    Element e1, s4;
    bool have_e1 = false;
    for (unsigned i = 0; i < 32 && !have_e1; ++i) {
      Element cand = eng.find_involution();
      if (eng.is_right_type(cand, &s4)) {
        e1 = cand;
        have_e1 = true;
      }
    }
    if (!have_e1)
      continue;

    // right-type j on the polar of e1
    InvolutionPoint pt = eng.point_of(e1);
    BlackBox torus = make_subgroup_box(box, pt.torus_gens, eng.fresh_salt());
    Element j;
    bool have_j = false;
    for (unsigned i = 0; i < 64 && !have_j; ++i) {
      Element cand = box.mul(torus.random(), pt.w);
      if (!eng.is_involution(cand) || box.eq(cand, e1))
        continue;
      if (eng.is_right_type(cand)) {
        j = cand;
        have_j = true;
      }
    }
    if (!have_j)
      continue;
    Element k = box.mul(e1, j);

    // order-3 element permuting e1, j, k; odd order includes order 1 (the
    // square root is then trivial)
    Element theta;
    bool have_theta = false;
    for (unsigned i = 0; i < 64 && !have_theta; ++i) {
      Element g = box.random();
      Element h1 = box.mul(e1, eng.conj(j, g));
      if (has_even_order(box, h1))
        continue;
      Element n1 = odd_sqrt(box, h1);
      Element gn1 = box.mul(g, box.inv(n1));
      Element sprime = eng.conj(k, gn1);
      Element h2 = box.mul(j, sprime);
      if (has_even_order(box, h2))
        continue;
      Element n2 = odd_sqrt(box, h2);
      Element x = box.mul(gn1, box.inv(n2));
      // verify the 3-cycle on {e1, j, k}
      Element x3 = box.mul(box.mul(x, x), x);
      if (!box.eq(x3, box.identity()) || box.eq(x, box.identity()))
        continue;
      Element image = eng.conj(e1, x);
      if (!box.eq(image, j) && !box.eq(image, k))
        continue;
      theta = x;
      have_theta = true;
    }
    if (!have_theta)
      continue;

    SpinorFrame f;
    f.e1 = e1;
    f.s4 = s4;
    f.theta = theta;
    f.e2 = eng.conj(e1, theta);
    f.e3 = eng.conj(f.e2, theta);

    // the unique involution of N_H(<theta>) commuting with e1, found by
    // exhausting the 24 elements
    std::vector<Element> h_elems;
    try {
      h_elems = sym4_closure(eng, f);
    } catch (const RetryExhausted &) {
      continue;
    }
    Element theta2 = box.mul(theta, theta);
    bool have_d1 = false;
    for (const Element &d : h_elems) {
      if (!eng.is_involution(d))
        continue;
      Element td = eng.conj(theta, d);
      if (!box.eq(td, theta) && !box.eq(td, theta2))
        continue;
      if (!eng.commute(d, e1))
        continue;
      if (box.eq(d, f.e1) || box.eq(d, f.e2) || box.eq(d, f.e3))
        continue;
      f.d1 = d;
      have_d1 = true;
      break;
    }
    if (!have_d1)
      continue;
    f.d2 = eng.conj(f.d1, theta);
    f.d3 = eng.conj(f.d2, theta);

    try {
      validate_frame(eng, f);
    } catch (const std::invalid_argument &) {
      continue;
    }
    return f;
  }
  throw RetryExhausted("build_sym4: retry budget exhausted");
}

std::string frame_to_json(const SpinorFrame &f) {
  nlohmann::json j;
  auto put = [&](const char *name, const Element &e) { j[name] = e.w; };
  put("e1", f.e1);
  put("e2", f.e2);
  put("e3", f.e3);
  put("theta", f.theta);
  put("d1", f.d1);
  put("d2", f.d2);
  put("d3", f.d3);
  put("s4", f.s4);
  return j.dump();
}

SpinorFrame frame_from_json(Engine &eng, const std::string &text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SpinorFrame f;
  auto get = [&](const char *name) {
    Element e;
    e.w = j.at(name).get<std::vector<uint64_t>>();
    e.box = eng.box().ops().box_id();
    return e;
  };
  f.e1 = get("e1");
  f.e2 = get("e2");
  f.e3 = get("e3");
  f.theta = get("theta");
  f.d1 = get("d1");
  f.d2 = get("d2");
  f.d3 = get("d3");
  f.s4 = get("s4");
  validate_frame(eng, f);
  return f;
}

}  // namespace bbg
