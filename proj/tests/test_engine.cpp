#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unordered_map>

#include "bbg/engine.hpp"
#include "support/census.hpp"
#include "support/cyclic_box.hpp"

using namespace bbg;
using namespace bbg::testing;

namespace {

const MatrixGroupOps &mops(const BlackBox &box) {
  return static_cast<const MatrixGroupOps &>(box.ops());
}

Element sample_of_order(BlackBox &box, uint64_t target) {
  for (;;) {
    Element x = box.random();
    if (order_by_iteration(box, x, 4096) == target)
      return x;
  }
}

// number of group elements commuting with t, by exhaustive scan
uint64_t centralizer_order(const BlackBox &box, const std::vector<Element> &all,
                           const Element &t) {
  uint64_t n = 0;
  for (const Element &x : all)
    if (box.eq(box.mul(x, t), box.mul(t, x)))
      ++n;
  return n;
}

}  // namespace

TEST_CASE("find_involution") {
  SUBCASE("PSL2(5)") {
    Engine eng(make_psl2_box(ExplicitField::prime(5), 3));
    Element t = eng.find_involution();
    CHECK(eng.is_involution(t));
  }
  SUBCASE("C2 box yields its involution") {
    Engine eng(make_cyclic_box(2, 2, 3));
    Element t = eng.find_involution();
    CHECK(eng.is_involution(t));
  }
  SUBCASE("both PGL2(13) involution classes appear over 200 runs") {
    BlackBox box = make_pgl2_box(ExplicitField::prime(13), 5);
    auto all = exhaustive_closure(box, box.generators(), 2200);
    REQUIRE(all.size() == 2184);
    bool saw_plus = false, saw_minus = false;  // |C| = 24 vs 28
    for (int run = 0; run < 200 && !(saw_plus && saw_minus); ++run) {
      Engine eng(box, {}, static_cast<uint64_t>(run));
      Element t = eng.find_involution();
      uint64_t c = centralizer_order(box, all, t);
      if (c == 24)
        saw_plus = true;
      else if (c == 28)
        saw_minus = true;
      else
        FAIL("unexpected centralizer order ", c);
    }
    CHECK(saw_plus);
    CHECK(saw_minus);
  }
}

TEST_CASE("centralizer of an involution") {
  BlackBox box = make_pgl2_box(ExplicitField::prime(13), 11);
  auto all = exhaustive_closure(box, box.generators(), 2200);
  Engine eng(box, {}, 1);

  // diag(1,-1) centralizes the diagonal and antidiagonal classes: 2(q-1) = 24
  const ExplicitField &F = mops(box).field();
  Element t = mops(box).element_from_matrix({F.one(), F.zero(), F.zero(), F.neg(F.one())});
  REQUIRE(eng.is_involution(t));
  REQUIRE(centralizer_order(box, all, t) == 24);

  CentralizerBox cb = eng.centralizer_of_involution(t);
  auto closure = exhaustive_closure(box, cb.box.generators(), 40);
  CHECK(closure.size() == 24);
  for (int i = 0; i < 50; ++i) {
    Element c = cb.box.random();
    CHECK(box.eq(box.mul(c, t), box.mul(t, c)));
  }

  // structure: torus generators inverted by w, s in the torus closure
  const InvolutionPoint &pt = cb.structure;
  CHECK(eng.is_involution(pt.w));
  for (const Element &g : pt.torus_gens)
    CHECK(box.eq(eng.conj(g, pt.w), box.inv(g)));
  auto torus = exhaustive_closure(box, pt.torus_gens, 40);
  CHECK(torus.size() == 12);

  // the other class has |C| = 2(q+1) = 28 and a torus of order 14
  Element u = t;
  for (int i = 0; i < 1000; ++i) {
    u = eng.find_involution();
    if (centralizer_order(box, all, u) == 28)
      break;
  }
  REQUIRE(centralizer_order(box, all, u) == 28);
  CentralizerBox cb2 = eng.centralizer_of_involution(u);
  CHECK(exhaustive_closure(box, cb2.box.generators(), 40).size() == 28);
  CHECK(exhaustive_closure(box, cb2.structure.torus_gens, 40).size() == 14);

  SUBCASE("central involution of a C2 box centralizes everything") {
    BlackBox c2 = make_cyclic_box(2, 2, 9);
    Engine e2(c2);
    Element u = e2.find_involution();
    CentralizerBox whole = e2.centralizer_of_involution(u);
    auto cl = exhaustive_closure(c2, whole.box.generators(), 4);
    CHECK(cl.size() == 2);
  }
}

TEST_CASE("zeta1 outputs are uniform over the centralizer") {
  BlackBox box = make_pgl2_box(ExplicitField::prime(13), 17);
  const ExplicitField &F = mops(box).field();
  Element t = mops(box).element_from_matrix({F.one(), F.zero(), F.zero(), F.neg(F.one())});
  Engine eng(box, {}, 2);
  std::unordered_map<size_t, uint64_t> counts;
  ElementHash hasher;
  uint64_t kept = 0;
  const uint64_t want = 20000;
  while (kept < want) {
    auto c = eng.zeta1_sample(t);
    if (!c)
      continue;
    ++counts[hasher(*c)];
    ++kept;
  }
  REQUIRE(counts.size() == 24);
  std::vector<uint64_t> v;
  for (auto &kv : counts)
    v.push_back(kv.second);
  CHECK(chi2_statistic(v, static_cast<double>(want) / 24.0) < chi2_critical(23.0, 3.0902));
}

TEST_CASE("protos, amalgams and augmentation") {
  SUBCASE("diagonal proto of a cyclic group augments to C3 x C2") {
    BlackBox box = make_psl2_box(ExplicitField::prime(13), 23);
    Element g = sample_of_order(box, 3);
    Engine eng(box, {}, 3);
    ProtoInvolution proto = eng.proto_from_pairs({{g, g}});
    auto [a, b] = proto.sample();
    CHECK(box.eq(a, b));  // diagonal graph
    BlackBox aug = eng.augment_by_proto(proto);
    auto closure = exhaustive_closure(aug, aug.generators(), 12);
    CHECK(closure.size() == 6);
    Element delta = eng.augmented_flip(aug);
    CHECK(aug.eq(aug.mul(delta, delta), aug.identity()));
  }

  SUBCASE("identity proto on PSL2(13) augments to a group of twice the size") {
    BlackBox box = make_psl2_box(ExplicitField::prime(13), 29);
    Engine eng(box, {}, 4);
    std::vector<std::pair<Element, Element>> pairs;
    for (const Element &g : box.generators())
      pairs.emplace_back(g, g);
    ProtoInvolution proto = eng.proto_from_pairs(pairs);
    BlackBox aug = eng.augment_by_proto(proto);
    auto closure = exhaustive_closure(aug, aug.generators(), 2200);
    CHECK(closure.size() == 2 * 1092);
  }

  SUBCASE("local actions build the expected pairs") {
    BlackBox box = make_psl2_box(ExplicitField::prime(13), 31);
    Element g = sample_of_order(box, 7);
    Engine eng(box, {}, 5);
    ProtoInvolution proto = eng.proto_from_local(
        {LocalAction{{g}, LocalAction::Kind::Invert}});
    for (int i = 0; i < 20; ++i) {
      auto [a, b] = proto.sample();
      CHECK(box.eq(b, box.inv(a)));
    }
  }
}

TEST_CASE("reify recovers a conjugation involution") {
  BlackBox box = make_pgl2_box(ExplicitField::prime(13), 37);
  Engine eng(box, {}, 6);
  Element t = eng.find_involution();
  ProtoInvolution proto = eng.conjugation_proto(t);
  Element r = eng.reify(proto);
  CHECK(box.eq(r, t));

  // idempotence: reifying the conjugation graph of the reified involution
  ProtoInvolution proto2 = eng.conjugation_proto(r);
  CHECK(box.eq(eng.reify(proto2), r));
}

TEST_CASE("reify and the cyclic path agree on commuting pairs") {
  // for commuting s != t the common involution is in <st>; reifying the
  // amalgamated description (inverts the torus of s, fixes st) must agree
  BlackBox box = make_pgl2_box(ExplicitField::prime(13), 39);
  Engine eng(box, {}, 20);
  int done = 0;
  while (done < 5) {
    Element s = eng.find_involution();
    InvolutionPoint pt = eng.point_of(s);
    Element t = pt.w;
    if (box.eq(s, t) || !eng.commute(s, t))
      continue;
    Element z = box.mul(s, t);
    Element via_cyclic = extract_involution(box, z);
    // describe j by its action: it inverts both tori and fixes z (one torus
    // alone is ambiguous here, t also inverts T_s)
    InvolutionPoint pt_t = eng.point_of(t);
    std::vector<std::pair<Element, Element>> pairs;
    for (const Element &g : pt.torus_gens)
      pairs.emplace_back(g, box.inv(g));
    for (const Element &g : pt_t.torus_gens)
      pairs.emplace_back(g, box.inv(g));
    pairs.emplace_back(z, z);
    ProtoInvolution proto = eng.proto_from_pairs(pairs);
    auto accept = [&](const Element &cand) {
      for (const Element &g : pt.torus_gens)
        if (!box.eq(eng.conj(g, cand), box.inv(g)))
          return false;
      for (const Element &g : pt_t.torus_gens)
        if (!box.eq(eng.conj(g, cand), box.inv(g)))
          return false;
      return eng.commute(cand, z);
    };
    Element via_reify = eng.reify(proto, accept);
    CHECK(box.eq(via_cyclic, via_reify));
    ++done;
  }
}

TEST_CASE("j_of") {
  BlackBox box = make_pgl2_box(ExplicitField::prime(13), 41);
  Engine eng(box, {}, 7);

  SUBCASE("commuting involutions: the third one in the four-group") {
    Element s = eng.find_involution();
    InvolutionPoint pt = eng.point_of(s);
    Element t = pt.w;  // commutes with s
    REQUIRE(eng.commute(s, t));
    REQUIRE_FALSE(box.eq(s, t));
    auto out = eng.j_of(s, t);
    REQUIRE(out.is_ok());
    CHECK(box.eq(out.value(), box.mul(s, t)));
  }

  SUBCASE("random pairs: j commutes with both, and is symmetric") {
    for (int i = 0; i < 40; ++i) {
      Engine e(box, {}, 100 + i);
      Element s = e.find_involution();
      Element t = e.find_involution();
      if (box.eq(s, t))
        continue;
      auto out = e.j_of(s, t);
      if (order_by_iteration(box, box.mul(s, t)) == 13) {
        // unipotent product: no common commuting involution exists
        REQUIRE_FALSE(out.is_ok());
        CHECK((box.eq(out.event().u, box.mul(s, t)) || box.eq(out.event().u, box.mul(t, s))));
        continue;
      }
      REQUIRE(out.is_ok());
      const Element &j = out.value();
      CHECK(e.is_involution(j));
      CHECK(e.commute(j, s));
      CHECK(e.commute(j, t));
      auto sym = e.j_of(t, s);
      REQUIRE(sym.is_ok());
      CHECK(box.eq(sym.value(), j));
    }
  }

  SUBCASE("unipotent product is reported, not mistaken for j") {
    const ExplicitField &F = mops(box).field();
    // s = diag(1,-1) inverts u = [[1,1],[0,1]]; t = s*u is an involution and
    // st = u has order 13
    Element s = mops(box).element_from_matrix({F.one(), F.zero(), F.zero(), F.neg(F.one())});
    Element u = mops(box).element_from_matrix({F.one(), F.one(), F.zero(), F.one()});
    Element t = box.mul(s, u);
    REQUIRE(eng.is_involution(t));
    REQUIRE(order_by_iteration(box, box.mul(s, t)) == 13);
    auto out = eng.j_of(s, t);
    REQUIRE_FALSE(out.is_ok());
    // the witness product is the unipotent element (argument order may flip)
    CHECK((box.eq(out.event().u, u) || box.eq(out.event().u, box.mul(t, s))));
    CHECK(box.eq(box.mul(out.event().s, out.event().t), out.event().u));
  }
}

TEST_CASE("bisect") {
  BlackBox box5 = make_pgl2_box(ExplicitField::prime(5), 43);
  auto all5 = exhaustive_closure(box5, box5.generators(), 130);
  REQUIRE(all5.size() == 120);

  SUBCASE("exhaustive over conjugate pairs at q = 5") {
    Engine eng(box5, {}, 8);
    std::vector<Element> invs;
    for (const Element &x : all5)
      if (eng.is_involution(x))
        invs.push_back(x);
    REQUIRE(invs.size() == 10 + 15);  // both classes
    unsigned tested = 0;
    for (const Element &i : invs) {
      uint64_t ci = centralizer_order(box5, all5, i);
      for (const Element &j : invs) {
        if (box5.eq(i, j))
          continue;
        if (ci != centralizer_order(box5, all5, j))
          continue;  // different classes are never conjugate
        Element x = eng.bisect(i, j);
        CHECK(eng.is_involution(x));
        CHECK(box5.eq(eng.conj(i, x), j));
        ++tested;
      }
    }
    CHECK(tested == 10 * 9 + 15 * 14);
  }

  SUBCASE("degenerate call returns a commuting involution") {
    Engine eng(box5, {}, 9);
    Element i = eng.find_involution();
    Element x = eng.bisect(i, i);
    CHECK(eng.is_involution(x));
    CHECK(eng.commute(i, x));
    CHECK_FALSE(box5.eq(x, i));
  }

  SUBCASE("200 random conjugate pairs at q = 13") {
    BlackBox box = make_pgl2_box(ExplicitField::prime(13), 47);
    Engine eng(box, {}, 10);
    unsigned done = 0;
    while (done < 200) {
      Element i = eng.find_involution();
      Element g = box.random();
      Element j = eng.conj(i, g);
      if (box.eq(i, j))
        continue;
      Element x = eng.bisect(i, j);
      CHECK(eng.is_involution(x));
      CHECK(box.eq(eng.conj(i, x), j));
      ++done;
    }
  }

  SUBCASE("order-4 product goes through the torus square root") {
    // at q = 7 the PSL2 involution class has order-4 products
    BlackBox box = make_pgl2_box(ExplicitField::prime(7), 53);
    Engine eng(box, {}, 11);
    for (int tries = 0; tries < 5000; ++tries) {
      Element i = eng.find_involution();
      Element j = eng.conj(i, box.random());  // conjugate by construction
      if (box.eq(i, j))
        continue;
      if (order_by_iteration(box, box.mul(i, j), 100) != 4)
        continue;
      Element x = eng.bisect(i, j);
      CHECK(eng.is_involution(x));
      CHECK(box.eq(eng.conj(i, x), j));
      return;
    }
    FAIL("no order-4 involution product found");
  }
}

TEST_CASE("harmonic conjugate pair property at q = 5") {
  // for commuting distinct involutions s, t and any involution r with s^r = t:
  // r = s*h where h^2 = st inside the torus of st
  BlackBox box = make_pgl2_box(ExplicitField::prime(5), 59);
  auto all = exhaustive_closure(box, box.generators(), 130);
  Engine eng(box, {}, 12);
  std::vector<Element> invs;
  for (const Element &x : all)
    if (eng.is_involution(x))
      invs.push_back(x);
  unsigned checked = 0;
  for (const Element &s : invs) {
    for (const Element &t : invs) {
      if (box.eq(s, t) || !eng.commute(s, t))
        continue;
      Element z = box.mul(s, t);
      // roots of z among elements commuting with z (the torus of z and its coset)
      std::vector<Element> roots;
      for (const Element &h : all)
        if (box.eq(box.mul(h, h), z) && box.eq(box.mul(h, z), box.mul(z, h)))
          roots.push_back(h);
      for (const Element &r : invs) {
        if (!box.eq(eng.conj(s, r), t))
          continue;
        bool matches = false;
        for (const Element &h : roots)
          if (box.eq(r, box.mul(s, h)))
            matches = true;
        CHECK(matches);
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("as_two_involutions") {
  BlackBox box = make_pgl2_box(ExplicitField::prime(13), 61);
  Engine eng(box, {}, 13);
  unsigned done = 0;
  while (done < 30) {
    Element x = box.random();
    if (box.eq(x, box.identity()) || eng.is_involution(x))
      continue;
    auto [r, rp] = eng.as_two_involutions(x);
    CHECK(eng.is_involution(r));
    CHECK(eng.is_involution(rp));
    CHECK(box.eq(box.mul(r, rp), x));
    ++done;
  }

  SUBCASE("order-15 torus generator at q = 29") {
    BlackBox b29 = make_pgl2_box(ExplicitField::prime(29), 67);
    Engine eng29(b29, {}, 14);
    Element x = sample_of_order(b29, 15);
    auto [r, rp] = eng29.as_two_involutions(x);
    CHECK(eng29.is_involution(r));
    CHECK(eng29.is_involution(rp));
    CHECK(b29.eq(b29.mul(r, rp), x));
  }
}

TEST_CASE("right type detection at q = 13 and q = 7") {
  // q = 13 = 1 mod 4: +type (|C| = 2(q-1) = 24, torus 12) is right type;
  // -type (|C| = 28, torus 14) is not
  BlackBox box = make_pgl2_box(ExplicitField::prime(13), 71);
  auto all = exhaustive_closure(box, box.generators(), 2200);
  Engine eng(box, {}, 15);
  const ExplicitField &F = mops(box).field();
  Element plus = mops(box).element_from_matrix({F.one(), F.zero(), F.zero(), F.neg(F.one())});
  REQUIRE(centralizer_order(box, all, plus) == 24);
  Element s4;
  CHECK(eng.is_right_type(plus, &s4));
  CHECK(order_by_iteration(box, s4) == 4);
  CHECK(box.eq(box.mul(s4, s4), plus));

  bool found_minus = false;
  for (int i = 0; i < 200 && !found_minus; ++i) {
    Element t = eng.find_involution();
    if (centralizer_order(box, all, t) == 28) {
      found_minus = true;
      CHECK_FALSE(eng.is_right_type(t));
    }
  }
  CHECK(found_minus);

  // q = 7 = 3 mod 4: the -type involutions (torus q+1 = 8) are right type
  BlackBox box7 = make_pgl2_box(ExplicitField::prime(7), 73);
  auto all7 = exhaustive_closure(box7, box7.generators(), 340);
  Engine eng7(box7, {}, 16);
  for (int i = 0; i < 10; ++i) {
    Element t = eng7.find_involution();
    uint64_t c = centralizer_order(box7, all7, t);
    Element s4;
    bool right = eng7.is_right_type(t, &s4);
    if (c == 16)  // 2(q+1)
      CHECK(right);
    else
      CHECK_FALSE(right);
  }
}

TEST_CASE("even characteristic involution finder") {
  for (unsigned n : {2u, 3u}) {
    ExplicitField F = ExplicitField::extension(2, n);
    BlackBox box = make_psl2_box(F, 100 + n);
    Engine eng(box, {}, n);
    Element t = eng.find_involution_even_char();
    CHECK(eng.is_involution(t));
  }
}

TEST_CASE("scrambled payloads do not break the engine") {
  BlackBox box = make_pgl2_box(ExplicitField::prime(7), 79, PayloadEncoding::Scrambled);
  Engine eng(box, {}, 17);
  Element s = eng.find_involution();
  Element t = eng.find_involution();
  if (!box.eq(s, t)) {
    auto out = eng.j_of(s, t);
    REQUIRE(out.is_ok());
    CHECK(eng.commute(out.value(), s));
    CHECK(eng.commute(out.value(), t));
  }
  Element x = eng.bisect(s, eng.conj(s, box.random()));
  CHECK(eng.is_involution(x));
}
