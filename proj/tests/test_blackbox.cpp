#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <unordered_map>

#include "bbg/blackbox.hpp"
#include "bbg/matrix_oracle.hpp"
#include "support/census.hpp"
#include "support/cyclic_box.hpp"

using namespace bbg;
using namespace bbg::testing;

TEST_CASE("power basics") {
  BlackBox box = make_cyclic_box(12, 12, 1);
  auto *ops = static_cast<const CyclicOps *>(box.ops_ptr().get());
  Element g = ops->residue(1);
  CHECK(box.eq(power(box, g, BigUint(0)), box.identity()));
  CHECK(box.eq(power(box, g, BigUint(5)), ops->residue(5)));
  CHECK(box.eq(power(box, g, BigUint(12)), box.identity()));
  // composition: (x^a)^b = x^(ab)
  CHECK(box.eq(power(box, power(box, g, BigUint(5)), BigUint(7)), power(box, g, BigUint(35))));
}

TEST_CASE("order-type helpers on cyclic boxes") {
  BlackBox box = make_cyclic_box(12, 12, 1);
  auto *ops = static_cast<const CyclicOps *>(box.ops_ptr().get());
  CHECK_FALSE(has_even_order(box, box.identity()));
  CHECK(has_even_order(box, ops->residue(6)));   // the involution
  CHECK(has_even_order(box, ops->residue(1)));   // order 12
  CHECK_FALSE(has_even_order(box, ops->residue(4)));  // order 3

  CHECK(box.eq(extract_involution(box, ops->residue(6)), ops->residue(6)));
  CHECK(box.eq(extract_involution(box, ops->residue(3)), ops->residue(6)));  // order 4 -> square
  CHECK(box.eq(extract_involution(box, ops->residue(2)), ops->residue(6)));  // order 6 -> cube
  CHECK_THROWS(extract_involution(box, ops->residue(4)));

  Element cube = ops->residue(4);  // order 3
  Element r = odd_sqrt(box, cube);
  CHECK(box.eq(box.mul(r, r), cube));
  CHECK(box.eq(odd_sqrt(box, box.identity()), box.identity()));
  CHECK(two_height(box, ops->residue(1)) == 2);
  CHECK(two_height(box, ops->residue(4)) == 0);
}

TEST_CASE("cyclic square roots against brute force") {
  // order 12 with exact exponent, and a non-exact exponent multiple
  for (uint64_t E : {12ull, 24ull}) {
    BlackBox box = make_cyclic_box(12, E, 3);
    auto *ops = static_cast<const CyclicOps *>(box.ops_ptr().get());
    Element g = ops->residue(1);
    Element z = ops->residue(2);  // g^2, a square
    auto t = cyclic_sqrt(box, g, z);
    REQUIRE(t.has_value());
    CHECK(box.eq(box.mul(*t, *t), z));
  }

  // order 2^5 * 7: every square has a root, every non-square is rejected
  uint64_t n = 32 * 7;
  BlackBox box = make_cyclic_box(n, n, 9);
  auto *ops = static_cast<const CyclicOps *>(box.ops_ptr().get());
  Element g = ops->residue(1);
  std::set<uint64_t> squares;
  for (uint64_t r = 0; r < n; ++r)
    squares.insert((2 * r) % n);
  for (uint64_t r = 0; r < n; ++r) {
    Element z = ops->residue(r);
    auto t = cyclic_sqrt(box, g, z);
    if (squares.count(r)) {
      REQUIRE(t.has_value());
      CHECK(box.eq(box.mul(*t, *t), z));
    } else {
      CHECK_FALSE(t.has_value());
    }
  }

  // sampled variant over the same group
  BlackBox sampled = make_cyclic_box(n, n, 11);
  for (uint64_t r : {0ull, 2ull, 4ull, 14ull, 9ull, 1ull, 223ull}) {
    Element z = ops->residue(r);
    auto t = cyclic_sqrt_sampled(sampled, z);
    if (squares.count(r)) {
      REQUIRE(t.has_value());
      CHECK(sampled.eq(sampled.mul(*t, *t), z));
    } else {
      CHECK_FALSE(t.has_value());
    }
  }
}

TEST_CASE("subgroup boxes") {
  ExplicitField F5 = ExplicitField::prime(5);
  BlackBox psl2 = make_psl2_box(F5, 17);

  SUBCASE("identity generators sample only the identity") {
    BlackBox triv = make_subgroup_box(psl2, {psl2.identity()});
    for (int i = 0; i < 20; ++i)
      CHECK(triv.eq(triv.random(), triv.identity()));
  }

  SUBCASE("standard generators cover the whole group") {
    ElementSet seen;
    BlackBox box = psl2.fork(23);
    for (int i = 0; i < 10000 && seen.size() < 60; ++i)
      seen.insert(box.random());
    CHECK(seen.size() == 60);
  }

  SUBCASE("cyclic closure stays inside the subgroup") {
    ExplicitField F13 = ExplicitField::prime(13);
    BlackBox box = make_psl2_box(F13, 31);
    // an order-6 element: sample until found
    Element g = box.identity();
    for (;;) {
      g = box.random();
      if (order_by_iteration(box, g, 100) == 6)
        break;
    }
    BlackBox cyc = make_subgroup_box(box, {g});
    ElementSet powers;
    Element cur = box.identity();
    for (int i = 0; i < 6; ++i) {
      powers.insert(cur);
      cur = box.mul(cur, g);
    }
    for (int i = 0; i < 100; ++i)
      CHECK(powers.count(cyc.random()) == 1);
  }
}

TEST_CASE("exponent contract on oracles") {
  ExplicitField F13 = ExplicitField::prime(13);
  BlackBox box = make_psl2_box(F13, 5);
  for (int i = 0; i < 100; ++i) {
    Element x = box.random();
    CHECK(box.eq(power(box, x, box.exponent().E), box.identity()));
  }
  CHECK(box.exponent().E == BigUint(13 * 168));
  CHECK(box.exponent().n.mod_u64(2) == 1);
  CHECK(box.exponent().E == box.exponent().n.shifted_left(box.exponent().m));
}

TEST_CASE("PSL2(7): unipotent element to the 7th power is trivial") {
  ExplicitField F7 = ExplicitField::prime(7);
  BlackBox box = make_psl2_box(F7, 2);
  auto *mops = static_cast<const MatrixGroupOps *>(box.ops_ptr().get());
  Element u = mops->element_from_matrix(
      {F7.one(), F7.one(), F7.zero(), F7.one()});
  CHECK(box.eq(power(box, u, BigUint(7)), box.identity()));
  CHECK_FALSE(box.eq(power(box, u, BigUint(6)), box.identity()));
  CHECK_FALSE(has_even_order(box, u));
}

TEST_CASE("fixed seed reproduces the sample stream") {
  ExplicitField F13 = ExplicitField::prime(13);
  BlackBox a = make_psl2_box(F13, 99);
  BlackBox b = make_psl2_box(F13, 99);
  for (int i = 0; i < 50; ++i)
    CHECK(a.random().same_payload(b.random()));
  BlackBox c = a.fork(1), d = a.fork(2);
  bool all_same = true;
  for (int i = 0; i < 20; ++i)
    all_same = all_same && c.random().same_payload(d.random());
  CHECK_FALSE(all_same);
}

TEST_CASE("sampler uniformity on PSL2(13)") {
  ExplicitField F13 = ExplicitField::prime(13);
  BlackBox box = make_psl2_box(F13, 12345);
  auto *mops = static_cast<const MatrixGroupOps *>(box.ops_ptr().get());
  std::unordered_map<size_t, uint64_t> counts;
  ElementHash hasher;
  const int samples = 100000;
  for (int i = 0; i < samples; ++i)
    ++counts[hasher(box.random())];
  REQUIRE(counts.size() == 1092);
  std::vector<uint64_t> v;
  v.reserve(counts.size());
  for (auto &kv : counts)
    v.push_back(kv.second);
  double stat = chi2_statistic(v, static_cast<double>(samples) / 1092.0);
  double crit = chi2_critical(1091.0, 3.0902);  // alpha = 0.001
  CHECK(stat < crit);
  (void)mops;
}

TEST_CASE("no sampled element leaves the generated subgroup") {
  ExplicitField F13 = ExplicitField::prime(13);
  BlackBox box = make_psl2_box(F13, 4);
  // order-7 torus inside PSL2(13)
  Element g = box.identity();
  for (;;) {
    g = box.random();
    if (order_by_iteration(box, g, 100) == 7)
      break;
  }
  BlackBox sub = make_subgroup_box(box, {g});
  ElementSet members;
  Element cur = box.identity();
  for (int i = 0; i < 7; ++i) {
    members.insert(cur);
    cur = box.mul(cur, g);
  }
  for (int i = 0; i < 200; ++i)
    CHECK(members.count(sub.random()) == 1);
}
