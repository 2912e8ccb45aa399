#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bbg/explicit_field.hpp"

using bbg::BigUint;
using bbg::ExplicitField;
using bbg::FieldValue;

namespace {

void check_axioms_exhaustive(const ExplicitField &F) {
  uint64_t q = F.q().as_u64();
  REQUIRE(q <= 1024);
  // commutativity and zero divisors over all pairs, associativity and
  // distributivity over all triples
  for (uint64_t i = 0; i < q; ++i) {
    FieldValue a = F.element_at(i);
    for (uint64_t j = 0; j < q; ++j) {
      FieldValue b = F.element_at(j);
      CHECK(F.mul(a, b) == F.mul(b, a));
      CHECK(F.add(a, b) == F.add(b, a));
      if (!F.is_zero(a) && !F.is_zero(b))
        CHECK_FALSE(F.is_zero(F.mul(a, b)));
    }
  }
  std::mt19937_64 rng(42);
  uint64_t triples = q <= 64 ? q * q * q : 200000;
  for (uint64_t t = 0; t < triples; ++t) {
    uint64_t i, j, l;
    if (q <= 64) {
      i = t % q;
      j = (t / q) % q;
      l = t / (q * q);
    } else {
      i = rng() % q;
      j = rng() % q;
      l = rng() % q;
    }
    FieldValue a = F.element_at(i), b = F.element_at(j), c = F.element_at(l);
    CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
    CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
    CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
  }
  // inverses
  for (uint64_t i = 1; i < q; ++i) {
    FieldValue a = F.element_at(i);
    if (F.is_zero(a))
      continue;
    CHECK(F.is_one(F.mul(a, F.inv(a))));
  }
}

}  // namespace

TEST_CASE("prime field basics") {
  ExplicitField F7 = ExplicitField::prime(7);
  CHECK(F7.add(F7.from_u64(3), F7.from_u64(5)) == F7.from_u64(1));
  CHECK(F7.mul(F7.from_u64(3), F7.from_u64(5)) == F7.from_u64(1));
  CHECK(F7.inv(F7.from_u64(3)) == F7.from_u64(5));
  ExplicitField F13 = ExplicitField::prime(13);
  CHECK(F13.inv(F13.one()) == F13.one());
  ExplicitField F5 = ExplicitField::prime(5);
  for (uint64_t i = 0; i < 5; ++i)
    CHECK(F5.add(F5.element_at(i), F5.zero()) == F5.element_at(i));
}

TEST_CASE("extension field F9 with s2 squared = -1") {
  ExplicitField F9 = ExplicitField::extension(3, 2);
  CHECK(F9.poly() == std::vector<uint64_t>{1, 0, 1});  // x^2 + 1
  FieldValue a = F9.element({1, 2});
  FieldValue b = F9.element({2, 1});
  CHECK(F9.is_zero(F9.add(a, b)));
  FieldValue s2 = F9.element({0, 1});
  CHECK(F9.mul(s2, s2) == F9.element({2, 0}));
  for (uint64_t i = 0; i < 9; ++i)
    CHECK(F9.mul(F9.element_at(i), F9.one()) == F9.element_at(i));
}

TEST_CASE("field axioms exhaustively on small fields") {
  for (auto [p, k] : {std::pair<uint64_t, unsigned>{7, 1},
                      {3, 2},
                      {5, 2},
                      {3, 3},
                      {7, 2},
                      {2, 4},
                      {31, 1}}) {
    ExplicitField F = ExplicitField::extension(p, k);
    check_axioms_exhaustive(F);
  }
}

TEST_CASE("inverses in F25") {
  ExplicitField F = ExplicitField::extension(5, 2);
  unsigned checked = 0;
  for (uint64_t i = 1; i < 25; ++i) {
    FieldValue a = F.element_at(i);
    if (F.is_zero(a))
      continue;
    CHECK(F.is_one(F.mul(a, F.inv(a))));
    ++checked;
  }
  CHECK(checked == 24);
}

TEST_CASE("square roots") {
  ExplicitField F7 = ExplicitField::prime(7);
  auto r = F7.sqrt(F7.from_u64(2));
  REQUIRE(r.has_value());
  CHECK((*r == F7.from_u64(3) || *r == F7.from_u64(4)));
  CHECK_FALSE(F7.sqrt(F7.from_u64(3)).has_value());
  CHECK(F7.sqrt(F7.zero()) == F7.zero());
  auto one_root = F7.sqrt(F7.one());
  REQUIRE(one_root.has_value());
  CHECK((*one_root == F7.one() || *one_root == F7.from_u64(6)));

  // q = 1 mod 4 exercises the Tonelli-Shanks branch
  for (auto [p, k] : {std::pair<uint64_t, unsigned>{13, 1}, {5, 2}, {17, 1}, {3, 2}}) {
    ExplicitField F = ExplicitField::extension(p, k);
    uint64_t q = F.q().as_u64();
    uint64_t squares = 0;
    for (uint64_t i = 0; i < q; ++i) {
      FieldValue a = F.element_at(i);
      auto root = F.sqrt(a);
      if (F.is_zero(a)) {
        CHECK(root == F.zero());
        continue;
      }
      if (root.has_value()) {
        CHECK(F.mul(*root, *root) == a);
        ++squares;
      } else {
        CHECK_FALSE(F.is_square(a));
      }
    }
    CHECK(squares == (q - 1) / 2);
  }
}

TEST_CASE("even characteristic sqrt is total") {
  ExplicitField F16 = ExplicitField::extension(2, 4);
  for (uint64_t i = 0; i < 16; ++i) {
    FieldValue a = F16.element_at(i);
    auto r = F16.sqrt(a);
    REQUIRE(r.has_value());
    CHECK(F16.mul(*r, *r) == a);
  }
}

TEST_CASE("frobenius is additive and multiplicative") {
  ExplicitField F = ExplicitField::prime(5463458053ull);
  std::mt19937_64 rng(5);
  BigUint p(F.p());
  for (int i = 0; i < 50; ++i) {
    FieldValue a = F.from_u64(rng());
    FieldValue b = F.from_u64(rng());
    CHECK(F.pow(F.add(a, b), p) == F.add(F.pow(a, p), F.pow(b, p)));
    CHECK(F.pow(F.mul(a, b), p) == F.mul(F.pow(a, p), F.pow(b, p)));
  }
  ExplicitField F49 = ExplicitField::extension(7, 2);
  BigUint p7(7);
  for (uint64_t i = 0; i < 49; ++i) {
    for (uint64_t j = 0; j < 49; ++j) {
      FieldValue a = F49.element_at(i), b = F49.element_at(j);
      CHECK(F49.pow(F49.add(a, b), p7) == F49.add(F49.pow(a, p7), F49.pow(b, p7)));
    }
  }
}

TEST_CASE("serialization round trip") {
  ExplicitField F = ExplicitField::extension(7, 2);
  ExplicitField G = ExplicitField::from_json(F.to_json());
  CHECK(G.p() == 7);
  CHECK(G.k() == 2);
  CHECK(G.poly() == F.poly());
  CHECK(G.structure_constants() == F.structure_constants());
  CHECK_THROWS(ExplicitField::with_poly(7, {1, 0, 0}));   // not monic
  CHECK_THROWS(ExplicitField::with_poly(5, {1, 0, 1}));   // x^2+1 reducible mod 5
  CHECK_THROWS(ExplicitField::prime(42));
}
