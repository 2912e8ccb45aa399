#include "bbg/explicit_field.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bbg/modarith.hpp"

namespace bbg {

namespace {

// dense polynomials over F_p, low-to-high coefficients, no trailing zeros
using Poly = std::vector<uint64_t>;

void poly_trim(Poly &f) {
  while (!f.empty() && f.back() == 0)
    f.pop_back();
}

Poly poly_mul(const Poly &a, const Poly &b, uint64_t p) {
  if (a.empty() || b.empty())
    return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0)
      continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = addmod_u64(r[i + j], mulmod_u64(a[i], b[j], p), p);
  }
  return r;
}

// reduce modulo monic f
Poly poly_mod(Poly a, const Poly &f, uint64_t p) {
  size_t deg_f = f.size() - 1;
  while (a.size() > deg_f) {
    uint64_t lead = a.back();
    size_t shift = a.size() - 1 - deg_f;
    if (lead != 0) {
      for (size_t i = 0; i <= deg_f; ++i) {
        uint64_t t = mulmod_u64(lead, f[i], p);
        a[shift + i] = submod_u64(a[shift + i], t, p);
      }
    }
    a.pop_back();
  }
  poly_trim(a);
  return a;
}

Poly poly_powmod(Poly base, uint64_t e, const Poly &f, uint64_t p) {
  Poly r{1};
  base = poly_mod(std::move(base), f, p);
  while (e != 0) {
    if (e & 1u)
      r = poly_mod(poly_mul(r, base, p), f, p);
    base = poly_mod(poly_mul(base, base, p), f, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    // a mod b with b made monic
    uint64_t lead_inv = invmod_u64(b.back(), p);
    Poly bm = b;
    for (auto &c : bm)
      c = mulmod_u64(c, lead_inv, p);
    a = poly_mod(std::move(a), bm, p);
    std::swap(a, b);
  }
  return a;
}

bool poly_irreducible(const Poly &f, uint64_t p) {
  size_t k = f.size() - 1;
  if (k == 0)
    return false;
  if (f[0] == 0)
    return k == 1;  // divisible by x
  // x^(p^k) == x mod f, and gcd(x^(p^(k/r)) - x, f) = 1 for prime r | k
  Poly x{0, 1};
  Poly t = x;
  std::vector<Poly> frob_powers;  // t after i Frobenius steps
  for (size_t i = 0; i < k; ++i) {
    t = poly_powmod(t, p, f, p);
    frob_powers.push_back(t);
  }
  Poly diff = frob_powers.back();
  // diff - x
  if (diff.size() < 2)
    diff.resize(2, 0);
  diff[1] = submod_u64(diff[1], 1, p);
  poly_trim(diff);
  if (!diff.empty())
    return false;
  for (size_t r = 2; r <= k; ++r) {
    if (k % r != 0)
      continue;
    bool r_prime = true;
    for (size_t d = 2; d * d <= r; ++d)
      if (r % d == 0)
        r_prime = false;
    if (!r_prime)
      continue;
    Poly g = frob_powers[k / r - 1];
    if (g.size() < 2)
      g.resize(2, 0);
    g[1] = submod_u64(g[1], 1, p);
    poly_trim(g);
    Poly gc = poly_gcd(g, f, p);
    if (gc.size() != 1)
      return false;
  }
  return true;
}

BigUint pow_big(uint64_t base, unsigned e) {
  BigUint r(1);
  for (unsigned i = 0; i < e; ++i)
    r = r * BigUint(base);
  return r;
}

}  // namespace

ExplicitField ExplicitField::prime(uint64_t p) {
  if (!is_prime_u64(p))
    throw std::invalid_argument("ExplicitField: p is not prime");
  ExplicitField f;
  f.p_ = p;
  f.k_ = 1;
  f.poly_ = {0, 1};
  f.sc_ = {1};
  f.q_ = BigUint(p);
  return f;
}

ExplicitField ExplicitField::extension(uint64_t p, unsigned k) {
  if (k == 0)
    throw std::invalid_argument("ExplicitField: k must be >= 1");
  if (k == 1)
    return prime(p);
  if (!is_prime_u64(p))
    throw std::invalid_argument("ExplicitField: p is not prime");
  if (k > 16)
    throw std::invalid_argument("ExplicitField: extension degree too large");
  // scan constant-coefficient-major lexicographic order for the first
  // irreducible monic polynomial
  std::vector<uint64_t> coeffs(k, 0);
  for (;;) {
    Poly f(coeffs);
    f.push_back(1);
    if (f[0] != 0 && poly_irreducible(f, p))
      return with_poly(p, f);
    // increment coeff vector with most-significant digit last
    size_t i = k;
    while (i-- > 0) {
      if (++coeffs[i] < p)
        break;
      coeffs[i] = 0;
      if (i == 0)
        throw std::logic_error("ExplicitField: no irreducible polynomial found");
    }
  }
}

ExplicitField ExplicitField::with_poly(uint64_t p, std::vector<uint64_t> poly) {
  if (!is_prime_u64(p))
    throw std::invalid_argument("ExplicitField: p is not prime");
  if (poly.size() < 2 || poly.back() != 1)
    throw std::invalid_argument("ExplicitField: polynomial must be monic of degree >= 1");
  for (uint64_t c : poly)
    if (c >= p)
      throw std::invalid_argument("ExplicitField: polynomial coefficient out of range");
  unsigned k = static_cast<unsigned>(poly.size() - 1);
  if (k > 1 && !poly_irreducible(poly, p))
    throw std::invalid_argument("ExplicitField: polynomial is reducible");
  ExplicitField f;
  f.p_ = p;
  f.k_ = k;
  f.poly_ = std::move(poly);
  f.q_ = pow_big(p, k);
  f.init_structure_constants();
  return f;
}

void ExplicitField::init_structure_constants() {
  if (k_ == 1) {
    sc_ = {1};
    return;
  }
  // powers of x modulo the defining polynomial, up to degree 2k-2
  std::vector<Poly> xpow(2 * k_ - 1);
  xpow[0] = {1};
  for (size_t t = 1; t < xpow.size(); ++t) {
    Poly next(t + 1, 0);
    for (size_t i = 0; i < xpow[t - 1].size(); ++i)
      next[i + 1] = xpow[t - 1][i];
    xpow[t] = poly_mod(std::move(next), poly_, p_);
  }
  sc_.assign(static_cast<size_t>(k_) * k_ * k_, 0);
  for (unsigned i = 0; i < k_; ++i) {
    for (unsigned j = 0; j < k_; ++j) {
      const Poly &prod = xpow[i + j];
      for (unsigned l = 0; l < k_; ++l)
        sc_[(static_cast<size_t>(i) * k_ + j) * k_ + l] = l < prod.size() ? prod[l] : 0;
    }
  }
}

void ExplicitField::check(const FieldValue &a) const {
  if (a.c.size() != k_)
    throw std::invalid_argument("FieldValue does not belong to this field");
  for (uint64_t x : a.c)
    if (x >= p_)
      throw std::invalid_argument("FieldValue coefficient out of range");
}

FieldValue ExplicitField::zero() const { return FieldValue{std::vector<uint64_t>(k_, 0)}; }

FieldValue ExplicitField::one() const {
  FieldValue v = zero();
  v.c[0] = 1;
  return v;
}

FieldValue ExplicitField::from_u64(uint64_t r) const {
  FieldValue v = zero();
  v.c[0] = r % p_;
  return v;
}

FieldValue ExplicitField::element(std::vector<uint64_t> coeffs) const {
  FieldValue v{std::move(coeffs)};
  check(v);
  return v;
}

FieldValue ExplicitField::element_at(uint64_t index) const {
  FieldValue v = zero();
  for (unsigned i = 0; i < k_; ++i) {
    v.c[i] = index % p_;
    index /= p_;
  }
  if (index != 0)
    throw std::invalid_argument("element_at: index out of range");
  return v;
}

bool ExplicitField::is_zero(const FieldValue &a) const {
  for (uint64_t x : a.c)
    if (x != 0)
      return false;
  return true;
}

bool ExplicitField::is_one(const FieldValue &a) const {
  if (a.c[0] != 1)
    return false;
  for (unsigned i = 1; i < k_; ++i)
    if (a.c[i] != 0)
      return false;
  return true;
}

FieldValue ExplicitField::add(const FieldValue &a, const FieldValue &b) const {
  check(a);
  check(b);
  FieldValue r = zero();
  for (unsigned i = 0; i < k_; ++i)
    r.c[i] = addmod_u64(a.c[i], b.c[i], p_);
  return r;
}

FieldValue ExplicitField::sub(const FieldValue &a, const FieldValue &b) const {
  check(a);
  check(b);
  FieldValue r = zero();
  for (unsigned i = 0; i < k_; ++i)
    r.c[i] = submod_u64(a.c[i], b.c[i], p_);
  return r;
}

FieldValue ExplicitField::neg(const FieldValue &a) const {
  check(a);
  FieldValue r = zero();
  for (unsigned i = 0; i < k_; ++i)
    r.c[i] = a.c[i] == 0 ? 0 : p_ - a.c[i];
  return r;
}

FieldValue ExplicitField::mul(const FieldValue &a, const FieldValue &b) const {
  check(a);
  check(b);
  if (k_ == 1)
    return FieldValue{{mulmod_u64(a.c[0], b.c[0], p_)}};
  FieldValue r = zero();
  for (unsigned i = 0; i < k_; ++i) {
    if (a.c[i] == 0)
      continue;
    for (unsigned j = 0; j < k_; ++j) {
      if (b.c[j] == 0)
        continue;
      uint64_t ab = mulmod_u64(a.c[i], b.c[j], p_);
      const uint64_t *row = &sc_[(static_cast<size_t>(i) * k_ + j) * k_];
      for (unsigned l = 0; l < k_; ++l) {
        if (row[l] != 0)
          r.c[l] = addmod_u64(r.c[l], mulmod_u64(ab, row[l], p_), p_);
      }
    }
  }
  return r;
}

FieldValue ExplicitField::inv(const FieldValue &a) const {
  check(a);
  if (is_zero(a))
    throw std::invalid_argument("ExplicitField::inv: zero input");
  if (k_ == 1)
    return FieldValue{{invmod_u64(a.c[0], p_)}};
  return pow(a, q_ - BigUint(2));
}

FieldValue ExplicitField::pow(const FieldValue &a, const BigUint &e) const {
  check(a);
  FieldValue r = one();
  if (e.is_zero())
    return r;
  FieldValue base = a;
  size_t bits = e.bit_length();
  for (size_t i = bits; i-- > 0;) {
    r = mul(r, r);
    if (e.bit(i))
      r = mul(r, base);
  }
  return r;
}

bool ExplicitField::is_square(const FieldValue &a) const {
  if (is_zero(a))
    return true;
  if (p_ == 2)
    return true;
  FieldValue e = pow(a, (q_ - BigUint(1)).shifted_right(1));
  return is_one(e);
}

std::optional<FieldValue> ExplicitField::sqrt(const FieldValue &a) const {
  check(a);
  if (is_zero(a))
    return zero();
  if (p_ == 2) {
    // squaring is the Frobenius, a bijection; invert it with q/2 squarings
    return pow(a, q_.shifted_right(1));
  }
  if (!is_square(a))
    return std::nullopt;
  if (q_.mod_u64(4) == 3)
    return pow(a, (q_ + BigUint(1)).shifted_right(2));
  // Tonelli-Shanks: q - 1 = 2^s * t with t odd
  BigUint qm1 = q_ - BigUint(1);
  size_t s = qm1.two_adic_valuation();
  BigUint t = qm1.shifted_right(s);
  // deterministic scan for a non-residue
  FieldValue z = zero();
  for (uint64_t idx = 2;; ++idx) {
    z = element_at(idx);
    if (!is_zero(z) && !is_square(z))
      break;
  }
  FieldValue c = pow(z, t);
  FieldValue r = pow(a, (t + BigUint(1)).shifted_right(1));
  FieldValue d = pow(a, t);
  size_t m = s;
  while (!is_one(d)) {
    // find least i with d^(2^i) = 1
    size_t i = 0;
    FieldValue probe = d;
    while (!is_one(probe)) {
      probe = mul(probe, probe);
      ++i;
    }
    FieldValue b = c;
    for (size_t j = 0; j + i + 1 < m; ++j)
      b = mul(b, b);
    r = mul(r, b);
    c = mul(b, b);
    d = mul(d, c);
    m = i;
  }
  return r;
}

std::string ExplicitField::to_json() const {
  nlohmann::json j;
  j["p"] = p_;
  j["k"] = k_;
  j["poly"] = poly_;
  return j.dump();
}

ExplicitField ExplicitField::from_json(const std::string &text) {
  nlohmann::json j = nlohmann::json::parse(text);
  uint64_t p = j.at("p").get<uint64_t>();
  unsigned k = j.at("k").get<unsigned>();
  if (j.contains("poly") && !j.at("poly").is_null()) {
    auto poly = j.at("poly").get<std::vector<uint64_t>>();
    if (poly.size() != static_cast<size_t>(k) + 1)
      throw std::invalid_argument("field spec: poly degree does not match k");
    return with_poly(p, std::move(poly));
  }
  return extension(p, k);
}

}  // namespace bbg
