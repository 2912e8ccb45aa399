#include "bbg/serendipity.hpp"

#include "bbg/modarith.hpp"

namespace bbg {

namespace {

// order of u given that it divides n: the smallest divisor d of n with u^d = 1
std::optional<uint64_t> order_dividing(Engine &eng, const Element &u, uint64_t n) {
  BlackBox &box = eng.box();
  if (!box.eq(power(box, u, BigUint(n)), box.identity()))
    return std::nullopt;
  uint64_t ord = n;
  for (uint64_t d = 2; d * d <= ord;) {
    if (ord % d == 0 && box.eq(power(box, u, BigUint(ord / d)), box.identity()))
      ord /= d;
    else
      ++d;
  }
  return ord;
}

UnipotentCertificate harvest(Engine &eng, const PlaneLine &parabolic, const BigUint &p,
                             CertificateRoute route) {
  UnipotentCertificate cert;
  cert.u = parabolic.gens.front();
  cert.p = p;
  cert.witness_t = parabolic.flip;
  cert.witness_s = eng.box().mul(cert.u, parabolic.flip);
  cert.route = route;
  verify_certificate(eng, cert);
  return cert;
}

// smallest c with -1 - c^2 a square mod p, and a matching d
std::pair<uint64_t, uint64_t> quadric_residues(uint64_t p) {
  ExplicitField F = ExplicitField::prime(p);
  for (uint64_t c = 1; c < p; ++c) {
    FieldValue rhs = F.neg(F.from_u64(1 + (c * c) % p));
    auto d = F.sqrt(rhs);
    if (d && !F.is_zero(*d))
      return {c, d->c[0]};
  }
  throw std::logic_error("quadric_residues: no solution found (p = 2?)");
}

}  // namespace

void verify_certificate(Engine &eng, const UnipotentCertificate &cert) {
  BlackBox &box = eng.box();
  if (box.eq(cert.u, box.identity()))
    throw std::invalid_argument("certificate: trivial unipotent");
  if (!cert.p.fits_u64() || !is_prime_u64(cert.p.as_u64()))
    throw std::invalid_argument("certificate: p is not a (supported) prime");
  if (!box.eq(power(box, cert.u, cert.p), box.identity()))
    throw std::invalid_argument("certificate: u^p != 1");
  if (!box.eq(box.mul(cert.witness_s, cert.witness_t), cert.u))
    throw std::invalid_argument("certificate: witnesses do not multiply to u");
  if (!eng.is_involution(cert.witness_s) || !eng.is_involution(cert.witness_t))
    throw std::invalid_argument("certificate: witnesses are not involutions");
}

UnipotentCertificate find_characteristic_and_unipotent(FieldK &K, std::optional<BigUint> p_hint) {
  Engine &eng = K.engine();
  BlackBox &box = eng.box();

  if (p_hint) {
    const BigUint &p = *p_hint;
    if (!p.fits_u64() || !is_prime_u64(p.as_u64()))
      throw std::invalid_argument("p hint must be a prime below 2^64");
    uint64_t pv = p.as_u64();
    if (pv % 4 == 1) {
      // the image of sqrt(-1) is itself a quadric point of the axis
      ExplicitField F = ExplicitField::prime(pv);
      FieldValue c = *F.sqrt(F.neg(F.one()));
      FieldElementK img = K.residue_image(BigUint(c.c[0])).value();
      if (img.is_regular())
        throw std::invalid_argument("p hint rejected: sqrt(-1) image is not parabolic");
      UnipotentCertificate cert = harvest(eng, *img.parabolic, p, CertificateRoute::OnePath);
      cert.steps = BigUint(c.c[0]).bit_length() * 2;
      return cert;
    }
    auto [c, d] = quadric_residues(pv);
    FieldElementK x1 = K.residue_image(BigUint(c)).value();
    FieldElementK x2 = K.residue_image(BigUint(d)).value();
    FieldElementK pt = K.point_from_coordinates(x1, x2);
    if (pt.is_regular())
      throw std::invalid_argument("p hint rejected: quadric point came out regular");
    UnipotentCertificate cert = harvest(eng, *pt.parabolic, p, CertificateRoute::ThreePath);
    cert.steps = (BigUint(c).bit_length() + BigUint(d).bit_length()) * 2;
    return cert;
  }

  // unknown p: iterate a := a + 1 from 1. Either the quadric is hit at step c
  // with c^2 + 1 = 0 mod p, or the walk closes at step p.
  // An unrelated quadric hit inside a single addition is checked
  // opportunistically against the current step count.
  std::optional<UnipotentCertificate> opportunistic;
  uint64_t step = 1;
  K.set_unipotent_observer([&](const UnipotentEvent &ev) {
    if (opportunistic)
      return;
    uint64_t c2p1 = step * step + 1;
    auto ord = order_dividing(eng, ev.u, c2p1);
    if (!ord || *ord < 2 || !is_prime_u64(*ord))
      return;
    UnipotentCertificate cert;
    cert.u = ev.u;
    cert.p = BigUint(*ord);
    cert.witness_s = ev.s;
    cert.witness_t = ev.t;
    cert.route = CertificateRoute::OnePath;
    opportunistic = std::move(cert);
  });

  // p is at most q <= cbrt(E) + 1
  uint64_t cap = 2;
  {
    BigUint E = box.exponent().E;
    while (BigUint(cap) * BigUint(cap) * BigUint(cap) < E)
      cap += cap / 2 + 1;
    cap += 2;
  }

  FieldElementK acc = K.one();
  UnipotentCertificate result;
  bool have_result = false;
  while (!have_result) {
    if (step > cap) {
      K.set_unipotent_observer(nullptr);
      throw RetryExhausted("characteristic walk exceeded the exponent bound");
    }
    FieldElementK next = K.add(acc, K.one()).value();
    ++step;
    if (opportunistic) {
      result = std::move(*opportunistic);
      result.walk_length = step;
      have_result = true;
      break;
    }
    if (!next.is_regular()) {
      // intrinsic failure: the value c = step satisfies c^2 + 1 = 0 mod p
      uint64_t c2p1 = step * step + 1;
      Element u = next.parabolic->gens.front();
      auto ord = order_dividing(eng, u, c2p1);
      if (!ord || *ord < 2 || !is_prime_u64(*ord)) {
        K.set_unipotent_observer(nullptr);
        throw std::runtime_error("serendipity: quadric hit with non-prime order (oracle?)");
      }
      result = harvest(eng, *next.parabolic, BigUint(*ord), CertificateRoute::OnePath);
      result.walk_length = step;
      have_result = true;
      break;
    }
    if (K.is_zero(next)) {
      // the walk closed: step = p, necessarily p = 3 mod 4 here
      uint64_t p = step;
      K.set_unipotent_observer(nullptr);
      if (!is_prime_u64(p))
        throw std::runtime_error("serendipity: walk closed at a composite step (oracle?)");
      auto [c, d] = quadric_residues(p);
      FieldElementK x1 = K.residue_image(BigUint(c)).value();
      FieldElementK x2 = K.residue_image(BigUint(d)).value();
      FieldElementK pt = K.point_from_coordinates(x1, x2);
      if (pt.is_regular())
        throw std::runtime_error("serendipity: quadric point came out regular (oracle?)");
      result = harvest(eng, *pt.parabolic, BigUint(p), CertificateRoute::ThreePath);
      result.walk_length = p;
      have_result = true;
      break;
    }
    acc = std::move(next);
  }
  K.set_unipotent_observer(nullptr);
  result.steps = step;
  verify_certificate(eng, result);
  return result;
}

BlackBox unipotent_subgroup(Engine &eng, const UnipotentCertificate &cert) {
  BlackBox &box = eng.box();
  InvolutionPoint pt = eng.point_of(cert.witness_s);
  BlackBox torus = make_subgroup_box(box, pt.torus_gens, eng.fresh_salt(), /*burnin_per_gen=*/4);
  std::vector<Element> gens{cert.u};
  unsigned conjugates = eng.loglog_exponent() + 8;
  for (unsigned i = 0; i < conjugates; ++i)
    gens.push_back(eng.conj(cert.u, torus.random()));
  return make_subgroup_box(box, std::move(gens), eng.fresh_salt());
}

}  // namespace bbg
