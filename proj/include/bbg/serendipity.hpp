#pragma once

#include "bbg/bbfield.hpp"

namespace bbg {

enum class CertificateRoute {
  OnePath,   // p = 1 mod 4: the additive walk hits the quadric at step c with c^2+1 = 0
  ThreePath  // p = 3 mod 4: the walk closes at p; a quadric point (c,d,1) is then built
};

struct UnipotentCertificate {
  Element u;
  BigUint p;
  Element witness_s;
  Element witness_t;
  CertificateRoute route;
  uint64_t steps = 0;        // K-additions performed
  uint64_t walk_length = 0;  // additive-walk steps (unknown-p route)
};

/// Finds the characteristic and a nontrivial unipotent element by
/// enforced serendipity. Unknown p costs at most p additions in K; a prime
/// hint switches to double-and-add (O(log p) additions).
UnipotentCertificate find_characteristic_and_unipotent(FieldK &K,
                                                       std::optional<BigUint> p_hint = {});

/// Box over the maximal unipotent subgroup <u^{T_s}> containing cert.u.
BlackBox unipotent_subgroup(Engine &eng, const UnipotentCertificate &cert);

/// u != 1, u^p = 1, p prime. Throws on violation.
void verify_certificate(Engine &eng, const UnipotentCertificate &cert);

}  // namespace bbg
