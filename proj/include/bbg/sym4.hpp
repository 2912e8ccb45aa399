#pragma once

#include <string>

#include "bbg/engine.hpp"

namespace bbg {

/// Basis data extracted from a Sym4 subgroup of SO3: three pairwise-commuting
/// right-type involutions with e1 e2 = e3, an order-3 element cycling them,
/// and the three "transposition" involutions d_i fixing the coordinate frame.
/// d1 commutes with e1 and swaps e2, e3; d2 = d1^theta; d3 = d1^theta^2.
struct SpinorFrame {
  Element e1, e2, e3;
  Element theta;
  Element d1, d2, d3;
  Element s4;  // order-4 witness in the torus of e1
};

/// Builds a Sym4 subgroup and its spinor frame (Monte Carlo; retries
/// internally, throws RetryExhausted on budget exhaustion).
SpinorFrame build_sym4(Engine &eng);

/// All 24 elements of <theta, s4>, or a failure if the closure is not 24.
std::vector<Element> sym4_closure(Engine &eng, const SpinorFrame &frame);

/// Frame relation checks (group equations only); throws on violation.
void validate_frame(Engine &eng, const SpinorFrame &frame);

std::string frame_to_json(const SpinorFrame &frame);
SpinorFrame frame_from_json(Engine &eng, const std::string &text);

}  // namespace bbg
