#pragma once

#include <optional>

#include "bbg/engine.hpp"

namespace bbg {

/// Embedding of a PSL2 box Y into a box X = F x| <swap> encrypting SO3 over
/// the same field. F is the graph of conjugation by the external diagonal
/// involution, so Y-strings drawn through the paired sampler come with their
/// images attached; arbitrary Y-strings cannot be embedded without
/// constructive membership, and nothing downstream needs that.
class LiftedBox {
public:
  LiftedBox(BlackBox X, BlackBox graph, std::shared_ptr<const SemidirectProductOps> sd_ops,
            std::shared_ptr<const DirectProductOps> pair_ops, Element delta);

  BlackBox &so3_box() { return X_; }
  const BlackBox &so3_box() const { return X_; }
  const Element &delta() const { return delta_; }

  /// (y, embed(y)): a random Y-element together with its X-string.
  std::pair<Element, Element> sample_with_embedding();

  /// embed(y) for a Y-element whose image under the diagonal automorphism is
  /// already known (e.g. amalgam generators).
  Element embed_pair(const Element &y, const Element &y_phi) const;

  /// First coordinate of a flip-free X-string; this is the Y-preimage.
  /// Returns nothing when the element carries the flip (it lies outside the
  /// embedded copy of Y).
  std::optional<Element> project_to_base(const Element &x) const;

private:
  BlackBox X_;
  BlackBox graph_;  // fork of F used for paired sampling
  std::shared_ptr<const SemidirectProductOps> sd_ops_;
  std::shared_ptr<const DirectProductOps> pair_ops_;
  Element delta_;
};

/// Builds X = Y x| <delta> encrypting SO3 from a box encrypting PSL2 over an
/// odd-characteristic field with |F| > 3. Monte Carlo: retries internally and
/// certifies torus maximality by 2-height probes.
LiftedBox lift_psl2_to_so3(const BlackBox &Y, EngineConfig cfg = {}, uint64_t salt = 0);

}  // namespace bbg
