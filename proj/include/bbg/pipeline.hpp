#pragma once

#include <memory>

#include "bbg/adjoint.hpp"
#include "bbg/so3_lift.hpp"

namespace bbg {

/// Everything downstream of a group spec: the base oracle, the SO3 box
/// (lifted when the spec is PSL2), an engine over it, the spinor frame and
/// the black box field.
class Pipeline {
public:
  static Pipeline build(const GroupSpec &spec, uint64_t seed, unsigned confidence = 20);
  /// Same, but with a previously persisted frame instead of a fresh Sym4.
  static Pipeline build_with_frame(const GroupSpec &spec, uint64_t seed, const std::string &frame_json,
                                   unsigned confidence = 20);

  const GroupSpec &spec() const { return spec_; }
  BlackBox &base_box() { return *base_; }
  Engine &engine() { return *engine_; }
  const SpinorFrame &frame() const { return frame_; }
  FieldK &field() { return *K_; }
  Adjoint &adjoint() { return *adjoint_; }
  bool lifted() const { return lift_.has_value(); }
  LiftedBox &lift() { return *lift_; }

  /// Maps an SO3-box element back to the base group when possible: the
  /// identity map for PGL2 specs, the flip-free projection for lifted PSL2.
  std::optional<Element> to_base(const Element &x) const;
  /// Wire form (normalized matrix entries) of a base-group element.
  std::string base_element_json(const Element &base_elt) const;
  Element base_element_from_json(const std::string &text) const;

private:
  Pipeline() = default;
  void finish_build(const GroupSpec &spec, uint64_t seed, unsigned confidence,
                    const std::string *frame_json);

  GroupSpec spec_;
  std::unique_ptr<BlackBox> base_;
  std::optional<LiftedBox> lift_;
  std::unique_ptr<Engine> engine_;
  SpinorFrame frame_;
  std::unique_ptr<FieldK> K_;
  std::unique_ptr<Adjoint> adjoint_;
};

}  // namespace bbg
