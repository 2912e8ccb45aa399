#include "bbg/pipeline.hpp"

namespace bbg {

Pipeline Pipeline::build(const GroupSpec &spec, uint64_t seed, unsigned confidence) {
  Pipeline p;
  p.finish_build(spec, seed, confidence, nullptr);
  return p;
}

Pipeline Pipeline::build_with_frame(const GroupSpec &spec, uint64_t seed,
                                    const std::string &frame_json, unsigned confidence) {
  Pipeline p;
  p.finish_build(spec, seed, confidence, &frame_json);
  return p;
}

void Pipeline::finish_build(const GroupSpec &spec, uint64_t seed, unsigned confidence,
                            const std::string *frame_json) {
  spec_ = spec;
  GroupSpec seeded = spec;
  seeded.seed = mix_seed(spec.seed, seed);
  base_ = std::make_unique<BlackBox>(seeded.instantiate());

  EngineConfig cfg;
  cfg.confidence = confidence;
  if (spec.kind == MatrixKind::PSL2 && spec.field.p() != 2) {
    // PSL2 input: adjoin the diagonal automorphism first
    lift_ = lift_psl2_to_so3(*base_, cfg, seed);
    engine_ = std::make_unique<Engine>(lift_->so3_box(), cfg, seed);
  } else {
    // PGL2 already encrypts SO3; the lift is free
    engine_ = std::make_unique<Engine>(*base_, cfg, seed);
  }
  if (frame_json)
    frame_ = frame_from_json(*engine_, *frame_json);
  else
    frame_ = build_sym4(*engine_);
  K_ = std::make_unique<FieldK>(*engine_, frame_);
  adjoint_ = std::make_unique<Adjoint>(*K_, spec.field.q());
}

std::optional<Element> Pipeline::to_base(const Element &x) const {
  if (!lift_)
    return x;
  return lift_->project_to_base(x);
}

std::string Pipeline::base_element_json(const Element &base_elt) const {
  const auto &ops = static_cast<const MatrixGroupOps &>(base_->ops());
  return ops.element_to_json(base_elt);
}

Element Pipeline::base_element_from_json(const std::string &text) const {
  const auto &ops = static_cast<const MatrixGroupOps &>(base_->ops());
  return ops.element_from_json(text);
}

}  // namespace bbg
