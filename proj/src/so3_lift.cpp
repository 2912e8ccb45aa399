#include "bbg/so3_lift.hpp"

#include <unordered_set>

namespace bbg {

LiftedBox::LiftedBox(BlackBox X, BlackBox graph, std::shared_ptr<const SemidirectProductOps> sd_ops,
                     std::shared_ptr<const DirectProductOps> pair_ops, Element delta)
    : X_(std::move(X)),
      graph_(std::move(graph)),
      sd_ops_(std::move(sd_ops)),
      pair_ops_(std::move(pair_ops)),
      delta_(std::move(delta)) {}

std::pair<Element, Element> LiftedBox::sample_with_embedding() {
  Element f = graph_.random();
  Element zero;
  zero.w = {0};
  return {pair_ops_->left(f), sd_ops_->pair(f, zero)};
}

Element LiftedBox::embed_pair(const Element &y, const Element &y_phi) const {
  Element zero;
  zero.w = {0};
  return sd_ops_->pair(pair_ops_->pair(y, y_phi), zero);
}

std::optional<Element> LiftedBox::project_to_base(const Element &x) const {
  Element flip = sd_ops_->right(x);
  if ((flip.w.at(0) & 1u) != 0)
    return std::nullopt;
  return pair_ops_->left(sd_ops_->left(x));
}

namespace {

size_t max_two_height(BlackBox &box, unsigned samples) {
  size_t best = 0;
  for (unsigned i = 0; i < samples; ++i)
    best = std::max(best, two_height(box, box.random()));
  return best;
}

struct WordsHash {
  size_t operator()(const std::vector<uint64_t> &w) const {
    size_t h = 1469598103934665603ull;
    for (uint64_t x : w) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return h;
  }
};

std::vector<Element> closure_capped(const GroupOps &ops, const Element &id,
                                    const std::vector<Element> &gens, size_t cap) {
  std::unordered_set<std::vector<uint64_t>, WordsHash> seen{id.w};
  std::vector<Element> all{id};
  for (size_t i = 0; i < all.size(); ++i) {
    for (const Element &g : gens) {
      Element y = ops.mul(all[i], g);
      if (seen.insert(y.w).second) {
        all.push_back(y);
        if (all.size() > cap)
          return all;
      }
    }
  }
  return all;
}

uint64_t small_order(const BlackBox &box, const Element &x) {
  Element y = x;
  uint64_t n = 1;
  while (!box.eq(y, box.identity())) {
    y = box.mul(y, x);
    ++n;
  }
  return n;
}

/// |F| = 5 leaves the involution torus at order 2, which pins nothing: the
/// amalgam of "inversion" on it is the diagonal. For such tiny groups the
/// outer involutive automorphism is found instead by exhausting images of a
/// generating pair; the 2-height probe certifies outerness.
std::optional<LiftedBox> lift_tiny_group(Engine &eng, size_t hy) {
  BlackBox &box = eng.box();
  if (!box.ops().canonical_encoding())
    return std::nullopt;
  constexpr size_t kCap = 360;
  std::vector<Element> all = closure_capped(box.ops(), box.identity(), box.generators(), kCap);
  if (all.size() > kCap)
    return std::nullopt;

  // a generating pair (the transvection generators of a prime-field box
  // already qualify; otherwise scan)
  Element a = box.generators().at(0);
  Element b = box.generators().size() > 1 ? box.generators().at(1) : box.generators().at(0);
  if (closure_capped(box.ops(), box.identity(), {a, b}, all.size()).size() != all.size()) {
    bool found = false;
    for (size_t i = 1; i < all.size() && !found; ++i) {
      for (size_t j = i + 1; j < all.size() && !found; ++j) {
        if (closure_capped(box.ops(), box.identity(), {all[i], all[j]}, all.size()).size() ==
            all.size()) {
          a = all[i];
          b = all[j];
          found = true;
        }
      }
    }
    if (!found)
      return std::nullopt;
  }

  uint64_t oa = small_order(box, a), ob = small_order(box, b);
  uint64_t oab = small_order(box, box.mul(a, b));
  uint64_t oabi = small_order(box, box.mul(a, box.inv(b)));

  for (const Element &ia : all) {
    if (small_order(box, ia) != oa)
      continue;
    for (const Element &ib : all) {
      if (small_order(box, ib) != ob)
        continue;
      if (small_order(box, box.mul(ia, ib)) != oab)
        continue;
      if (small_order(box, box.mul(ia, box.inv(ib))) != oabi)
        continue;
      ProtoInvolution proto = eng.proto_from_pairs({{a, ia}, {b, ib}});
      auto graph =
          closure_capped(proto.graph.ops(), proto.graph.identity(), proto.graph.generators(),
                         all.size() + 1);
      if (graph.size() != all.size())
        continue;  // not the graph of a homomorphism
      // involutive: the graph must contain (image, preimage) for both
      auto contains = [&](const Element &x, const Element &y) {
        Element p = proto.pair_ops->pair(x, y);
        for (const Element &g : graph)
          if (g.w == p.w)
            return true;
        return false;
      };
      if (!contains(ia, a) || !contains(ib, b))
        continue;
      BlackBox X = eng.augment_by_proto(proto, eng.fresh_salt());
      BlackBox xprobe = X.fork(eng.fresh_salt());
      if (max_two_height(xprobe, 48) < hy + 1)
        continue;  // inner automorphism: X is just Y x C2
      Element delta = eng.augmented_flip(X);
      auto sd_ops = std::static_pointer_cast<const SemidirectProductOps>(X.ops_ptr());
      BlackBox graph_box = proto.graph.fork(eng.fresh_salt());
      return LiftedBox(std::move(X), std::move(graph_box), std::move(sd_ops), proto.pair_ops,
                       std::move(delta));
    }
  }
  return std::nullopt;
}

}  // namespace

LiftedBox lift_psl2_to_so3(const BlackBox &Y, EngineConfig cfg, uint64_t salt) {
  Engine eng(Y, cfg, mix_seed(0x50313, salt));
  BlackBox &box = eng.box();

  unsigned outer = 8 + cfg.confidence / 4;
  for (unsigned attempt = 0; attempt < outer; ++attempt) {
    Element u;
    try {
      u = eng.find_involution();
    } catch (const RetryExhausted &) {
      throw RetryExhausted("lift_psl2_to_so3: no involutions (even characteristic input?)");
    }
    InvolutionPoint pt = eng.point_of(u);

    bool torus_has_rotation = false;
    for (const Element &g : pt.torus_gens)
      if (!eng.eq(box.mul(g, g), box.identity()))
        torus_has_rotation = true;
    if (!torus_has_rotation) {
      // |T| = 2 (|F| = 5): inversion on T is the identity and the amalgam
      // degenerates; search the automorphism directly in the tiny group
      BlackBox yprobe = box.fork(eng.fresh_salt());
      size_t hy = max_two_height(yprobe, 48);
      auto lifted = lift_tiny_group(eng, hy);
      if (lifted)
        return std::move(*lifted);
      continue;
    }

    // z = u * u^y of odd order generates the second torus
    Element z;
    bool have_z = false;
    for (unsigned i = 0; i < 64 && !have_z; ++i) {
      Element y = box.random();
      Element cand = box.mul(u, eng.conj(u, y));
      if (eng.eq(cand, box.identity()) || has_even_order(box, cand))
        continue;
      z = cand;
      have_z = true;
    }
    if (!have_z)
      continue;

    // the external involution inverts the torus of u and centralizes z
    std::vector<std::pair<Element, Element>> pairs;
    for (const Element &g : pt.torus_gens)
      pairs.emplace_back(g, box.inv(g));
    pairs.emplace_back(z, z);
    ProtoInvolution proto = eng.proto_from_pairs(pairs);

    BlackBox X = eng.augment_by_proto(proto, eng.fresh_salt());
    Element delta = eng.augmented_flip(X);
    auto sd_ops = std::static_pointer_cast<const SemidirectProductOps>(X.ops_ptr());

    // Monte-Carlo maximality certificate: the lifted group must show deeper
    // 2-heights than the base (the full torus of the diagonal extension)
    BlackBox yprobe = box.fork(eng.fresh_salt());
    BlackBox xprobe = X.fork(eng.fresh_salt());
    size_t hy = max_two_height(yprobe, 32);
    size_t hx = max_two_height(xprobe, 32);
    if (hx < hy + 1)
      continue;

    BlackBox graph = proto.graph.fork(eng.fresh_salt());
    return LiftedBox(std::move(X), std::move(graph), std::move(sd_ops), proto.pair_ops,
                     std::move(delta));
  }
  throw RetryExhausted("lift_psl2_to_so3: retry budget exhausted");
}

}  // namespace bbg
