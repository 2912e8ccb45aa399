#include "bbg/engine.hpp"

#include <algorithm>
#include <unordered_set>

namespace bbg {

namespace {

/// Order-2 box used as the flip factor of an augmentation.
class FlipOps : public GroupOps {
public:
  FlipOps() {
    Element id;
    id.box = box_id();
    id.w = {0};
    set_identity(std::move(id));
  }
  Element flipped() const {
    Element e;
    e.box = box_id();
    e.w = {1};
    return e;
  }

protected:
  Element do_mul(const Element &a, const Element &b) const override {
    Element e;
    e.box = box_id();
    e.w = {(a.w.at(0) ^ b.w.at(0)) & 1u};
    return e;
  }
  Element do_inv(const Element &a) const override {
    Element e;
    e.box = box_id();
    e.w = {a.w.at(0) & 1u};
    return e;
  }
  bool do_eq(const Element &a, const Element &b) const override {
    return (a.w.at(0) & 1u) == (b.w.at(0) & 1u);
  }
};

std::vector<uint64_t> pair_key(const Element &a, const Element &b) {
  const std::vector<uint64_t> &x = a.w <= b.w ? a.w : b.w;
  const std::vector<uint64_t> &y = a.w <= b.w ? b.w : a.w;
  std::vector<uint64_t> key;
  key.reserve(x.size() + y.size() + 1);
  key.insert(key.end(), x.begin(), x.end());
  key.push_back(~0ull);
  key.insert(key.end(), y.begin(), y.end());
  return key;
}

constexpr size_t kCacheCap = 1 << 14;

}  // namespace

Engine::Engine(const BlackBox &box, EngineConfig cfg, uint64_t salt)
    : box_(box.fork(mix_seed(0xE46123, salt))),
      cfg_(cfg),
      cache_enabled_(box.ops().canonical_encoding()) {}

unsigned Engine::loglog_exponent() const {
  size_t bits = box_.exponent().E.bit_length();  // ~log2 E
  unsigned ll = 0;
  while (bits > 1) {
    bits >>= 1;
    ++ll;
  }
  return std::max(1u, ll);
}

const std::shared_ptr<const DirectProductOps> &Engine::square_ops() {
  if (!square_ops_) {
    square_box_ = direct_product(box_, box_.fork(fresh_salt()), fresh_salt());
    square_ops_ = std::static_pointer_cast<const DirectProductOps>(square_box_->ops_ptr());
  }
  return square_ops_;
}

Element Engine::find_involution() {
  unsigned budget = 8 * (cfg_.confidence + 8);
  for (unsigned i = 0; i < budget; ++i) {
    Element x = box_.random();
    if (eq(x, box_.identity()))
      continue;
    if (has_even_order(box_, x))
      return extract_involution(box_, x);
  }
  throw RetryExhausted("find_involution: no even-order element found");
}

ProtoInvolution Engine::conjugation_proto(const Element &t) {
  std::vector<std::pair<Element, Element>> pairs;
  for (const Element &g : box_.generators())
    pairs.emplace_back(g, conj(g, t));
  return proto_from_pairs(pairs);
}

ProtoInvolution Engine::proto_from_pairs(const std::vector<std::pair<Element, Element>> &pairs) {
  if (pairs.empty())
    throw std::invalid_argument("proto_from_pairs: empty generating set");
  const auto &ops = square_ops();
  std::vector<Element> gens;
  gens.reserve(pairs.size());
  for (const auto &[a, b] : pairs)
    gens.push_back(ops->pair(a, b));
  // proto samples only feed verified zeta extraction: a light burn-in is
  // enough and the chain keeps mixing while it is drawn from
  return ProtoInvolution{
      make_subgroup_box(*square_box_, std::move(gens), fresh_salt(), /*burnin_per_gen=*/4), ops};
}

ProtoInvolution Engine::proto_from_local(const std::vector<LocalAction> &parts) {
  std::vector<std::pair<Element, Element>> pairs;
  for (const LocalAction &part : parts) {
    for (const Element &g : part.gens) {
      if (part.kind == LocalAction::Kind::Fix)
        pairs.emplace_back(g, g);
      else
        pairs.emplace_back(g, box_.inv(g));
    }
  }
  return proto_from_pairs(pairs);
}

BlackBox Engine::augment_by_proto(const ProtoInvolution &proto, uint64_t salt) {
  auto flip_ops = std::make_shared<FlipOps>();
  BlackBox flip_box(flip_ops, BigUint(2), {flip_ops->flipped()}, mix_seed(box_.seed(), salt));
  auto pair_ops = proto.pair_ops;
  SemidirectProductOps::Action swap_action = [pair_ops](const Element &x, const Element &y) {
    if ((y.w.at(0) & 1u) == 0)
      return x;
    return pair_ops->pair(pair_ops->right(x), pair_ops->left(x));
  };
  return semidirect_product(proto.graph, flip_box, std::move(swap_action), salt);
}

Element Engine::augmented_flip(const BlackBox &augmented) const {
  const auto &ops = static_cast<const SemidirectProductOps &>(augmented.ops());
  Element id_pair = ops.left(augmented.identity());
  Element one;
  one.w = {1};
  return ops.pair(id_pair, one);
}

Engine::ZetaOut Engine::zeta_sample(
    const std::function<std::pair<Element, Element>()> &pairs) {
  auto [x, xphi] = pairs();
  Element g = box_.mul(xphi, box_.inv(x));
  if (eq(g, box_.identity()))
    return {x, true};  // x already centralizes phi
  // one power chain decides parity and provides the square root:
  // y = g^((n+1)/2) squares to g^(n+1), which is g exactly when g has odd order
  const BigUint &n = box_.exponent().n;
  Element y = power(box_, g, (n + BigUint(1)).shifted_right(1));
  if (eq(box_.mul(y, y), g))
    return {box_.mul(y, x), true};  // zeta_1
  // even order: g^n = y^2 g^-1, then square down to the involution
  Element gn = box_.mul(box_.mul(y, y), box_.inv(g));
  Element last = gn;
  for (;;) {
    Element sq = box_.mul(last, last);
    if (eq(sq, box_.identity()))
      return {last, true};  // zeta_0
    last = std::move(sq);
  }
}

InvolutionPoint Engine::build_point(const Element &s, bool require_w) {
  unsigned target = loglog_exponent() + 12;
  unsigned budget = 16 * (target + cfg_.confidence);
  BlackBox sampler = box_.fork(fresh_salt(), /*burnin_per_gen=*/8);
  auto pairs = [&]() {
    Element x = sampler.random();
    return std::make_pair(x, conj(x, s));
  };

  InvolutionPoint pt;
  pt.s = s;
  pt.torus_gens.push_back(s);  // s always lies in its torus
  const bool dedupe = box_.ops().canonical_encoding();
  std::unordered_set<std::vector<uint64_t>, WordsHash> seen;
  if (dedupe)
    seen.insert(s.w);
  std::vector<Element> reflections;
  unsigned torus_count = 0;
  bool have_w = false;
  bool have_rotation = false;  // an element of order > 2 pins the full torus
  for (unsigned i = 0;
       i < budget && (torus_count < target || !have_w || !have_rotation); ++i) {
    ZetaOut out = zeta_sample(pairs);
    if (!out.ok || eq(out.c, box_.identity()))
      continue;
    if (is_involution(out.c)) {
      if (!eq(out.c, s) && !have_w)
        reflections.push_back(out.c);
    } else {
      ++torus_count;  // a fresh draw counts toward the budgeted target either way
      have_rotation = true;
      if (dedupe && !seen.insert(out.c.w).second)
        continue;
      pt.torus_gens.push_back(out.c);
    }
    if (!have_w && !reflections.empty()) {
      // a centralizer involution other than s inverts the torus; verify on
      // the generators collected so far
      const Element &cand = reflections.back();
      bool inverts = true;
      for (const Element &g : pt.torus_gens) {
        if (!eq(conj(g, cand), box_.inv(g))) {
          inverts = false;
          break;
        }
      }
      if (inverts) {
        pt.w = cand;
        have_w = true;
      } else {
        reflections.pop_back();
      }
    }
  }
  if (!have_w) {
    if (require_w)
      throw RetryExhausted("point_of: no inverting involution found in centralizer");
    // degenerate abelian centralizer (C = <s>): s itself stands in for w
    pt.w = s;
    return pt;
  }
  // late torus generators must still be inverted by w
  for (const Element &g : pt.torus_gens) {
    if (!eq(conj(g, pt.w), box_.inv(g)))
      throw RetryExhausted("point_of: centralizer structure check failed");
  }
  return pt;
}

InvolutionPoint Engine::point_of(const Element &s) {
  if (!is_involution(s))
    throw std::invalid_argument("point_of: input is not an involution");
  if (cache_enabled_) {
    auto it = point_cache_.find(s.w);
    if (it != point_cache_.end())
      return it->second;
    if (point_cache_.size() >= kCacheCap)
      point_cache_.clear();
    InvolutionPoint pt = build_point(s, /*require_w=*/true);
    point_cache_.emplace(s.w, pt);
    return pt;
  }
  return build_point(s, /*require_w=*/true);
}

CentralizerBox Engine::centralizer_of_involution(const Element &t) {
  if (!is_involution(t))
    throw std::invalid_argument("centralizer_of_involution: input is not an involution");
  InvolutionPoint pt = build_point(t, /*require_w=*/false);
  std::vector<Element> gens = pt.torus_gens;
  gens.push_back(pt.w);
  return CentralizerBox{make_subgroup_box(box_, gens, fresh_salt()), std::move(pt)};
}

Element Engine::reify(ProtoInvolution &proto, const std::function<bool(const Element &)> &accept) {
  unsigned budget = 32 + 4 * cfg_.confidence;
  // candidate verification against sampled graph pairs when no predicate given
  std::vector<std::pair<Element, Element>> probes;
  auto verify_on_graph = [&](const Element &cand) {
    while (probes.size() < 8)
      probes.push_back(proto.sample());
    for (const auto &[a, aphi] : probes) {
      if (!eq(conj(a, cand), aphi))
        return false;
    }
    return true;
  };

  for (unsigned i = 0; i < budget; ++i) {
    ZetaOut out = zeta_sample([&]() { return proto.sample(); });
    if (!out.ok || eq(out.c, box_.identity()))
      continue;
    Element cand;
    if (is_involution(out.c))
      cand = out.c;
    else if (has_even_order(box_, out.c))
      cand = extract_involution(box_, out.c);
    else
      continue;
    bool good = accept ? accept(cand) : verify_on_graph(cand);
    if (good)
      return cand;
  }
  throw RetryExhausted("reify: no consistent central involution found");
}

SerendipityOutcome<Element> Engine::j_of(const Element &s_in, const Element &t_in) {
  if (eq(s_in, t_in))
    throw std::invalid_argument("j_of: inputs must be distinct involutions");
  // j is symmetric in its arguments; prefer an already-cached torus
  bool swap_args =
      cache_enabled_ && !point_cache_.count(s_in.w) && point_cache_.count(t_in.w);
  const Element &s = swap_args ? t_in : s_in;
  const Element &t = swap_args ? s_in : t_in;
  Element z = box_.mul(s, t);
  if (has_even_order(box_, z))
    return SerendipityOutcome<Element>::ok(extract_involution(box_, z));

  std::vector<uint64_t> key;
  if (cache_enabled_) {
    key = pair_key(s, t);
    auto it = j_cache_.find(key);
    if (it != j_cache_.end())
      return SerendipityOutcome<Element>::ok(it->second);
  }

  // odd-order z: j centralizes <z> and inverts the torus of s
  InvolutionPoint pt = point_of(s);
  std::vector<std::pair<Element, Element>> pairs;
  for (const Element &g : pt.torus_gens)
    pairs.emplace_back(g, box_.inv(g));
  pairs.emplace_back(z, z);
  ProtoInvolution proto = proto_from_pairs(pairs);

  auto accept = [&](const Element &cand) {
    return !eq(cand, box_.identity()) && commute(cand, s) && commute(cand, t);
  };
  try {
    Element j = reify(proto, accept);
    if (cache_enabled_) {
      if (j_cache_.size() >= kCacheCap)
        j_cache_.clear();
      j_cache_.emplace(std::move(key), j);
    }
    return SerendipityOutcome<Element>::ok(j);
  } catch (const RetryExhausted &) {
    return SerendipityOutcome<Element>::unipotent(UnipotentEvent{z, s, t});
  }
}

Element Engine::bisect(const Element &i, const Element &j) {
  if (!is_involution(i) || !is_involution(j))
    throw std::invalid_argument("bisect: inputs must be involutions");
  if (eq(i, j))
    return point_of(i).w;  // anything in C(i) besides i itself

  Element z = box_.mul(i, j);
  Element x;
  if (!has_even_order(box_, z)) {
    x = box_.mul(odd_sqrt(box_, z), j);
  } else {
    Element k = extract_involution(box_, z);
    InvolutionPoint pt = point_of(k);
    BlackBox torus = make_subgroup_box(box_, pt.torus_gens, fresh_salt(), /*burnin_per_gen=*/4);
    auto root = cyclic_sqrt_sampled(torus, z);
    if (!root)
      throw std::invalid_argument("bisect: inputs are not conjugate");
    x = box_.mul(*root, j);
  }
  if (!is_involution(x) || !eq(conj(i, x), j))
    throw std::invalid_argument("bisect: inputs are not conjugate");
  return x;
}

std::pair<Element, Element> Engine::as_two_involutions(const Element &x) {
  if (eq(x, box_.identity()) || is_involution(x))
    throw std::invalid_argument("as_two_involutions: need an element of order > 2");
  Element xinv = box_.inv(x);
  unsigned tries = 8 + cfg_.confidence / 4;
  for (unsigned attempt = 0; attempt < tries; ++attempt) {
    Element y = box_.random();
    if (eq(y, box_.identity()) || eq(y, x) || eq(y, xinv))
      continue;
    ProtoInvolution proto =
        proto_from_pairs({{x, xinv}, {y, box_.inv(y)}});
    auto accept = [&](const Element &cand) {
      return eq(conj(x, cand), xinv) && eq(conj(y, cand), box_.inv(y));
    };
    try {
      Element r = reify(proto, accept);
      Element rest = box_.mul(r, x);
      if (is_involution(rest))
        return {r, rest};
    } catch (const RetryExhausted &) {
      // serendipity or inconsistent choice of y: take a fresh y
    }
  }
  throw RetryExhausted("as_two_involutions: retry budget exhausted");
}

bool Engine::is_right_type(const Element &i, Element *order4) {
  if (!is_involution(i))
    throw std::invalid_argument("is_right_type: input is not an involution");
  BlackBox sampler = box_.fork(fresh_salt(), /*burnin_per_gen=*/8);
  auto pairs = [&]() {
    Element x = sampler.random();
    return std::make_pair(x, conj(x, i));
  };
  unsigned budget = 4 * (cfg_.confidence + 8);
  for (unsigned n = 0; n < budget; ++n) {
    ZetaOut out = zeta_sample(pairs);
    if (!out.ok)
      continue;
    if (two_height(box_, out.c) >= 2) {
      if (order4) {
        Element y = power(box_, out.c, box_.exponent().n);
        for (;;) {
          Element y2 = box_.mul(y, y);
          Element y4 = box_.mul(y2, y2);
          if (eq(y4, box_.identity()) && !eq(y2, box_.identity())) {
            *order4 = y;
            break;
          }
          y = std::move(y2);
        }
      }
      return true;
    }
  }
  return false;
}

std::optional<Element> Engine::zeta1_sample(const Element &t) {
  Element x = box_.random();
  Element g = box_.mul(conj(x, t), box_.inv(x));
  if (eq(g, box_.identity()) || has_even_order(box_, g))
    return std::nullopt;
  return box_.mul(odd_sqrt(box_, g), x);
}

Element Engine::find_involution_even_char() {
  auto odd_order_gt3 = [&]() {
    unsigned budget = 8 * (cfg_.confidence + 8);
    for (unsigned i = 0; i < budget; ++i) {
      Element y = box_.random();
      if (eq(y, box_.identity()) || has_even_order(box_, y))
        continue;
      Element y3 = box_.mul(box_.mul(y, y), y);
      if (eq(y3, box_.identity()))
        continue;
      return y;
    }
    throw RetryExhausted("find_involution_even_char: no odd-order element of order > 3");
  };

  unsigned outer = 8 + cfg_.confidence / 4;
  for (unsigned attempt = 0; attempt < outer; ++attempt) {
    Element y1 = odd_order_gt3();
    Element y2 = odd_order_gt3();
    if (commute(y1, y2))
      continue;
    ProtoInvolution proto =
        proto_from_pairs({{y1, box_.inv(y1)}, {y2, box_.inv(y2)}});
    unsigned budget = 16 + cfg_.confidence;
    for (unsigned i = 0; i < budget; ++i) {
      auto [a, aphi] = proto.sample();
      Element g = box_.mul(aphi, box_.inv(a));
      Element cand;
      if (eq(g, box_.identity()))
        cand = a;
      else if (has_even_order(box_, g))
        cand = extract_involution(box_, g);
      else
        cand = box_.mul(odd_sqrt(box_, g), a);  // lies in the Sylow 2-subgroup
      if (is_involution(cand))
        return cand;
    }
  }
  throw RetryExhausted("find_involution_even_char: retry budget exhausted");
}

}  // namespace bbg
