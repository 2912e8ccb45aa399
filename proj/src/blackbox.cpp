#include "bbg/blackbox.hpp"

#include <stdexcept>

namespace bbg {

namespace {
std::atomic<uint32_t> next_box_id{1};
}

GroupOps::GroupOps() : box_id_(next_box_id.fetch_add(1)) {}

Exponent::Exponent(BigUint e) : E(std::move(e)) {
  if (E.is_zero())
    throw std::invalid_argument("Exponent: E must be positive");
  m = E.two_adic_valuation();
  n = E.shifted_right(m);
}

uint64_t mix_seed(uint64_t seed, uint64_t salt) {
  // splitmix64 finalizer over the pair
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Sampler::Sampler(std::shared_ptr<const GroupOps> ops, std::vector<Element> generators,
                 uint64_t seed, unsigned slots, unsigned burnin_per_gen)
    : ops_(std::move(ops)),
      generators_(std::move(generators)),
      accumulator_(ops_->identity()),
      rng_(seed),
      seed_(seed) {
  if (generators_.empty())
    throw std::invalid_argument("Sampler: empty generating set");
  unsigned n = std::max<unsigned>(slots, static_cast<unsigned>(generators_.size()));
  slots_.reserve(n);
  for (unsigned i = 0; i < n; ++i)
    slots_.push_back(generators_[i % generators_.size()]);
  unsigned burnin = burnin_per_gen * static_cast<unsigned>(generators_.size());
  for (unsigned i = 0; i < burnin; ++i)
    step();
}

void Sampler::step() {
  size_t n = slots_.size();
  size_t i = rng_() % n;
  size_t j = rng_() % (n - 1);
  if (j >= i)
    ++j;
  const Element &other = (rng_() & 1u) ? slots_[j] : ops_->inv(slots_[j]);
  slots_[i] = (rng_() & 1u) ? ops_->mul(slots_[i], other) : ops_->mul(other, slots_[i]);
  accumulator_ = (rng_() & 1u) ? ops_->mul(accumulator_, slots_[i])
                               : ops_->mul(slots_[i], accumulator_);
}

Element Sampler::next() {
  step();
  return accumulator_;
}

BlackBox::BlackBox(std::shared_ptr<const GroupOps> ops, BigUint exponent,
                   std::vector<Element> generators, uint64_t seed, unsigned burnin_per_gen)
    : ops_(std::move(ops)),
      exp_(std::move(exponent)),
      sampler_(ops_, std::move(generators), seed, 10, burnin_per_gen) {}

Element BlackBox::conj(const Element &x, const Element &g) const {
  return mul(mul(inv(g), x), g);
}

BlackBox BlackBox::fork(uint64_t salt, unsigned burnin_per_gen) const {
  return BlackBox(ops_, exp_.E, sampler_.generators(), mix_seed(sampler_.seed(), salt),
                  burnin_per_gen);
}

BlackBox make_subgroup_box(const BlackBox &parent, std::vector<Element> generators,
                           uint64_t seed_salt, unsigned burnin_per_gen) {
  if (generators.empty())
    throw std::invalid_argument("make_subgroup_box: empty generating set");
  return BlackBox(parent.ops_ptr(), parent.exponent().E, std::move(generators),
                  mix_seed(parent.seed(), seed_salt), burnin_per_gen);
}

Element power(const BlackBox &box, const Element &x, const BigUint &e) {
  Element r = box.identity();
  if (e.is_zero())
    return r;
  size_t bits = e.bit_length();
  for (size_t i = bits; i-- > 0;) {
    r = box.mul(r, r);
    if (e.bit(i))
      r = box.mul(r, x);
  }
  return r;
}

bool has_even_order(const BlackBox &box, const Element &x) {
  return !box.eq(power(box, x, box.exponent().n), box.identity());
}

Element extract_involution(const BlackBox &box, const Element &x) {
  Element y = power(box, x, box.exponent().n);
  if (box.eq(y, box.identity()))
    throw std::invalid_argument("extract_involution: element has odd order");
  for (;;) {
    Element y2 = box.mul(y, y);
    if (box.eq(y2, box.identity()))
      return y;
    y = std::move(y2);
  }
}

Element odd_sqrt(const BlackBox &box, const Element &x) {
  const BigUint &n = box.exponent().n;
  return power(box, x, (n + BigUint(1)).shifted_right(1));
}

size_t two_height(const BlackBox &box, const Element &x) {
  Element y = power(box, x, box.exponent().n);
  size_t l = 0;
  while (!box.eq(y, box.identity())) {
    y = box.mul(y, y);
    ++l;
  }
  return l;
}

namespace {

// Tonelli-Shanks loop inside a cyclic group, given an element g whose
// 2-height l is maximal there.
std::optional<Element> tonelli_shanks(const BlackBox &box, const Element &z, const Element &g,
                                      size_t l) {
  const BigUint &n = box.exponent().n;
  Element a = power(box, z, (n + BigUint(1)).shifted_right(1));
  Element b = power(box, z, n);
  Element c = power(box, g, n);

  auto order_exponent = [&](const Element &e) {
    // least d with e^(2^d) = identity, capped at l
    Element t = e;
    size_t d = 0;
    while (!box.eq(t, box.identity())) {
      t = box.mul(t, t);
      if (++d > l)
        break;
    }
    return d;
  };

  size_t d = order_exponent(b);
  while (d != 0) {
    if (d >= l)
      return std::nullopt;  // z has maximal 2-height: not a square here
    Element step = c;
    for (size_t i = 0; i + d + 1 < l; ++i)
      step = box.mul(step, step);
    a = box.mul(a, step);
    Element step2 = box.mul(step, step);
    b = box.mul(b, step2);
    c = step2;
    l = d;
    d = order_exponent(b);
  }
  if (!box.eq(box.mul(a, a), z))
    return std::nullopt;
  return a;
}

}  // namespace

std::optional<Element> cyclic_sqrt(const BlackBox &box, const Element &x, const Element &z) {
  if (box.eq(z, box.identity()))
    return box.identity();
  // a generator realizes the maximal 2-height of its own cyclic group
  size_t l = two_height(box, x);
  if (l == 0) {
    Element a = odd_sqrt(box, z);
    if (box.eq(box.mul(a, a), z))
      return a;
    return std::nullopt;
  }
  return tonelli_shanks(box, z, x, l);
}

std::optional<Element> cyclic_sqrt_sampled(BlackBox &cyclic_box, const Element &z,
                                           unsigned samples) {
  if (cyclic_box.eq(z, cyclic_box.identity()))
    return cyclic_box.identity();
  Element best = cyclic_box.identity();
  size_t best_l = 0;
  for (const Element &g : cyclic_box.generators()) {
    size_t l = two_height(cyclic_box, g);
    if (l > best_l) {
      best_l = l;
      best = g;
    }
  }
  for (unsigned i = 0; i < samples; ++i) {
    Element g = cyclic_box.random();
    size_t l = two_height(cyclic_box, g);
    if (l > best_l) {
      best_l = l;
      best = g;
    }
  }
  if (best_l == 0) {
    Element a = odd_sqrt(cyclic_box, z);
    if (cyclic_box.eq(cyclic_box.mul(a, a), z))
      return a;
    return std::nullopt;
  }
  return tonelli_shanks(cyclic_box, z, best, best_l);
}

}  // namespace bbg
