#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "bbg/biguint.hpp"

namespace bbg {

/// Opaque element handle: fixed-length payload words plus the id of the
/// owning oracle. Equality of payloads is NOT element equality; only the
/// oracle's eq decides that (encodings need not be unique).
struct Element {
  std::vector<uint64_t> w;
  uint32_t box = 0;

  bool same_payload(const Element &rhs) const { return w == rhs.w; }
};

/// Tally of oracle calls, attached to leaf oracles only; derived boxes
/// (products, subgroups) delegate to their components, so leaf counts measure
/// real group-operation cost.
struct OpCounter {
  std::atomic<uint64_t> mul{0};
  std::atomic<uint64_t> inv{0};
  std::atomic<uint64_t> eq{0};

  uint64_t total() const { return mul.load() + inv.load() + eq.load(); }
  void reset() {
    mul.store(0);
    inv.store(0);
    eq.store(0);
  }
};

/// The oracle interface: multiply, invert, compare, identity.
class GroupOps {
public:
  virtual ~GroupOps() = default;

  Element mul(const Element &a, const Element &b) const {
    if (counter_)
      counter_->mul.fetch_add(1, std::memory_order_relaxed);
    return do_mul(a, b);
  }
  Element inv(const Element &a) const {
    if (counter_)
      counter_->inv.fetch_add(1, std::memory_order_relaxed);
    return do_inv(a);
  }
  bool eq(const Element &a, const Element &b) const {
    if (counter_)
      counter_->eq.fetch_add(1, std::memory_order_relaxed);
    return do_eq(a, b);
  }
  const Element &identity() const { return identity_; }

  uint32_t box_id() const { return box_id_; }
  /// True when equal elements always have equal payloads; keyed caches are
  /// only sound in that case.
  virtual bool canonical_encoding() const { return true; }

  const std::shared_ptr<OpCounter> &counter() const { return counter_; }

protected:
  GroupOps();
  void set_identity(Element e) { identity_ = std::move(e); }
  void enable_counter() { counter_ = std::make_shared<OpCounter>(); }

  virtual Element do_mul(const Element &a, const Element &b) const = 0;
  virtual Element do_inv(const Element &a) const = 0;
  virtual bool do_eq(const Element &a, const Element &b) const = 0;

private:
  Element identity_;
  uint32_t box_id_;
  std::shared_ptr<OpCounter> counter_;
};

/// Global exponent E = 2^m * n with n odd.
struct Exponent {
  BigUint E;
  size_t m = 0;
  BigUint n;

  Exponent() = default;
  explicit Exponent(BigUint e);
};

/// Product-replacement sampler (rattle variant) over a generating set.
class Sampler {
public:
  Sampler(std::shared_ptr<const GroupOps> ops, std::vector<Element> generators, uint64_t seed,
          unsigned slots = 10, unsigned burnin_per_gen = 50);

  Element next();
  uint64_t draw_u64() { return rng_(); }
  const std::vector<Element> &generators() const { return generators_; }
  uint64_t seed() const { return seed_; }

private:
  void step();

  std::shared_ptr<const GroupOps> ops_;
  std::vector<Element> generators_;
  std::vector<Element> slots_;
  Element accumulator_;
  std::mt19937_64 rng_;
  uint64_t seed_;
};

/// A black box group: oracle + global exponent + sampler.
/// Oracle calls are pure; random() mutates only this box's sampler, so
/// concurrent users must each own a fork.
class BlackBox {
public:
  BlackBox(std::shared_ptr<const GroupOps> ops, BigUint exponent, std::vector<Element> generators,
           uint64_t seed, unsigned burnin_per_gen = 50);

  const GroupOps &ops() const { return *ops_; }
  const std::shared_ptr<const GroupOps> &ops_ptr() const { return ops_; }
  const Exponent &exponent() const { return exp_; }

  Element mul(const Element &a, const Element &b) const { return ops_->mul(a, b); }
  Element inv(const Element &a) const { return ops_->inv(a); }
  bool eq(const Element &a, const Element &b) const { return ops_->eq(a, b); }
  const Element &identity() const { return ops_->identity(); }
  Element conj(const Element &x, const Element &g) const;  // g^-1 x g

  Element random() { return sampler_.next(); }
  uint64_t draw_u64() { return sampler_.draw_u64(); }

  const std::vector<Element> &generators() const { return sampler_.generators(); }
  uint64_t seed() const { return sampler_.seed(); }

  /// Same oracle and exponent, independent sampler stream. Internal
  /// machinery passes a light burn-in; user-facing sampling keeps the
  /// default.
  BlackBox fork(uint64_t salt, unsigned burnin_per_gen = 50) const;

private:
  std::shared_ptr<const GroupOps> ops_;
  Exponent exp_;
  Sampler sampler_;
};

/// Subgroup box: inherits the parent's oracle and exponent, samples the
/// subgroup generated by the given elements.
BlackBox make_subgroup_box(const BlackBox &parent, std::vector<Element> generators,
                           uint64_t seed_salt = 1, unsigned burnin_per_gen = 50);

uint64_t mix_seed(uint64_t seed, uint64_t salt);

/// x^e by square-and-multiply.
Element power(const BlackBox &box, const Element &x, const BigUint &e);

/// Order parity against the exponent decomposition: odd iff x^n = 1.
bool has_even_order(const BlackBox &box, const Element &x);

/// The involution in <x> for x of even order: the last non-identity term of
/// x^n, x^2n, x^4n, ...
Element extract_involution(const BlackBox &box, const Element &x);

/// The unique square root of an odd-order x in <x>: x^((n+1)/2).
Element odd_sqrt(const BlackBox &box, const Element &x);

/// 2-height of x: the l with |x^n| = 2^l.
size_t two_height(const BlackBox &box, const Element &x);

/// Square root of z inside <x>, when one exists there (Tonelli-Shanks on the
/// cyclic group <x>). Requires z in <x>; absent means no root in <x>.
std::optional<Element> cyclic_sqrt(const BlackBox &box, const Element &x, const Element &z);

/// Same, for a cyclic group presented only by a sampler: an element of
/// maximal 2-height is located by sampling (at least half of a cyclic group
/// attains the maximum, so `samples` draws fail with probability 2^-samples).
std::optional<Element> cyclic_sqrt_sampled(BlackBox &cyclic_box, const Element &z,
                                           unsigned samples = 64);

}  // namespace bbg
