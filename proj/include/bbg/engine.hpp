#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bbg/blackbox.hpp"
#include "bbg/matrix_oracle.hpp"

namespace bbg {

/// Monte-Carlo retry budget exhausted; the caller may retry with another seed.
class RetryExhausted : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A geometric construction left the involution plane: the product u = s*t of
/// the two witness involutions is a nontrivial unipotent element.
struct UnipotentEvent {
  Element u;
  Element s;
  Element t;
};

/// Either a value or a serendipitous unipotent discovery.
template <typename T>
class SerendipityOutcome {
public:
  static SerendipityOutcome ok(T v) {
    SerendipityOutcome o;
    o.value_ = std::move(v);
    return o;
  }
  static SerendipityOutcome unipotent(UnipotentEvent e) {
    SerendipityOutcome o;
    o.event_ = std::move(e);
    return o;
  }

  bool is_ok() const { return value_.has_value(); }
  const T &value() const { return *value_; }
  T &value() { return *value_; }
  const UnipotentEvent &event() const { return *event_; }

private:
  std::optional<T> value_;
  std::optional<UnipotentEvent> event_;
};

/// Black box subgroup of X x X encrypting the graph of an involutive
/// automorphism: samples come out as pairs (x, x^phi).
struct ProtoInvolution {
  BlackBox graph;
  std::shared_ptr<const DirectProductOps> pair_ops;

  std::pair<Element, Element> sample() {
    Element p = graph.random();
    return {pair_ops->left(p), pair_ops->right(p)};
  }
};

/// Local piece of an automorphism for amalgamation: phi restricted to the
/// subgroup generated by `gens` is the identity or inversion.
struct LocalAction {
  enum class Kind { Fix, Invert };
  std::vector<Element> gens;
  Kind kind;
};

/// Regular point of the involution plane: the triple (s, T_s, w) with T_s the
/// torus of C(s) = T_s x| <w> and w an involution inverting T_s.
struct InvolutionPoint {
  Element s;
  std::vector<Element> torus_gens;
  Element w;
};

/// Centralizer of an involution with its dihedral structure.
struct CentralizerBox {
  BlackBox box;
  InvolutionPoint structure;
};

struct EngineConfig {
  unsigned confidence = 20;  // per-operation failure bound ~2^-confidence
};

struct WordsHash {
  size_t operator()(const std::vector<uint64_t> &w) const {
    uint64_t h = 0x9ae16a3b2f90404full;
    for (uint64_t x : w) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h = (h ^ (h >> 29)) * 0xff51afd7ed558ccdull;
    }
    return static_cast<size_t>(h);
  }
};

/// Involution-centric machinery over one black box group. Owns its sampler
/// forks and caches; use one engine per thread.
class Engine {
public:
  explicit Engine(const BlackBox &box, EngineConfig cfg = {}, uint64_t salt = 0);

  BlackBox &box() { return box_; }
  const BlackBox &box() const { return box_; }
  const EngineConfig &config() const { return cfg_; }

  bool eq(const Element &a, const Element &b) const { return box_.eq(a, b); }
  Element conj(const Element &x, const Element &g) const { return box_.conj(x, g); }
  bool is_involution(const Element &x) const {
    return !eq(x, box_.identity()) && eq(box_.mul(x, x), box_.identity());
  }
  bool commute(const Element &a, const Element &b) const {
    return eq(box_.mul(a, b), box_.mul(b, a));
  }

  /// An involution from random even-order elements.
  Element find_involution();

  /// The PSL2(2^n) involution finder: amalgamated inversion on two odd-order
  /// cyclic subgroups, then any involution of the resulting centralizer
  /// (a Sylow 2-subgroup).
  Element find_involution_even_char();

  /// Graph of conjugation by t, generated over the box's generating set.
  ProtoInvolution conjugation_proto(const Element &t);
  ProtoInvolution proto_from_pairs(const std::vector<std::pair<Element, Element>> &pairs);
  ProtoInvolution proto_from_local(const std::vector<LocalAction> &parts);

  /// F x| {1, swap}; encrypts G x| <phi>.
  BlackBox augment_by_proto(const ProtoInvolution &proto, uint64_t salt = 5);
  Element augmented_flip(const BlackBox &augmented) const;

  /// Point data for an involution; cached per element when payloads are
  /// canonical.
  InvolutionPoint point_of(const Element &s);

  CentralizerBox centralizer_of_involution(const Element &t);

  /// Realize the involution whose conjugation action the proto describes.
  /// `accept` dismisses wrong candidates (for j(s,t): commutation with s and
  /// t); when absent, candidates are checked against sampled graph pairs.
  Element reify(ProtoInvolution &proto,
                const std::function<bool(const Element &)> &accept = nullptr);

  /// The unique involution commuting with both s and t, or the unipotent
  /// witness u = st when it does not exist.
  SerendipityOutcome<Element> j_of(const Element &s, const Element &t);

  /// An involution x with i^x = j, for conjugate involutions i, j.
  Element bisect(const Element &i, const Element &j);

  /// Writes x (|x| > 2) as a product of two involutions.
  std::pair<Element, Element> as_two_involutions(const Element &x);

  /// True iff C(i) contains an order-4 element (one-sided Monte Carlo);
  /// the witness, when found, has order 4 and squares to i.
  bool is_right_type(const Element &i, Element *order4 = nullptr);

  /// One zeta_1 attempt for conjugation by t: sqrt(x^t x^-1) * x when the
  /// commutator-like product has odd order. Uniform over C(t) when defined.
  std::optional<Element> zeta1_sample(const Element &t);

  uint64_t fresh_salt() { return salt_counter_++; }

  /// ~log2(log2(E)), the generator-count scale of the centralizer machinery.
  unsigned loglog_exponent() const;

private:
  struct ZetaOut {
    Element c;
    bool ok = false;
  };
  ZetaOut zeta_sample(const std::function<std::pair<Element, Element>()> &pairs);
  InvolutionPoint build_point(const Element &s, bool require_w);
  const std::shared_ptr<const DirectProductOps> &square_ops();

  BlackBox box_;
  EngineConfig cfg_;
  uint64_t salt_counter_ = 1;
  std::optional<BlackBox> square_box_;  // X x X, built lazily
  std::shared_ptr<const DirectProductOps> square_ops_;

  std::unordered_map<std::vector<uint64_t>, InvolutionPoint, WordsHash> point_cache_;
  std::unordered_map<std::vector<uint64_t>, Element, WordsHash> j_cache_;
  bool cache_enabled_;
};

}  // namespace bbg
