#include "bbg/matrix_oracle.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bbg {

namespace {

uint64_t hash_words(const std::vector<uint64_t> &w, uint64_t h) {
  for (uint64_t x : w) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
  }
  return h;
}

BigUint psl2_exponent(const ExplicitField &f) {
  const BigUint &q = f.q();
  return q * (q * q - BigUint(1));
}

}  // namespace

MatrixGroupOps::MatrixGroupOps(ExplicitField field, MatrixKind kind, PayloadEncoding enc)
    : field_(std::move(field)), kind_(kind), enc_(enc) {
  enable_counter();
  Matrix2 id{field_.one(), field_.zero(), field_.zero(), field_.one()};
  set_identity(encode(id));
}

Matrix2 MatrixGroupOps::decode(const Element &e) const {
  unsigned k = field_.k();
  if (e.w.size() != static_cast<size_t>(4) * k)
    throw std::invalid_argument("matrix oracle: foreign element payload");
  Matrix2 m;
  for (unsigned i = 0; i < 4; ++i)
    m[i].c.assign(e.w.begin() + static_cast<long>(i) * k, e.w.begin() + static_cast<long>(i + 1) * k);
  return m;
}

Element MatrixGroupOps::encode(const Matrix2 &m) const {
  Element e;
  e.box = box_id();
  e.w.reserve(static_cast<size_t>(4) * field_.k());
  for (const FieldValue &v : m)
    e.w.insert(e.w.end(), v.c.begin(), v.c.end());
  return e;
}

Matrix2 MatrixGroupOps::normalized(Matrix2 m) const {
  for (auto &entry : m) {
    if (!field_.is_zero(entry)) {
      if (field_.is_one(entry))
        return m;
      FieldValue s = field_.inv(entry);
      for (auto &x : m)
        x = field_.mul(x, s);
      return m;
    }
  }
  throw std::invalid_argument("matrix oracle: zero matrix");
}

Element MatrixGroupOps::finish(Matrix2 m, uint64_t scramble_key) const {
  if (enc_ == PayloadEncoding::Canonical)
    return encode(normalized(std::move(m)));
  // keep a payload-dependent nonzero scalar in the representative
  const BigUint &q = field_.q();
  uint64_t span = q.fits_u64() ? q.as_u64() : ~0ull;
  FieldValue s = field_.zero();
  uint64_t idx = scramble_key;
  do {
    idx = mix_seed(idx, 0x5c7aull);
    s = field_.element_at(idx % span);
  } while (field_.is_zero(s));
  for (auto &x : m)
    x = field_.mul(x, s);
  return encode(m);
}

Element MatrixGroupOps::do_mul(const Element &a, const Element &b) const {
  Matrix2 x = decode(a);
  Matrix2 y = decode(b);
  const ExplicitField &F = field_;
  Matrix2 r{
      F.add(F.mul(x[0], y[0]), F.mul(x[1], y[2])), F.add(F.mul(x[0], y[1]), F.mul(x[1], y[3])),
      F.add(F.mul(x[2], y[0]), F.mul(x[3], y[2])), F.add(F.mul(x[2], y[1]), F.mul(x[3], y[3]))};
  return finish(std::move(r), hash_words(b.w, hash_words(a.w, 0xAB1Eull)));
}

Element MatrixGroupOps::do_inv(const Element &a) const {
  Matrix2 x = decode(a);
  // adjugate: projectively equal to the inverse
  Matrix2 r{x[3], field_.neg(x[1]), field_.neg(x[2]), x[0]};
  return finish(std::move(r), hash_words(a.w, 0x17671ull));
}

bool MatrixGroupOps::do_eq(const Element &a, const Element &b) const {
  if (enc_ == PayloadEncoding::Canonical)
    return a.w == b.w;
  Matrix2 x = normalized(decode(a));
  Matrix2 y = normalized(decode(b));
  return x == y;
}

Element MatrixGroupOps::element_from_matrix(const Matrix2 &m) const {
  const ExplicitField &F = field_;
  FieldValue det = F.sub(F.mul(m[0], m[3]), F.mul(m[1], m[2]));
  if (F.is_zero(det))
    throw std::invalid_argument("matrix oracle: singular matrix");
  if (kind_ == MatrixKind::PSL2 && !F.is_one(det))
    throw std::invalid_argument("matrix oracle: PSL2 element must have determinant 1");
  Matrix2 copy = m;
  return finish(std::move(copy), hash_words(det.c, 0xE1E4ull));
}

Matrix2 MatrixGroupOps::matrix_of(const Element &e) const { return normalized(decode(e)); }

std::string MatrixGroupOps::element_to_json(const Element &e) const {
  Matrix2 m = matrix_of(e);
  nlohmann::json j = nlohmann::json::array();
  for (const FieldValue &v : m)
    j.push_back(v.c);
  return j.dump();
}

Element MatrixGroupOps::element_from_json(const std::string &text) const {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_array() || j.size() != 4)
    throw std::invalid_argument("matrix element: expected 4 entries");
  Matrix2 m;
  for (unsigned i = 0; i < 4; ++i)
    m[i] = field_.element(j[i].get<std::vector<uint64_t>>());
  // wire form carries the normalized representative, so the determinant is
  // det/lambda^2; class membership in PSL2 means det is a nonzero square
  FieldValue det = field_.sub(field_.mul(m[0], m[3]), field_.mul(m[1], m[2]));
  if (field_.is_zero(det))
    throw std::invalid_argument("matrix element: singular matrix");
  if (kind_ == MatrixKind::PSL2 && !field_.is_square(det))
    throw std::invalid_argument("matrix element: class is not in PSL2");
  return finish(std::move(m), hash_words(det.c, 0xE1E4ull));
}

namespace {

std::vector<Element> psl2_generators(const MatrixGroupOps &ops) {
  const ExplicitField &F = ops.field();
  std::vector<Element> gens;
  for (unsigned i = 0; i < F.k(); ++i) {
    std::vector<uint64_t> coeffs(F.k(), 0);
    coeffs[i] = 1;
    FieldValue s = F.element(coeffs);
    gens.push_back(ops.element_from_matrix({F.one(), s, F.zero(), F.one()}));
    gens.push_back(ops.element_from_matrix({F.one(), F.zero(), s, F.one()}));
  }
  return gens;
}

FieldValue first_nonsquare(const ExplicitField &F) {
  for (uint64_t idx = 1;; ++idx) {
    FieldValue v = F.element_at(idx);
    if (!F.is_zero(v) && !F.is_square(v))
      return v;
  }
}

}  // namespace

BlackBox make_psl2_box(const ExplicitField &field, uint64_t seed, PayloadEncoding enc) {
  if (field.q() < BigUint(4))
    throw std::invalid_argument("make_psl2_box: need q >= 4");
  auto ops = std::make_shared<MatrixGroupOps>(field, MatrixKind::PSL2, enc);
  return BlackBox(ops, psl2_exponent(field), psl2_generators(*ops), seed);
}

BlackBox make_pgl2_box(const ExplicitField &field, uint64_t seed, PayloadEncoding enc) {
  if (field.p() == 2)
    throw std::invalid_argument("make_pgl2_box: odd characteristic required");
  auto ops = std::make_shared<MatrixGroupOps>(field, MatrixKind::PGL2, enc);
  std::vector<Element> gens = psl2_generators(*ops);
  const ExplicitField &F = field;
  gens.push_back(ops->element_from_matrix({F.one(), F.zero(), F.zero(), first_nonsquare(F)}));
  return BlackBox(ops, psl2_exponent(field), std::move(gens), seed);
}

DirectProductOps::DirectProductOps(std::shared_ptr<const GroupOps> a,
                                   std::shared_ptr<const GroupOps> b)
    : a_(std::move(a)), b_(std::move(b)), la_(a_->identity().w.size()) {
  set_identity(pair(a_->identity(), b_->identity()));
}

Element DirectProductOps::pair(const Element &a, const Element &b) const {
  Element e;
  e.box = box_id();
  e.w.reserve(a.w.size() + b.w.size());
  e.w.insert(e.w.end(), a.w.begin(), a.w.end());
  e.w.insert(e.w.end(), b.w.begin(), b.w.end());
  return e;
}

Element DirectProductOps::left(const Element &p) const {
  Element e;
  e.box = a_->box_id();
  e.w.assign(p.w.begin(), p.w.begin() + static_cast<long>(la_));
  return e;
}

Element DirectProductOps::right(const Element &p) const {
  Element e;
  e.box = b_->box_id();
  e.w.assign(p.w.begin() + static_cast<long>(la_), p.w.end());
  return e;
}

Element DirectProductOps::do_mul(const Element &a, const Element &b) const {
  return pair(a_->mul(left(a), left(b)), b_->mul(right(a), right(b)));
}

Element DirectProductOps::do_inv(const Element &a) const {
  return pair(a_->inv(left(a)), b_->inv(right(a)));
}

bool DirectProductOps::do_eq(const Element &a, const Element &b) const {
  return a_->eq(left(a), left(b)) && b_->eq(right(a), right(b));
}

BlackBox direct_product(const BlackBox &A, const BlackBox &B, uint64_t seed_salt) {
  auto ops = std::make_shared<DirectProductOps>(A.ops_ptr(), B.ops_ptr());
  std::vector<Element> gens;
  for (const Element &g : A.generators())
    gens.push_back(ops->pair(g, B.identity()));
  for (const Element &h : B.generators())
    gens.push_back(ops->pair(A.identity(), h));
  BigUint E = BigUint::lcm(A.exponent().E, B.exponent().E);
  return BlackBox(ops, std::move(E), std::move(gens), mix_seed(A.seed(), seed_salt));
}

SemidirectProductOps::SemidirectProductOps(std::shared_ptr<const GroupOps> a,
                                           std::shared_ptr<const GroupOps> b, Action action)
    : a_(std::move(a)), b_(std::move(b)), action_(std::move(action)), la_(a_->identity().w.size()) {
  set_identity(pair(a_->identity(), b_->identity()));
}

Element SemidirectProductOps::pair(const Element &a, const Element &b) const {
  Element e;
  e.box = box_id();
  e.w.reserve(a.w.size() + b.w.size());
  e.w.insert(e.w.end(), a.w.begin(), a.w.end());
  e.w.insert(e.w.end(), b.w.begin(), b.w.end());
  return e;
}

Element SemidirectProductOps::left(const Element &p) const {
  Element e;
  e.box = a_->box_id();
  e.w.assign(p.w.begin(), p.w.begin() + static_cast<long>(la_));
  return e;
}

Element SemidirectProductOps::right(const Element &p) const {
  Element e;
  e.box = b_->box_id();
  e.w.assign(p.w.begin() + static_cast<long>(la_), p.w.end());
  return e;
}

Element SemidirectProductOps::do_mul(const Element &x, const Element &y) const {
  Element y1_inv = b_->inv(right(x));
  Element twisted = action_(left(y), y1_inv);
  return pair(a_->mul(left(x), twisted), b_->mul(right(x), right(y)));
}

Element SemidirectProductOps::do_inv(const Element &x) const {
  return pair(action_(a_->inv(left(x)), right(x)), b_->inv(right(x)));
}

bool SemidirectProductOps::do_eq(const Element &a, const Element &b) const {
  return a_->eq(left(a), left(b)) && b_->eq(right(a), right(b));
}

BlackBox semidirect_product(const BlackBox &A, const BlackBox &B,
                            SemidirectProductOps::Action action, uint64_t seed_salt) {
  auto ops = std::make_shared<SemidirectProductOps>(A.ops_ptr(), B.ops_ptr(), std::move(action));
  std::vector<Element> gens;
  for (const Element &g : A.generators())
    gens.push_back(ops->pair(g, B.identity()));
  for (const Element &h : B.generators())
    gens.push_back(ops->pair(A.identity(), h));
  BigUint E = A.exponent().E * B.exponent().E;
  return BlackBox(ops, std::move(E), std::move(gens), mix_seed(A.seed(), seed_salt));
}

BlackBox graph_subgroup(const BlackBox &product_box, std::vector<Element> pairs,
                        uint64_t seed_salt) {
  if (pairs.empty())
    throw std::invalid_argument("graph_subgroup: empty generating set");
  return make_subgroup_box(product_box, std::move(pairs), seed_salt);
}

BlackBox GroupSpec::instantiate() const {
  BlackBox box = kind == MatrixKind::PSL2 ? make_psl2_box(field, seed, encoding)
                                          : make_pgl2_box(field, seed, encoding);
  if (!E.is_zero() && E != box.exponent().E)
    return BlackBox(box.ops_ptr(), E, box.generators(), seed);
  return box;
}

std::string GroupSpec::to_json() const {
  nlohmann::json j;
  j["type"] = kind == MatrixKind::PSL2 ? "PSL2" : "PGL2";
  j["field"] = nlohmann::json::parse(field.to_json());
  j["E"] = (E.is_zero() ? psl2_exponent(field) : E).to_decimal();
  j["seed"] = seed;
  j["encoding"] = encoding == PayloadEncoding::Canonical ? "canonical" : "scrambled";
  return j.dump(2);
}

GroupSpec GroupSpec::from_json(const std::string &text) {
  nlohmann::json j = nlohmann::json::parse(text);
  GroupSpec spec;
  std::string type = j.at("type").get<std::string>();
  if (type == "PSL2")
    spec.kind = MatrixKind::PSL2;
  else if (type == "PGL2")
    spec.kind = MatrixKind::PGL2;
  else
    throw std::invalid_argument("group spec: unknown type " + type);
  spec.field = ExplicitField::from_json(j.at("field").dump());
  if (j.contains("E"))
    spec.E = BigUint::from_decimal(j.at("E").get<std::string>());
  if (j.contains("seed"))
    spec.seed = j.at("seed").get<uint64_t>();
  if (j.contains("encoding")) {
    std::string enc = j.at("encoding").get<std::string>();
    if (enc == "canonical")
      spec.encoding = PayloadEncoding::Canonical;
    else if (enc == "scrambled")
      spec.encoding = PayloadEncoding::Scrambled;
    else
      throw std::invalid_argument("group spec: unknown encoding " + enc);
  }
  return spec;
}

}  // namespace bbg
