#include "bbg/adjoint.hpp"

namespace bbg {

namespace {
constexpr unsigned kMaxDepth = 40;
}

Adjoint::Adjoint(FieldK &K, BigUint q) : K_(K), q_(std::move(q)) {}

Matrix3K Adjoint::identity_matrix() {
  Matrix3K r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r.at(i, j) = i == j ? K_.one() : K_.zero();
  return r;
}

Matrix3K Adjoint::so3k_mul(const Matrix3K &a, const Matrix3K &b) {
  Matrix3K r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      FieldElementK acc = K_.zero();
      for (int k = 0; k < 3; ++k)
        acc = K_.add(acc, K_.mul(a.at(i, k), b.at(k, j)).value()).value();
      r.at(i, j) = acc;
    }
  }
  return r;
}

Matrix3K Adjoint::so3k_transpose(const Matrix3K &a) {
  Matrix3K r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r.at(i, j) = a.at(j, i);
  return r;
}

FieldElementK Adjoint::so3k_det(const Matrix3K &a) {
  auto mul2 = [&](const FieldElementK &x, const FieldElementK &y) { return K_.mul(x, y).value(); };
  FieldElementK t0 = mul2(a.at(0, 0), K_.add(mul2(a.at(1, 1), a.at(2, 2)),
                                             K_.neg(mul2(a.at(1, 2), a.at(2, 1))))
                                          .value());
  FieldElementK t1 = mul2(a.at(0, 1), K_.add(mul2(a.at(1, 0), a.at(2, 2)),
                                             K_.neg(mul2(a.at(1, 2), a.at(2, 0))))
                                          .value());
  FieldElementK t2 = mul2(a.at(0, 2), K_.add(mul2(a.at(1, 0), a.at(2, 1)),
                                             K_.neg(mul2(a.at(1, 1), a.at(2, 0))))
                                          .value());
  return K_.add(K_.add(t0, K_.neg(t1)).value(), t2).value();
}

bool Adjoint::matrix_eq(const Matrix3K &a, const Matrix3K &b) {
  for (int i = 0; i < 9; ++i)
    if (!K_.eq(a.m[i], b.m[i]))
      return false;
  return true;
}

bool Adjoint::so3k_check(const Matrix3K &a) {
  if (!K_.eq(so3k_det(a), K_.one()))
    return false;
  Matrix3K prod = so3k_mul(a, so3k_transpose(a));
  return matrix_eq(prod, identity_matrix());
}

std::array<FieldElementK, 3> Adjoint::homogeneous_coordinates(const Element &x) {
  Engine &eng = K_.engine();
  BlackBox &box = eng.box();
  const SpinorFrame &f = K_.frame();
  if (box.eq(x, f.e3))
    return {K_.zero(), K_.zero(), K_.one()};
  if (box.eq(x, f.e1))
    return {K_.one(), K_.zero(), K_.zero()};
  if (box.eq(x, f.e2))
    return {K_.zero(), K_.one(), K_.zero()};
  if (eng.commute(x, f.e3)) {
    // on the line at infinity: coordinates of any affine point of e3 v x
    PlaneLine l = K_.plane().join(f.e3, x);
    for (int i = 0; i < 64; ++i) {
      Element xp = K_.plane().sample_point(l);
      if (box.eq(xp, f.e3) || eng.commute(xp, f.e3))
        continue;
      auto [a, b] = K_.coordinates(xp);
      return {a, b, K_.zero()};
    }
    throw RetryExhausted("homogeneous_coordinates: no affine point on the direction line");
  }
  auto [a, b] = K_.coordinates(x);
  return {a, b, K_.one()};
}

bool Adjoint::general_position(const Element &x) const {
  Engine &eng = K_.engine();
  const SpinorFrame &f = K_.frame();
  return !eng.commute(x, f.e1) && !eng.commute(x, f.e2) && !eng.commute(x, f.e3);
}

Matrix3K Adjoint::rho(const Element &x) {
  Engine &eng = K_.engine();
  BlackBox &box = eng.box();
  if (box.eq(x, box.identity()))
    return identity_matrix();
  if (eng.is_involution(x))
    return rho_involution(x, 0);
  auto [r1, r2] = eng.as_two_involutions(x);
  return so3k_mul(rho_involution(r1, 0), rho_involution(r2, 0));
}

Matrix3K Adjoint::rho_involution(const Element &x, unsigned depth) {
  if (depth > kMaxDepth)
    throw RetryExhausted("rho: conjugation recursion exhausted");
  Engine &eng = K_.engine();
  BlackBox &box = eng.box();
  const SpinorFrame &f = K_.frame();

  // the frame involutions have fixed diagonal matrices
  const Element *frame_elts[3] = {&f.e1, &f.e2, &f.e3};
  for (int i = 0; i < 3; ++i) {
    if (box.eq(x, *frame_elts[i])) {
      if (!frame_images_[i]) {
        Matrix3K m = identity_matrix();
        for (int j = 0; j < 3; ++j)
          if (j != i)
            m.at(j, j) = K_.neg(K_.one());
        frame_images_[i] = m;
      }
      return *frame_images_[i];
    }
  }

  if (!general_position(x)) {
    // conjugate into general position: x = v w v with w = x^v
    for (unsigned tries = 0; tries < 32; ++tries) {
      Element v = eng.find_involution();
      if (!general_position(v))
        continue;
      Element w = eng.conj(x, v);
      if (!general_position(w))
        continue;
      Matrix3K V = rho_involution(v, depth + 1);
      Matrix3K W = rho_involution(w, depth + 1);
      return so3k_mul(so3k_mul(V, W), V);
    }
    throw RetryExhausted("rho: no general-position conjugator found");
  }

  // rows: normalized coordinates of e_i^x
  std::array<std::array<FieldElementK, 3>, 3> rows;
  for (int i = 0; i < 3; ++i) {
    Element image = eng.conj(*frame_elts[i], x);
    auto u = homogeneous_coordinates(image);
    FieldElementK norm = K_.zero();
    for (int j = 0; j < 3; ++j)
      norm = K_.add(norm, K_.mul(u[j], u[j]).value()).value();
    // the true row is a unit vector, so norm = lambda^2 and the root exists
    auto c = K_.sqrt(K_.inv(norm), q_);
    if (!c)
      throw std::runtime_error("rho: row norm is not a square (oracle?)");
    for (int j = 0; j < 3; ++j)
      rows[i][j] = K_.mul(u[j], *c).value();
  }

  // resolve signs: the unique choice making the matrix a symmetric element
  // of SO3(K). Rows are unit and mutually orthogonal by construction (the
  // conjugated frame axes are), so symmetry plus det = 1 pins the matrix;
  // the global flip changes the determinant in odd dimension, hence all
  // eight vectors are scanned
  for (int mask = 0; mask < 8; ++mask) {
    Matrix3K cand;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        cand.at(i, j) = (mask >> i) & 1 ? K_.neg(rows[i][j]) : rows[i][j];
    bool symmetric = K_.eq(cand.at(0, 1), cand.at(1, 0)) &&
                     K_.eq(cand.at(0, 2), cand.at(2, 0)) &&
                     K_.eq(cand.at(1, 2), cand.at(2, 1));
    if (symmetric && K_.eq(so3k_det(cand), K_.one()))
      return cand;
  }
  throw std::runtime_error("rho: no sign class yields a symmetric SO3(K) involution");
}

bool Adjoint::matrix_general_position(const Matrix3K &r) {
  for (int i = 0; i < 3; ++i) {
    Matrix3K ei = identity_matrix();
    for (int j = 0; j < 3; ++j)
      if (j != i)
        ei.at(j, j) = K_.neg(K_.one());
    if (matrix_eq(so3k_mul(r, ei), so3k_mul(ei, r)))
      return false;
  }
  return true;
}

Element Adjoint::rho_inverse(const Matrix3K &r) {
  Engine &eng = K_.engine();
  BlackBox &box = eng.box();
  if (!so3k_check(r))
    throw std::invalid_argument("rho_inverse: matrix is not in SO3(K)");
  if (matrix_eq(r, identity_matrix()))
    return box.identity();
  if (matrix_eq(r, so3k_transpose(r)))
    return rho_inverse_involution(r, 0);
  auto [R1, R2] = matrix_as_two_involutions(r);
  return box.mul(rho_inverse_involution(R1, 0), rho_inverse_involution(R2, 0));
}

Element Adjoint::rho_inverse_involution(const Matrix3K &r, unsigned depth) {
  if (depth > kMaxDepth)
    throw RetryExhausted("rho_inverse: conjugation recursion exhausted");
  Engine &eng = K_.engine();
  BlackBox &box = eng.box();
  const SpinorFrame &f = K_.frame();

  const Element *frame_elts[3] = {&f.e1, &f.e2, &f.e3};
  for (int i = 0; i < 3; ++i) {
    Matrix3K ei = identity_matrix();
    for (int j = 0; j < 3; ++j)
      if (j != i)
        ei.at(j, j) = K_.neg(K_.one());
    if (matrix_eq(r, ei))
      return *frame_elts[i];
  }

  if (!matrix_general_position(r)) {
    for (unsigned tries = 0; tries < 32; ++tries) {
      Element v = eng.find_involution();
      if (!general_position(v))
        continue;
      Matrix3K V = rho_involution(v, depth + 1);
      Matrix3K conj = so3k_mul(so3k_mul(V, r), V);
      if (!matrix_general_position(conj))
        continue;
      Element s = rho_inverse_involution(conj, depth + 1);
      return eng.conj(s, v);
    }
    throw RetryExhausted("rho_inverse: no general-position conjugator found");
  }

  // plane points for the rows; e_i^s = s_i pins s
  std::array<Element, 3> s_pts;
  for (int i = 0; i < 3; ++i) {
    FieldElementK pt =
        K_.point_from_homogeneous(r.at(i, 0), r.at(i, 1), r.at(i, 2));
    if (!pt.is_regular())
      throw std::invalid_argument("rho_inverse: row landed on the quadric");
    s_pts[i] = *pt.regular;
  }

  Element t1 = eng.bisect(f.e1, s_pts[0]);
  Element e2p = eng.conj(s_pts[1], t1);
  if (!eng.commute(e2p, f.e1))
    throw std::runtime_error("rho_inverse: transported row does not centralize e1");

  // solve e2^y = e2' inside the dihedral C(e1)
  InvolutionPoint pt1 = eng.point_of(f.e1);
  BlackBox torus = make_subgroup_box(box, pt1.torus_gens, eng.fresh_salt(), /*burnin_per_gen=*/4);
  Element z = box.mul(f.e2, e2p);
  std::vector<Element> ys;
  if (auto root = cyclic_sqrt_sampled(torus, z))
    ys.push_back(*root);
  if (auto root = cyclic_sqrt_sampled(torus, box.inv(z)))
    ys.push_back(box.mul(*root, f.e2));
  const Element e_cands[4] = {box.identity(), f.e1, f.e2, f.e3};
  for (const Element &y : ys) {
    for (const Element &eps : e_cands) {
      Element cand = box.mul(box.mul(eps, y), t1);
      if (!eng.is_involution(cand))
        continue;
      bool ok = true;
      for (int i = 0; i < 3 && ok; ++i)
        ok = box.eq(eng.conj(*frame_elts[i], cand), s_pts[i]);
      if (ok)
        return cand;
    }
  }
  throw std::invalid_argument("rho_inverse: matrix is not in the image of rho");
}

std::pair<Matrix3K, Matrix3K> Adjoint::matrix_as_two_involutions(const Matrix3K &r) {
  // axis: kernel vector of (r - I), then a half-turn around a non-isotropic
  // perpendicular inverts r
  Matrix3K m = r;
  for (int i = 0; i < 3; ++i)
    m.at(i, i) = K_.add(m.at(i, i), K_.neg(K_.one())).value();

  // Gaussian elimination for the kernel of m
  std::array<FieldElementK, 3> axis{K_.zero(), K_.zero(), K_.zero()};
  {
    // rows of m as equations; eliminate
    std::array<std::array<FieldElementK, 3>, 3> a;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        a[i][j] = m.at(i, j);
    int pivot_row = 0;
    std::array<int, 3> pivot_col{-1, -1, -1};
    for (int col = 0; col < 3 && pivot_row < 3; ++col) {
      int found = -1;
      for (int row = pivot_row; row < 3; ++row)
        if (!K_.is_zero(a[row][col])) {
          found = row;
          break;
        }
      if (found < 0)
        continue;
      std::swap(a[pivot_row], a[found]);
      FieldElementK inv_p = K_.inv(a[pivot_row][col]);
      for (int j = 0; j < 3; ++j)
        a[pivot_row][j] = K_.mul(a[pivot_row][j], inv_p).value();
      for (int row = 0; row < 3; ++row) {
        if (row == pivot_row || K_.is_zero(a[row][col]))
          continue;
        FieldElementK factor = a[row][col];
        for (int j = 0; j < 3; ++j)
          a[row][j] =
              K_.add(a[row][j], K_.neg(K_.mul(factor, a[pivot_row][j]).value())).value();
      }
      pivot_col[pivot_row] = col;
      ++pivot_row;
    }
    // free column -> kernel vector
    std::array<bool, 3> is_pivot{false, false, false};
    for (int i = 0; i < pivot_row; ++i)
      is_pivot[pivot_col[i]] = true;
    int free_col = -1;
    for (int c = 0; c < 3; ++c)
      if (!is_pivot[c])
        free_col = c;
    if (free_col < 0)
      throw std::invalid_argument("matrix_as_two_involutions: no fixed axis (not in SO3?)");
    axis[free_col] = K_.one();
    for (int i = 0; i < pivot_row; ++i)
      axis[pivot_col[i]] = K_.neg(a[i][free_col]);
  }

  // non-isotropic w perpendicular to the axis
  auto dot = [&](const std::array<FieldElementK, 3> &u, const std::array<FieldElementK, 3> &v) {
    FieldElementK acc = K_.zero();
    for (int i = 0; i < 3; ++i)
      acc = K_.add(acc, K_.mul(u[i], v[i]).value()).value();
    return acc;
  };
  std::array<std::array<FieldElementK, 3>, 3> perp_cands{
      std::array<FieldElementK, 3>{K_.neg(axis[1]), axis[0], K_.zero()},
      std::array<FieldElementK, 3>{K_.zero(), K_.neg(axis[2]), axis[1]},
      std::array<FieldElementK, 3>{axis[2], K_.zero(), K_.neg(axis[0])}};
  std::array<FieldElementK, 3> w{K_.zero(), K_.zero(), K_.zero()};
  bool have_w = false;
  for (auto &cand : perp_cands) {
    bool zero = K_.is_zero(cand[0]) && K_.is_zero(cand[1]) && K_.is_zero(cand[2]);
    if (!zero && !K_.is_zero(dot(cand, cand))) {
      w = cand;
      have_w = true;
      break;
    }
  }
  if (!have_w) {
    // combine two independent perpendiculars u + lambda v until non-isotropic
    for (uint64_t lam = 1; lam < 64 && !have_w; ++lam) {
      FieldElementK l = K_.residue_image(BigUint(lam)).value();
      std::array<FieldElementK, 3> cand;
      for (int i = 0; i < 3; ++i)
        cand[i] = K_.add(perp_cands[0][i], K_.mul(l, perp_cands[1][i]).value()).value();
      bool zero = K_.is_zero(cand[0]) && K_.is_zero(cand[1]) && K_.is_zero(cand[2]);
      if (!zero && !K_.is_zero(dot(cand, cand))) {
        w = cand;
        have_w = true;
      }
    }
  }
  if (!have_w)
    throw RetryExhausted("matrix_as_two_involutions: no non-isotropic perpendicular found");

  // R1 = 2 w w^T / <w,w> - I
  FieldElementK scale = K_.mul(K_.residue_image(BigUint(2)).value(), K_.inv(dot(w, w))).value();
  Matrix3K R1 = identity_matrix();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      FieldElementK term = K_.mul(K_.mul(w[i], w[j]).value(), scale).value();
      R1.at(i, j) = i == j ? K_.add(term, K_.neg(K_.one())).value() : term;
    }
  }
  Matrix3K R2 = so3k_mul(R1, r);
  return {R1, R2};
}

FieldElementK Adjoint::standard_to_k(const BigUint &p, const BigUint &residue) {
  if (!checked_p_ || *checked_p_ != p) {
    FieldElementK img_p = K_.residue_image(p).value();
    if (!K_.is_zero(img_p))
      throw std::invalid_argument("standard_to_k: p does not match the characteristic of K");
    checked_p_ = p;
  }
  return K_.residue_image(residue).value();
}

}  // namespace bbg
