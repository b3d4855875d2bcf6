#pragma once

// Random exact inputs and independent reference computations for the tests.
// Oracles here deliberately avoid the library's contraction helpers: they
// evaluate on explicit vectors and orthonormal frames, or solve linear
// systems, so agreement is a genuine cross-check.

#include "hktlab/hktlab.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace hkt_test {

using namespace hktlab;

inline Rational random_rational(std::mt19937& rng, int range = 3, int max_den = 3) {
  std::uniform_int_distribution<int> num(-range, range), den(1, max_den);
  return Rational(num(rng), den(rng));
}

inline KForm random_form(std::mt19937& rng, std::size_t degree, std::size_t dim, double density = 0.6) {
  KForm f(degree, dim);
  std::bernoulli_distribution keep(density);
  for (std::size_t r = 0; r < f.size(); ++r)
    if (keep(rng)) f.entry(r) = random_rational(rng);
  return f;
}

inline Matrix random_matrix(std::mt19937& rng, std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = random_rational(rng, 2, 2);
  return m;
}

/// Unit upper-triangular times a signed permutation: always invertible, small
/// entries.
inline Matrix random_basis_change(std::mt19937& rng, std::size_t n) {
  Matrix u = Matrix::identity(n);
  std::uniform_int_distribution<int> small(-1, 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) u(i, j) = small(rng);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) p(perm[i], i) = (small(rng) >= 0) ? 1 : -1;
  return u * p;
}

/// 2-step nilpotent algebra: brackets of the first m basis vectors land in
/// the span of the remaining ones (Jacobi holds automatically).
inline LieAlgebra random_two_step(std::mt19937& rng, std::size_t dim, std::size_t m) {
  LieAlgebra L(dim);
  std::bernoulli_distribution keep(0.4);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = m; k < dim; ++k)
        if (keep(rng)) L.set_bracket(i, j, k, random_rational(rng));
  return L;
}

/// R acting on R^{dim-1} by a random derivation D: [e0, e_i] = D e_i.
inline LieAlgebra random_almost_abelian(std::mt19937& rng, std::size_t dim) {
  LieAlgebra L(dim);
  for (std::size_t i = 1; i < dim; ++i)
    for (std::size_t k = 1; k < dim; ++k) L.set_bracket(0, i, k, random_rational(rng, 2, 2));
  return L;
}

/// The same structure written in the basis e'_i = P e_i.
inline CatalogEntry change_basis(const CatalogEntry& e, const Matrix& P) {
  const Matrix Pinv = *inverse(P);
  const std::size_t n = e.dim();
  Tensor c = apply_in_slot(apply_in_slot(e.lie.constants(), 0, P), 1, P);
  c = apply_in_slot(c, 2, Pinv.transpose());
  LieAlgebra L(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) L.raw(i, j, k) = c(i, j, k);
  std::array<Matrix, 3> J;
  for (int s = 1; s <= 3; ++s) J[static_cast<std::size_t>(s - 1)] = Pinv * e.structure.j(s) * P;
  CatalogEntry out{e.name + "'", e.description, e.n, std::move(L),
                   HyperhermitianStructure{J, Metric(P.transpose() * e.structure.g.matrix() * P)}, e.expected};
  return out;
}

inline const CatalogEntry& builtin(const std::string& name) {
  static const std::vector<CatalogEntry> all = builtin_catalog();
  for (const auto& e : all)
    if (e.name == name) return e;
  throw Error("no builtin " + name);
}

/// u(2) + u(2) with a quaternionic triple that mixes the two summands: a
/// hyperhermitian structure whose J_s are not integrable.
inline CatalogEntry non_integrable8() {
  LieAlgebra L(8);
  for (std::size_t off : {0u, 4u}) {
    L.set_bracket(off + 1, off + 2, off + 3, 2);
    L.set_bracket(off + 1, off + 3, off + 2, -2);
    L.set_bracket(off + 2, off + 3, off + 1, 2);
  }
  const Matrix J1 = detail::int_matrix(8, {0, -1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0,  //
                                           0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0,  //
                                           0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0,    //
                                           0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1, 0});
  const Matrix J2 = detail::int_matrix(8, {0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0,  //
                                           -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0,  //
                                           0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1,  //
                                           0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0});
  return CatalogEntry{"mixed_u2u2", "non-integrable test structure", 2, std::move(L),
                      HyperhermitianStructure{{J1, J2, J1 * J2}, Metric::identity(8)}, {}};
}

inline Vector basis_vector(std::size_t i, std::size_t n) {
  Vector v(n);
  v[i] = 1;
  return v;
}

// ---------------------------------------------------------------------------
// Oracles

/// (a ^ b)(v_1..v_{k+l}) = 1/(k! l!) sum over all permutations.
inline Rational oracle_wedge_eval(const KForm& a, const KForm& b, const std::vector<Vector>& v) {
  const std::size_t k = a.degree(), l = b.degree();
  std::vector<std::size_t> perm(k + l);
  std::iota(perm.begin(), perm.end(), 0);
  Rational total;
  do {
    std::vector<Vector> va, vb;
    for (std::size_t i = 0; i < k; ++i) va.push_back(v[perm[i]]);
    for (std::size_t i = k; i < k + l; ++i) vb.push_back(v[perm[i]]);
    int inv = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j)
        if (perm[i] > perm[j]) ++inv;
    const Rational term = a.evaluate(va) * b.evaluate(vb);
    total += (inv % 2 == 0) ? term : Rational(-term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  Rational f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<long>(i);
  for (std::size_t i = 2; i <= l; ++i) f *= static_cast<long>(i);
  return total / f;
}

/// Levi-Civita as the unique solution of {metric, torsion-free} over all
/// n^3 lowered coefficients.
inline Tensor oracle_levi_civita(const LieAlgebra& L, const Metric& g) {
  const std::size_t n = L.dim();
  auto var = [n](std::size_t i, std::size_t j, std::size_t k) { return (i * n + j) * n + k; };
  std::vector<Vector> rows;
  Vector rhs;
  auto add_row = [&](Vector row, Rational b) {
    rows.push_back(std::move(row));
    rhs.push_back(std::move(b));
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        Vector r(n * n * n);
        r[var(i, j, k)] += 1;
        r[var(i, k, j)] += 1;
        add_row(r, Rational{});
        Vector t(n * n * n);
        t[var(i, j, k)] += 1;
        t[var(j, i, k)] -= 1;
        add_row(t, g(L.bracket(i, j), basis_vector(k, n)));
      }
  Matrix a(rows.size(), n * n * n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < n * n * n; ++c) a(r, c) = rows[r][c];
  const auto sol = solve(a, rhs);
  if (!sol.unique()) throw Error("oracle: Levi-Civita system not uniquely solvable");
  Tensor gamma(3, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) gamma(i, j, k) = sol.particular[var(i, j, k)];
  return gamma;
}

/// dF(X,Y,Z) = -F([X,Y],Z) + F([X,Z],Y) - F([Y,Z],X) on basis vectors.
inline Rational oracle_d2(const KForm& F, const LieAlgebra& L, std::size_t x, std::size_t y, std::size_t z) {
  const std::size_t n = L.dim();
  auto F2 = [&](const Vector& u, std::size_t w) { return F.evaluate({u, basis_vector(w, n)}); };
  return -F2(L.bracket(x, y), z) + F2(L.bracket(x, z), y) - F2(L.bracket(y, z), x);
}

/// T = J dF for integrable J: T(X,Y,Z) = -dF(JX,JY,JZ), summed explicitly.
inline Rational oracle_kt_torsion(const Endomorphism& J, const Metric& g, const LieAlgebra& L, std::size_t x,
                                  std::size_t y, std::size_t z) {
  const KForm F = fundamental_form(J, g);
  const std::size_t n = L.dim();
  Rational s;
  for (std::size_t p = 0; p < n; ++p) {
    if (J(p, x).is_zero()) continue;
    for (std::size_t q = 0; q < n; ++q) {
      if (J(q, y).is_zero()) continue;
      for (std::size_t r = 0; r < n; ++r)
        if (!J(r, z).is_zero()) s += J(p, x) * J(q, y) * J(r, z) * oracle_d2(F, L, p, q, r);
    }
  }
  return -s;
}

/// theta(X) = -1/2 sum_a T(JX, f_a, J f_a) over an orthonormal frame.
inline Rational oracle_lee(const KForm& T, const Endomorphism& J, const Metric& g, std::size_t x) {
  const auto frame = orthonormal_frame(g);
  const Vector jx = J.column(x);
  Rational s;
  for (const auto& f : frame) s += T.evaluate({jx, f, J.apply(f)});
  return Rational(-1, 2) * s;
}

/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z, lowered.
inline Tensor oracle_curvature(const Connection& C, const LieAlgebra& L, const Metric& g) {
  const std::size_t n = L.dim();
  Tensor r(4, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const Vector ei = basis_vector(i, n), ej = basis_vector(j, n), ek = basis_vector(k, n);
        const Vector a = C.apply(ei, C.apply(ej, ek));
        const Vector b = C.apply(ej, C.apply(ei, ek));
        const Vector c = C.apply(L.bracket(i, j), ek);
        Vector v(n);
        for (std::size_t m = 0; m < n; ++m) v[m] = a[m] - b[m] - c[m];
        for (std::size_t l = 0; l < n; ++l) r(i, j, k, l) = g(v, basis_vector(l, n));
      }
  return r;
}

/// Multilinear evaluation of a covariant tensor of any rank on vectors.
inline Rational eval_tensor(const Tensor& t, const std::vector<Vector>& args) {
  Rational s;
  for (std::size_t p = 0; p < t.size(); ++p) {
    if (t.flat(p).is_zero()) continue;
    const auto idx = t.index_of(p);
    Rational term = t.flat(p);
    for (std::size_t q = 0; q < idx.size() && !term.is_zero(); ++q) term *= args[q][idx[q]];
    s += term;
  }
  return s;
}

/// Ric(X,Y) = sum_a R(f_a, X, Y, f_a) over an orthonormal frame.
inline Rational oracle_ric(const Tensor& r, const Metric& g, std::size_t x, std::size_t y) {
  const std::size_t n = g.dim();
  Rational s;
  for (const auto& f : orthonormal_frame(g)) s += eval_tensor(r, {f, basis_vector(x, n), basis_vector(y, n), f});
  return s;
}

}  // namespace hkt_test
