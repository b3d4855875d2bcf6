#pragma once

// Hyperhermitian structures: quaternion relations, Nijenhuis tensors,
// fundamental 2-forms, KT torsion and the HKT test, the (1,2)+(2,1) type
// identities and the Bismut connection.

#include "hktlab/check.hpp"
#include "hktlab/invariant_geometry.hpp"

#include <array>
#include <optional>
#include <string>

namespace hktlab {

struct HyperhermitianStructure {
  std::array<Endomorphism, 3> J;
  Metric g;

  std::size_t dim() const { return g.dim(); }
  /// J_s for s = 1, 2, 3.
  const Endomorphism& j(int s) const { return J[static_cast<std::size_t>(s - 1)]; }
};

/// J_s^2 = -id, J1 J2 = -J2 J1 = J3, g(J_s., J_s.) = g.
inline Check quaternionic_check(const HyperhermitianStructure& H) {
  Check c{"quaternionic", "J_s^2 = -id, J1 J2 = -J2 J1 = J3, g(J_s X, J_s Y) = g(X, Y)"};
  const std::size_t n = H.dim();
  const Matrix minus_id = -Matrix::identity(n);
  for (int s = 1; s <= 3; ++s) {
    if (H.j(s).rows() != n || H.j(s).cols() != n) {
      fail_once(c, "J" + std::to_string(s) + " has wrong shape");
      return c;
    }
  }
  for (int s = 1; s <= 3; ++s)
    if (H.j(s) * H.j(s) != minus_id) fail_once(c, "J" + std::to_string(s) + "^2 != -id");
  if (H.j(1) * H.j(2) != H.j(3)) fail_once(c, "J1J2 != J3");
  if (H.j(2) * H.j(1) != -H.j(3)) fail_once(c, "J2J1 != -J3");
  for (int s = 1; s <= 3; ++s)
    if (H.j(s).transpose() * H.g.matrix() * H.j(s) != H.g.matrix())
      fail_once(c, "g not J" + std::to_string(s) + "-invariant");
  return c;
}

struct Nijenhuis {
  Tensor raised;   // N^k_{ij}
  Tensor lowered;  // g(N(e_i,e_j), e_k)
  std::optional<KForm> form;
  bool is_zero() const { return raised.is_zero(); }
};

/// N_J(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y].
inline Nijenhuis nijenhuis(const Endomorphism& J, const LieAlgebra& L, const Metric& g) {
  const std::size_t n = L.dim();
  Nijenhuis out{Tensor(3, n), Tensor(3, n), std::nullopt};
  for (std::size_t i = 0; i < n; ++i) {
    const Vector ji = J.column(i);
    Vector ei(n);
    ei[i] = 1;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vector jj = J.column(j);
      Vector ej(n);
      ej[j] = 1;
      const Vector a = L.bracket(ji, jj);
      const Vector b = J.apply(L.bracket(ji, ej));
      const Vector c = J.apply(L.bracket(ei, jj));
      for (std::size_t k = 0; k < n; ++k) {
        const Rational v = a[k] - b[k] - c[k] - L(i, j, k);
        out.raised(i, j, k) = v;
        out.raised(j, i, k) = -v;
      }
    }
  }
  out.lowered = g.lower_last(out.raised);
  if (KForm::is_antisymmetric(out.lowered)) out.form = KForm::from_tensor(out.lowered);
  return out;
}

/// Returns the first s in {1,2,3} with N_{J_s} != 0, or nullopt when all
/// three are integrable.
inline std::optional<int> integrability_check(const HyperhermitianStructure& H, const LieAlgebra& L) {
  for (int s = 1; s <= 3; ++s)
    if (!nijenhuis(H.j(s), L, H.g).is_zero()) return s;
  return std::nullopt;
}

/// F(X,Y) = g(X, JY).
inline KForm fundamental_form(const Endomorphism& J, const Metric& g) {
  const Matrix f = g.matrix() * J;
  const std::size_t n = g.dim();
  Tensor t(2, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t(i, j) = f(i, j);
  if (!KForm::is_antisymmetric(t)) throw Error("g(., J.) is not antisymmetric: J is not g-orthogonal");
  return KForm::from_tensor(t);
}

inline std::array<KForm, 3> fundamental_forms(const HyperhermitianStructure& H) {
  return {fundamental_form(H.j(1), H.g), fundamental_form(H.j(2), H.g), fundamental_form(H.j(3), H.g)};
}

/// Torsion of the hermitian connection with skew torsion: T = J dF + N_J.
inline KForm kt_torsion(const Endomorphism& J, const LieAlgebra& L, const Metric& g) {
  const Nijenhuis N = nijenhuis(J, L, g);
  if (!N.form) throw Error("no compatible skew-torsion connection: N_J is not a 3-form");
  return j_twist(ce_differential(fundamental_form(J, g), L), J) + *N.form;
}

struct HktResult {
  bool ok = false;
  std::optional<KForm> torsion;
  std::string failure;
  bool integrable = false;  // N_{J_s} = 0 for all s, re-derived after success
  /// Some metric connection with skew torsion preserves g and every J_s:
  /// each N_{J_s} is a 3-form and the J_s dF_s + N_s coincide. Weaker than
  /// HKT when the J_s are not integrable.
  bool skew_connection = false;
};

namespace detail {
inline std::string first_difference(const std::array<KForm, 3>& t, const char* label) {
  for (int s = 2; s <= 3; ++s) {
    const KForm& other = t[static_cast<std::size_t>(s - 1)];
    if (other == t[0]) continue;
    for (std::size_t p = 0; p < t[0].size(); ++p)
      if (t[0].entry(p) != other.entry(p)) {
        const auto idx = t[0].sorted_tuple(p);
        return std::string(label) + "1 != " + label + std::to_string(s) + " at " +
               index_tuple({idx[0], idx[1], idx[2]}) + ": " + to_string(t[0].entry(p)) + " vs " +
               to_string(other.entry(p));
      }
  }
  return "";
}
}  // namespace detail

/// HKT test: J1 dF1 = J2 dF2 = J3 dF3, whose common value is the torsion.
/// Agreement forces the J_s to be integrable; this is re-derived from the
/// Nijenhuis tensors after success.
inline HktResult hkt_check(const HyperhermitianStructure& H, const LieAlgebra& L) {
  HktResult r;
  std::array<KForm, 3> jdf, kt;
  bool nijenhuis_forms = true;
  for (int s = 1; s <= 3; ++s) {
    const auto i = static_cast<std::size_t>(s - 1);
    jdf[i] = j_twist(ce_differential(fundamental_form(H.j(s), H.g), L), H.j(s));
    const Nijenhuis N = nijenhuis(H.j(s), L, H.g);
    if (N.form) kt[i] = jdf[i] + *N.form;
    else nijenhuis_forms = false;
  }
  r.skew_connection = nijenhuis_forms && detail::first_difference(kt, "T").empty();
  r.failure = detail::first_difference(jdf, "T");
  if (!r.failure.empty()) return r;
  r.ok = true;
  r.torsion = jdf[0];
  r.integrable = !integrability_check(H, L).has_value();
  return r;
}

/// P^- a = 1/4 [a - a(JX,JY,Z) - a(JX,Y,JZ) - a(X,JY,JZ)], the (3,0)+(0,3)
/// part of a real 3-tensor.
inline Tensor minus_projection(const Tensor& a, const Endomorphism& J) {
  const Tensor j0 = apply_in_slot(a, 0, J);
  const Tensor j01 = apply_in_slot(j0, 1, J);
  const Tensor j02 = apply_in_slot(j0, 2, J);
  const Tensor j12 = apply_in_slot(apply_in_slot(a, 1, J), 2, J);
  Tensor out = a - j01 - j02 - j12;
  out *= Rational(1, 4);
  return out;
}

/// Both families of the (1,2)+(2,1) identities:
///   T(X,Y,Z) - T(JX,JY,Z) - T(JX,Y,JZ) - T(X,JY,JZ) = 0 for J = J_1, J_2, J_3, and
///   T(J_iX,J_iY,Z) - T(J_kX,J_kY,Z) + T(J_kX,J_iY,J_jZ) + T(J_iX,J_kY,J_jZ) = 0
/// for (i,j,k) a cyclic permutation of (1,2,3), with J1 J2 = J3.
inline Check type_check_12_21(const KForm& T, const HyperhermitianStructure& H) {
  Check c{"type_12_21", "torsion has type (1,2)+(2,1) for every J_s"};
  const Tensor t = T.to_tensor();
  for (int s = 1; s <= 3 && c.ok; ++s) {
    const Tensor p = minus_projection(t, H.j(s));
    const std::size_t at = p.first_nonzero();
    if (at < p.size()) {
      const auto idx = p.index_of(at);
      fail_once(c, "J" + std::to_string(s) + " family at " + index_tuple({idx[0], idx[1], idx[2]}));
    }
  }
  const int cyc[3][3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
  for (const auto& ijk : cyc) {
    if (!c.ok) break;
    const Endomorphism &Ji = H.j(ijk[0]), &Jj = H.j(ijk[1]), &Jk = H.j(ijk[2]);
    const Tensor a = apply_in_slot(apply_in_slot(t, 0, Ji), 1, Ji);
    const Tensor b = apply_in_slot(apply_in_slot(t, 0, Jk), 1, Jk);
    const Tensor d = apply_in_slot(apply_in_slot(apply_in_slot(t, 0, Jk), 1, Ji), 2, Jj);
    const Tensor e = apply_in_slot(apply_in_slot(apply_in_slot(t, 0, Ji), 1, Jk), 2, Jj);
    const Tensor r = a - b + d + e;
    const std::size_t at = r.first_nonzero();
    if (at < r.size()) {
      const auto idx = r.index_of(at);
      fail_once(c, "mixed family (" + std::to_string(ijk[0]) + "," + std::to_string(ijk[1]) + "," +
                       std::to_string(ijk[2]) + ") at " + index_tuple({idx[0], idx[1], idx[2]}));
    }
  }
  return c;
}

/// nabla = nabla^g + 1/2 T.
inline Connection bismut_connection(const KForm& T, const LieAlgebra& L, const Metric& g) {
  Tensor gamma = levi_civita(L, g).lowered();
  Tensor half = T.to_tensor();
  half *= Rational(1, 2);
  gamma += half;
  return Connection::from_lowered(std::move(gamma), g);
}

/// J dF^- = -3/4 N_J, where dF^- is the (3,0)+(0,3) part of dF. Requires N_J
/// to be a 3-form.
inline Check df_minus_relation(const Endomorphism& J, const LieAlgebra& L, const Metric& g) {
  Check c{"df_minus", "J dF^- = -3/4 N_J"};
  const Nijenhuis N = nijenhuis(J, L, g);
  if (!N.form) {
    fail_once(c, "N_J is not a 3-form");
    return c;
  }
  const Tensor dfm = minus_projection(ce_differential(fundamental_form(J, g), L).to_tensor(), J);
  Tensor lhs = dfm;
  for (std::size_t s = 0; s < 3; ++s) lhs = apply_in_slot(lhs, s, J);
  lhs *= Rational(-1);
  Tensor rhs = N.lowered;
  rhs *= Rational(-3, 4);
  const Tensor diff = lhs - rhs;
  const std::size_t at = diff.first_nonzero();
  if (at < diff.size()) {
    const auto idx = diff.index_of(at);
    fail_once(c, index_tuple({idx[0], idx[1], idx[2]}));
  }
  return c;
}

}  // namespace hktlab
