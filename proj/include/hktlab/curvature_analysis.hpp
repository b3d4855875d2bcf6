#pragma once

// Lee form, Ricci-type contractions of curvature, the identities satisfied by
// the Obata curvature of an HKT structure, scalar-curvature identities built
// from dT, Chern torsion norms, and the obstruction / vanishing verdicts.

#include "hktlab/check.hpp"
#include "hktlab/obata.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hktlab {

enum class LeeClass { Balanced, ClosedNonzero, NonClosed };

inline const char* to_string(LeeClass c) {
  switch (c) {
    case LeeClass::Balanced: return "balanced";
    case LeeClass::ClosedNonzero: return "closed_nonzero";
    case LeeClass::NonClosed: return "nonclosed";
  }
  return "?";
}

struct LeeForm {
  KForm theta;
  KForm d_theta;
  LeeClass classification = LeeClass::Balanced;
};

/// theta_s(X) = -1/2 sum_a T(J_s X, e_a, J_s e_a) for one s.
inline KForm lee_candidate(const KForm& T, const Endomorphism& J, const Metric& g) {
  const Tensor tw = apply_in_slot(apply_in_slot(T.to_tensor(), 0, J), 2, J);
  KForm theta(1, g.dim());
  for (std::size_t x = 0; x < g.dim(); ++x) {
    Rational s;
    for (const auto& e : g.inverse_entries()) s += e.value * tw(x, e.i, e.j);
    theta.set({x}, Rational(-1, 2) * s);
  }
  return theta;
}

/// Lee form of an HKT torsion. The three J_s candidates must agree.
inline LeeForm lee_form(const KForm& T, const HyperhermitianStructure& H, const LieAlgebra& L) {
  LeeForm out;
  out.theta = lee_candidate(T, H.j(1), H.g);
  for (int s = 2; s <= 3; ++s)
    if (lee_candidate(T, H.j(s), H.g) != out.theta)
      throw Error("not HKT torsion: Lee forms of J1 and J" + std::to_string(s) + " differ");
  out.d_theta = ce_differential(out.theta, L);
  if (out.theta.is_zero()) out.classification = LeeClass::Balanced;
  else if (out.d_theta.is_zero()) out.classification = LeeClass::ClosedNonzero;
  else out.classification = LeeClass::NonClosed;
  return out;
}

struct RicciPackage {
  Tensor ric;                  // Ric(X,Y) = sum_a R(e_a,X,Y,e_a)
  Tensor rho;                  // rho(X,Y) = sum_a R(X,Y,e_a,e_a)
  std::array<Tensor, 3> rho_s;  // rho_s(X,Y) = 1/2 sum_a R(X,Y,e_a,J_s e_a)
  Rational scal;               // sum_a Ric(e_a,e_a)
  std::array<Rational, 3> scal_s;  // sum_a Ric(J_s e_a, e_a)
};

/// sum_a t(J e_a, e_a) for a 2-tensor t (J = nullptr means identity).
inline Rational frame_trace(const Tensor& t, const Metric& g, const Endomorphism* J = nullptr) {
  const Tensor tw = J ? apply_in_slot(t, 0, *J) : t;
  Rational s;
  for (const auto& e : g.inverse_entries()) s += e.value * tw(e.i, e.j);
  return s;
}

inline RicciPackage ricci_package(const Curvature& R, const HyperhermitianStructure& H) {
  const std::size_t n = H.dim();
  const Metric& g = H.g;
  RicciPackage p;
  p.ric = Tensor(2, n);
  p.rho = Tensor(2, n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (const auto& e : g.inverse_entries()) {
        p.ric(x, y) += e.value * R(e.i, x, y, e.j);
        p.rho(x, y) += e.value * R(x, y, e.i, e.j);
      }
  for (int s = 1; s <= 3; ++s) {
    const Tensor rj = apply_in_slot(R.r, 3, H.j(s));
    Tensor rs(2, n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        Rational v;
        for (const auto& e : g.inverse_entries()) v += e.value * rj(x, y, e.i, e.j);
        rs(x, y) = Rational(1, 2) * v;
      }
    p.rho_s[static_cast<std::size_t>(s - 1)] = std::move(rs);
    p.scal_s[static_cast<std::size_t>(s - 1)] = frame_trace(p.ric, g, &H.j(s));
  }
  p.scal = frame_trace(p.ric, g);
  return p;
}

namespace detail {
inline void expect_zero(Check& c, const Tensor& t, const std::string& prefix = "") {
  const std::size_t at = t.first_nonzero();
  if (at >= t.size()) return;
  const auto idx = t.index_of(at);
  std::string where = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) where += (i ? "," : "") + std::to_string(idx[i]);
  fail_once(c, prefix + where + ")");
}

inline Tensor transpose2(const Tensor& t) {
  const std::size_t perm[2] = {1, 0};
  return t.permuted(perm);
}
}  // namespace detail

/// Identities satisfied by the Obata curvature of an HKT structure.
inline std::vector<Check> obata_identity_suite(const RicciPackage& p, const LeeForm& lee,
                                               const HyperhermitianStructure& H) {
  std::vector<Check> out;
  const Tensor dth = lee.d_theta.to_tensor();
  const Tensor ric_t = detail::transpose2(p.ric);

  Check riob{"ric_rho_s", "Ric(J_s X, J_s Y) + Ric(Y, X) = 2 rho_s(J_s X, Y)"};
  for (int s = 1; s <= 3; ++s) {
    const Endomorphism& J = H.j(s);
    Tensor lhs = apply_in_slot(apply_in_slot(p.ric, 0, J), 1, J) + ric_t;
    Tensor rhs = apply_in_slot(p.rho_s[static_cast<std::size_t>(s - 1)], 0, J);
    rhs *= Rational(2);
    detail::expect_zero(riob, lhs - rhs, "s=" + std::to_string(s) + " ");
  }
  out.push_back(riob);

  Check skew{"ric_skew_rho", "Ric(X, Y) - Ric(Y, X) = -rho(X, Y)"};
  detail::expect_zero(skew, p.ric - ric_t + p.rho);
  out.push_back(skew);

  Check ric_dth{"ric_eq_dtheta", "Ric^ob = d theta"};
  detail::expect_zero(ric_dth, p.ric - dth);
  out.push_back(ric_dth);

  Check rho_dth{"rho_eq_m2dtheta", "rho^ob = -2 d theta"};
  detail::expect_zero(rho_dth, p.rho + Rational(2) * dth);
  out.push_back(rho_dth);

  Check rhos{"rho_s_zero", "rho^ob_s = 0"};
  for (int s = 1; s <= 3; ++s)
    detail::expect_zero(rhos, p.rho_s[static_cast<std::size_t>(s - 1)], "s=" + std::to_string(s) + " ");
  out.push_back(rhos);

  Check dth11{"dtheta_11", "d theta(J_s X, J_s Y) = d theta(X, Y)"};
  Check ric11{"ric_11", "Ric^ob(J_s X, J_s Y) = Ric^ob(X, Y)"};
  Check tracefree{"dtheta_trace_free", "sum_a d theta(e_a, J_s e_a) = 0"};
  for (int s = 1; s <= 3; ++s) {
    const Endomorphism& J = H.j(s);
    const std::string pre = "s=" + std::to_string(s) + " ";
    detail::expect_zero(dth11, apply_in_slot(apply_in_slot(dth, 0, J), 1, J) - dth, pre);
    detail::expect_zero(ric11, apply_in_slot(apply_in_slot(p.ric, 0, J), 1, J) - p.ric, pre);
    if (!frame_trace(dth, H.g, &J).is_zero()) fail_once(tracefree, pre);
  }
  out.push_back(dth11);
  out.push_back(ric11);
  out.push_back(tracefree);

  Check scal{"scal_zero", "Scal^ob = Scal^ob_s = 0"};
  if (!p.scal.is_zero()) fail_once(scal, "Scal = " + to_string(p.scal));
  for (int s = 1; s <= 3; ++s)
    if (!p.scal_s[static_cast<std::size_t>(s - 1)].is_zero())
      fail_once(scal, "Scal_" + std::to_string(s) + " = " + to_string(p.scal_s[static_cast<std::size_t>(s - 1)]));
  out.push_back(scal);
  return out;
}

/// rho = rho_s = 0, expected for every connection preserving g and each J_s.
inline Check ricci_forms_vanish(const RicciPackage& p) {
  Check c{"rho_rho_s_zero", "rho = rho_s = 0"};
  detail::expect_zero(c, p.rho, "rho ");
  for (int s = 1; s <= 3; ++s)
    detail::expect_zero(c, p.rho_s[static_cast<std::size_t>(s - 1)], "rho_" + std::to_string(s) + " ");
  return c;
}

/// R^ob(X,Y,Z,U) = R(X,Y,Z,U) + (nabla_X A)(Y,Z,U) - (nabla_Y A)(X,Z,U)
///   + A(T(X,Y),Z,U) + A(X,A(Y,Z),U) - A(Y,A(X,Z),U),
/// with nabla the HKT connection and R its curvature.
inline Check curvature_relation_check(const Curvature& R, const Curvature& Rob, const Tensor& A, const KForm& T,
                                      const Connection& nabla, const Metric& g) {
  Check c{"curvature_relation", "R^ob = R + nabla A terms + A(T) + A(A) terms"};
  const std::size_t n = g.dim();
  const Tensor a_up = g.raise_last(A);               // A(Y,Z)^m
  const Tensor t_up = g.raise_last(T.to_tensor());   // T(X,Y)^m
  // raised Gamma^m_{xy} = op(x)(m, y)
  // nA(x, y, z, u) = (nabla_{e_x} A)(y, z, u)
  Tensor nA(4, n);
  for (std::size_t x = 0; x < n; ++x) {
    const Matrix& G = nabla.op(x);
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        for (std::size_t u = 0; u < n; ++u) {
          Rational s;
          for (std::size_t m = 0; m < n; ++m) {
            if (!G(m, y).is_zero()) s += G(m, y) * A(m, z, u);
            if (!G(m, z).is_zero()) s += G(m, z) * A(y, m, u);
            if (!G(m, u).is_zero()) s += G(m, u) * A(y, z, m);
          }
          nA(x, y, z, u) = -s;
        }
  }
  for (std::size_t x = 0; x < n && c.ok; ++x)
    for (std::size_t y = 0; y < n && c.ok; ++y)
      for (std::size_t z = 0; z < n; ++z)
        for (std::size_t u = 0; u < n; ++u) {
          Rational rhs = R(x, y, z, u) + nA(x, y, z, u) - nA(y, x, z, u);
          for (std::size_t m = 0; m < n; ++m) {
            if (!t_up(x, y, m).is_zero()) rhs += t_up(x, y, m) * A(m, z, u);
            if (!a_up(y, z, m).is_zero()) rhs += a_up(y, z, m) * A(x, m, u);
            if (!a_up(x, z, m).is_zero()) rhs -= a_up(x, z, m) * A(y, m, u);
          }
          if (rhs != Rob(x, y, z, u)) {
            fail_once(c, index_tuple({x, y, z, u}));
            break;
          }
        }
  return c;
}

/// sum_{a,b} t(e_a, J e_a, e_b, J e_b) for a 4-tensor t.
inline Rational double_j_trace(const Tensor& t4, const Endomorphism& J, const Metric& g) {
  const Tensor tw = apply_in_slot(apply_in_slot(t4, 1, J), 3, J);
  Rational s;
  for (const auto& e : g.inverse_entries())
    for (const auto& f : g.inverse_entries()) s += e.value * f.value * tw(e.i, e.j, f.i, f.j);
  return s;
}

/// delta theta = -sum_a (nabla^g_{e_a} theta)(e_a) = sum_a theta(nabla^g_{e_a} e_a).
inline Rational codifferential(const KForm& theta, const Connection& lc, const Metric& g) {
  Rational s;
  for (const auto& e : g.inverse_entries())
    for (std::size_t k = 0; k < g.dim(); ++k) {
      const Rational& gamma = lc.op(e.i)(k, e.j);
      if (!gamma.is_zero()) s += e.value * gamma * theta({k});
    }
  return s;
}

struct DtTraces {
  KForm dT;
  Rational full_trace;  // sum_{a,b} dT(e_a, J1 e_a, e_b, J1 e_b)
  Rational h;           // -1/4 full_trace
  std::array<Tensor, 3> partial;  // P_s(X,Y) = sum_a dT(e_a, J_s e_a, X, J_s Y)
  bool partial_coincide = false;
  bool almost_strong = false;
  bool strong = false;
};

inline DtTraces dT_traces(const KForm& T, const HyperhermitianStructure& H, const LieAlgebra& L) {
  DtTraces out;
  out.dT = ce_differential(T, L);
  out.strong = out.dT.is_zero();
  const Tensor t4 = out.dT.to_tensor();
  out.full_trace = double_j_trace(t4, H.j(1), H.g);
  out.h = Rational(-1, 4) * out.full_trace;
  const std::size_t n = H.dim();
  for (int s = 1; s <= 3; ++s) {
    const Tensor tw = apply_in_slot(apply_in_slot(t4, 1, H.j(s)), 3, H.j(s));
    Tensor p(2, n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (const auto& e : H.g.inverse_entries()) p(x, y) += e.value * tw(e.i, e.j, x, y);
    out.partial[static_cast<std::size_t>(s - 1)] = std::move(p);
  }
  out.partial_coincide = out.partial[0] == out.partial[1] && out.partial[1] == out.partial[2];
  out.almost_strong = out.partial[0].is_zero();
  return out;
}

struct StarScalar {
  std::array<Rational, 3> scal_s;  // sum_a rho^g_s(J_s e_a, e_a)
  Rational delta_theta;
  Rational theta_sq;
  Rational torsion_sq;
  std::vector<Check> checks;
};

/// *-scalar curvatures of the Levi-Civita connection and their expressions
/// through dT, the Lee form and |T|^2.
inline StarScalar star_scalar(const Curvature& Rg, const HyperhermitianStructure& H, const LieAlgebra& L,
                              const KForm& T, const LeeForm& lee, const DtTraces& dt) {
  StarScalar out;
  const RicciPackage p = ricci_package(Rg, H);
  for (int s = 1; s <= 3; ++s)
    out.scal_s[static_cast<std::size_t>(s - 1)] = frame_trace(p.rho_s[static_cast<std::size_t>(s - 1)], H.g, &H.j(s));
  out.delta_theta = codifferential(lee.theta, levi_civita(L, H.g), H.g);
  out.theta_sq = norm_sq(lee.theta, H.g);
  out.torsion_sq = norm_sq(T, H.g);

  Check coincide{"star_scal_coincide", "Scal^g_1 = Scal^g_2 = Scal^g_3"};
  if (out.scal_s[0] != out.scal_s[1] || out.scal_s[1] != out.scal_s[2])
    fail_once(coincide, to_string(out.scal_s[0]) + ", " + to_string(out.scal_s[1]) + ", " + to_string(out.scal_s[2]));
  out.checks.push_back(coincide);

  const Rational lee_side = out.delta_theta + out.theta_sq - out.torsion_sq / 12;
  const Rational dt_side = dt.full_trace / 8 + out.torsion_sq / 12;
  Check by_lee{"star_scal_lee", "Scal^g_s = delta theta + |theta|^2 - |T|^2/12"};
  for (int s = 1; s <= 3; ++s)
    if (out.scal_s[static_cast<std::size_t>(s - 1)] != lee_side)
      fail_once(by_lee, "s=" + std::to_string(s) + ": " + to_string(out.scal_s[static_cast<std::size_t>(s - 1)]) +
                            " vs " + to_string(lee_side));
  out.checks.push_back(by_lee);

  Check by_dt{"star_scal_dT", "Scal^g_s = 1/8 sum dT(e_a,J1e_a,e_b,J1e_b) + |T|^2/12"};
  for (int s = 1; s <= 3; ++s)
    if (out.scal_s[static_cast<std::size_t>(s - 1)] != dt_side)
      fail_once(by_dt, "s=" + std::to_string(s) + ": " + to_string(out.scal_s[static_cast<std::size_t>(s - 1)]) +
                           " vs " + to_string(dt_side));
  out.checks.push_back(by_dt);

  Check dt_lee{"dT_trace_lee", "sum dT(e_a,J1e_a,e_b,J1e_b) = 8 delta theta + 8|theta|^2 - 4/3 |T|^2"};
  const Rational rhs = 8 * out.delta_theta + 8 * out.theta_sq - Rational(4, 3) * out.torsion_sq;
  if (dt.full_trace != rhs) fail_once(dt_lee, to_string(dt.full_trace) + " vs " + to_string(rhs));
  out.checks.push_back(dt_lee);
  return out;
}

/// Lowered Chern torsion of J: C(X,Y,Z) = 1/2 T(X,JY,JZ) + 1/2 T(JX,Y,JZ).
inline Tensor chern_torsion(const KForm& T, const Endomorphism& J) {
  const Tensor t = T.to_tensor();
  Tensor c = apply_in_slot(apply_in_slot(t, 1, J), 2, J) + apply_in_slot(apply_in_slot(t, 0, J), 2, J);
  c *= Rational(1, 2);
  return c;
}

inline Check chern_norm_check(const KForm& T, const HyperhermitianStructure& H) {
  Check c{"chern_norm", "|C_s|^2 = |T|^2 / 3"};
  const Rational target = norm_sq(T, H.g) / 3;
  for (int s = 1; s <= 3; ++s) {
    const Rational v = norm_sq(chern_torsion(T, H.j(s)), H.g);
    if (v != target) fail_once(c, "s=" + std::to_string(s) + ": " + to_string(v) + " vs " + to_string(target));
  }
  return c;
}

struct ObstructionReport {
  bool ric_flag = false;    // Ric^ob not skew, or skew but not (1,1)
  bool rho_s_flag = false;  // some rho^ob_s != 0
  bool scal_flag = false;   // some Obata scalar curvature != 0
  std::string detail;
  bool obstructed() const { return ric_flag || rho_s_flag || scal_flag; }
  std::string verdict() const { return obstructed() ? "no compatible HKT metric" : "inconclusive"; }
};

/// Necessary conditions on the Obata curvature for a compatible HKT metric.
/// Any failure rules the metric out; passing them proves nothing.
inline ObstructionReport hkt_obstruction_report(const RicciPackage& p, const HyperhermitianStructure& H) {
  ObstructionReport r;
  const Tensor sym = p.ric + detail::transpose2(p.ric);
  if (!sym.is_zero()) {
    r.ric_flag = true;
    r.detail += "Ric^ob not skew; ";
  } else {
    for (int s = 1; s <= 3; ++s)
      if (apply_in_slot(apply_in_slot(p.ric, 0, H.j(s)), 1, H.j(s)) != p.ric) {
        r.ric_flag = true;
        r.detail += "Ric^ob not (1,1) for J" + std::to_string(s) + "; ";
        break;
      }
  }
  for (int s = 1; s <= 3; ++s)
    if (!p.rho_s[static_cast<std::size_t>(s - 1)].is_zero()) {
      r.rho_s_flag = true;
      r.detail += "rho^ob_" + std::to_string(s) + " != 0; ";
    }
  bool scal_nonzero = !p.scal.is_zero();
  for (const auto& v : p.scal_s) scal_nonzero = scal_nonzero || !v.is_zero();
  if (scal_nonzero) {
    r.scal_flag = true;
    r.detail += "nonzero Obata scalar curvature; ";
  }
  return r;
}

struct HyperkahlerVerdict {
  bool theta_exact = false;  // invariant-exact means theta = 0
  bool h_zero = false;
  bool star_zero = false;
  bool almost_strong = false;
  bool hypotheses_hold = false;
  bool torsion_zero = false;
  bool violation = false;
  std::string status;  // "consistent", "not applicable", "THEOREM VIOLATION"
};

/// With an exact Lee form and any of h = 0, Scal* = 0 or almost strong, the
/// torsion has to vanish.
inline HyperkahlerVerdict hyperkahler_detector(bool theta_zero, const Rational& h, const Rational& star,
                                               bool almost_strong, bool torsion_zero) {
  HyperkahlerVerdict v;
  v.theta_exact = theta_zero;
  v.h_zero = h.is_zero();
  v.star_zero = star.is_zero();
  v.almost_strong = almost_strong;
  v.torsion_zero = torsion_zero;
  v.hypotheses_hold = theta_zero && (v.h_zero || v.star_zero || almost_strong);
  v.violation = v.hypotheses_hold && !torsion_zero;
  v.status = v.violation ? "THEOREM VIOLATION" : (v.hypotheses_hold ? "consistent" : "not applicable");
  return v;
}

}  // namespace hktlab
