#pragma once

// The Obata connection: the difference tensor A against the HKT connection,
// the B-tensor formula, the direct linear-system construction, and the trace
// identities of A.

#include "hktlab/check.hpp"
#include "hktlab/hyperhermitian.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hktlab {

/// out(.., x) = sum_m M(x, m) in(.., m): M applied to the vector-valued last slot.
inline Tensor map_last(const Tensor& t, const Matrix& m) {
  return apply_in_slot(t, t.rank() - 1, m.transpose());
}

/// 2A(X,Y,Z) = -T(X,J1Y,J1Z) - T(J1X,J1Y,Z) - T(X,J3Y,J3Z) - T(J1X,J3Y,J2Z),
/// so that g(nabla^ob_X Y, Z) = g(nabla_X Y, Z) + A(X,Y,Z).
inline Tensor difference_tensor(const KForm& T, const HyperhermitianStructure& H) {
  const Tensor t = T.to_tensor();
  const Endomorphism &J1 = H.j(1), &J2 = H.j(2), &J3 = H.j(3);
  const Tensor t0 = apply_in_slot(t, 0, J1);
  Tensor a = apply_in_slot(apply_in_slot(t, 1, J1), 2, J1);
  a += apply_in_slot(t0, 1, J1);
  a += apply_in_slot(apply_in_slot(t, 1, J3), 2, J3);
  a += apply_in_slot(apply_in_slot(t0, 1, J3), 2, J2);
  a *= Rational(-1, 2);
  return a;
}

/// B from the torsion T^k_{ij} of any connection preserving J_1, J_2, J_3:
/// -4B(X,Y) = T(X,Y) - J1T(X,J1Y) - J2T(X,J2Y) - J3T(X,J3Y) + T(J1X,J1Y)
///            + J1T(J1X,Y) - J2T(J1X,J3Y) + J3T(J1X,J2Y).
/// Returns B^k_{ij}.
inline Tensor obata_b_tensor(const Tensor& t_raised, const HyperhermitianStructure& H) {
  const Endomorphism &J1 = H.j(1), &J2 = H.j(2), &J3 = H.j(3);
  const Tensor x1 = apply_in_slot(t_raised, 0, J1);
  Tensor b = t_raised;
  b -= map_last(apply_in_slot(t_raised, 1, J1), J1);
  b -= map_last(apply_in_slot(t_raised, 1, J2), J2);
  b -= map_last(apply_in_slot(t_raised, 1, J3), J3);
  b += apply_in_slot(x1, 1, J1);
  b += map_last(x1, J1);
  b -= map_last(apply_in_slot(x1, 1, J3), J2);
  b += map_last(apply_in_slot(x1, 1, J2), J3);
  b *= Rational(-1, 4);
  return b;
}

/// Basis of the endomorphisms commuting with J_1, J_2, J_3.
inline std::vector<Matrix> quaternionic_commutant(const HyperhermitianStructure& H) {
  const std::size_t n = H.dim();
  Matrix sys(3 * n * n, n * n);
  for (int s = 1; s <= 3; ++s) {
    const Matrix& J = H.j(s);
    const std::size_t base = static_cast<std::size_t>(s - 1) * n * n;
    // (J M - M J)(r, c) = sum_p J(r,p) M(p,c) - M(r,p) J(p,c)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        const std::size_t row = base + r * n + c;
        for (std::size_t p = 0; p < n; ++p) {
          if (!J(r, p).is_zero()) sys(row, p * n + c) += J(r, p);
          if (!J(p, c).is_zero()) sys(row, r * n + p) -= J(p, c);
        }
      }
  }
  std::vector<Matrix> basis;
  for (const auto& v : null_space(std::move(sys))) basis.push_back(unflatten(v, n));
  return basis;
}

struct ObataSolution {
  Connection connection;
  std::size_t rank = 0;
  std::size_t unknowns = 0;
  std::size_t commutant_dim = 0;
};

/// Solves for the torsion-free connection with nabla J_s = 0 directly:
/// each nabla_{e_i} is parametrized in the commutant of the J's, and the
/// torsion-free equations Gamma^k_{ij} - Gamma^k_{ji} = c^k_{ij} are solved
/// exactly. Throws unless the solution exists and is unique.
inline ObataSolution obata_oracle_solver(const HyperhermitianStructure& H, const LieAlgebra& L) {
  const std::size_t n = H.dim();
  const auto comm = quaternionic_commutant(H);
  const std::size_t m = comm.size();
  const std::size_t unknowns = n * m;
  const std::size_t rows = n * (n - 1) / 2 * n;
  Matrix a(rows, unknowns);
  Vector b(rows);
  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k, ++row) {
        // Gamma^k_{ij} = L_i(k, j) = sum_b x_{i,b} comm_b(k, j)
        for (std::size_t q = 0; q < m; ++q) {
          a(row, i * m + q) += comm[q](k, j);
          a(row, j * m + q) -= comm[q](k, i);
        }
        b[row] = L(i, j, k);
      }
  const LinearSolution sol = solve(a, b);
  if (!sol.consistent)
    throw Error("not hypercomplex: torsion-free system is inconsistent (rank " + std::to_string(sol.rank) +
                " of " + std::to_string(unknowns) + " unknowns)");
  if (!sol.unique())
    throw Error("torsion-free J-preserving connection not unique: rank " + std::to_string(sol.rank) +
                " < " + std::to_string(unknowns) + " unknowns");
  Tensor raised(3, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t q = 0; q < m; ++q) {
      const Rational& x = sol.particular[i * m + q];
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (!comm[q](k, j).is_zero()) raised(i, j, k) += x * comm[q](k, j);
    }
  return {Connection::from_raised(raised, H.g), sol.rank, unknowns, m};
}

/// Obata connection as nabla + A when the HKT torsion is known, otherwise from
/// the linear system. Torsion-freeness and nabla J_s = 0 are verified.
inline Connection obata_connection(const HyperhermitianStructure& H, const LieAlgebra& L,
                                   const std::optional<KForm>& hkt_torsion) {
  Connection c;
  if (hkt_torsion) {
    Tensor gamma = bismut_connection(*hkt_torsion, L, H.g).lowered();
    gamma += difference_tensor(*hkt_torsion, H);
    c = Connection::from_lowered(std::move(gamma), H.g);
  } else {
    c = obata_oracle_solver(H, L).connection;
  }
  if (!torsion(c, L, H.g).is_zero()) throw Error("Obata connection has torsion");
  for (int s = 1; s <= 3; ++s)
    if (!c.preserves(H.j(s))) throw Error("Obata connection does not preserve J" + std::to_string(s));
  return c;
}

/// Trilinear evaluation of a covariant 3-tensor on vectors.
inline Rational eval3(const Tensor& t, const Vector& x, const Vector& y, const Vector& z) {
  const std::size_t n = t.dim();
  Rational s;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (y[j].is_zero()) continue;
      const Rational xy = x[i] * y[j];
      for (std::size_t k = 0; k < n; ++k)
        if (!z[k].is_zero() && !t(i, j, k).is_zero()) s += xy * z[k] * t(i, j, k);
    }
  }
  return s;
}

/// sum_a t(X, e_a, e_a) over an orthonormal frame, for every basis X.
inline Vector frame_trace_23(const Tensor& t, const Metric& g) {
  Vector out(t.dim());
  for (std::size_t x = 0; x < t.dim(); ++x)
    for (const auto& e : g.inverse_entries()) out[x] += e.value * t(x, e.i, e.j);
  return out;
}

/// A(X, J_s Y, J_s Z) = A(X, Y, Z) for s = 1, 2, 3.
inline Check difference_tensor_invariance(const Tensor& A, const HyperhermitianStructure& H) {
  Check c{"A_J_invariant", "A(X, J_s Y, J_s Z) = A(X, Y, Z)"};
  for (int s = 1; s <= 3 && c.ok; ++s) {
    const Tensor d = apply_in_slot(apply_in_slot(A, 1, H.j(s)), 2, H.j(s)) - A;
    const std::size_t at = d.first_nonzero();
    if (at < d.size()) {
      const auto idx = d.index_of(at);
      fail_once(c, "J" + std::to_string(s) + " at " + index_tuple({idx[0], idx[1], idx[2]}));
    }
  }
  return c;
}

/// sum_a A(X,e_a,e_a) = -2 theta(X) and sum_a A(X,e_a,J_s e_a) = 0.
inline std::vector<Check> trace_identities(const Tensor& A, const HyperhermitianStructure& H, const KForm& theta) {
  std::vector<Check> out;
  Check plain{"A_trace", "sum_a A(X, e_a, e_a) = -2 theta(X)"};
  const Vector tr = frame_trace_23(A, H.g);
  for (std::size_t x = 0; x < H.dim(); ++x)
    if (tr[x] != Rational(-2) * theta({x})) fail_once(plain, "X = e" + std::to_string(x));
  out.push_back(plain);
  Check twisted{"A_J_trace", "sum_a A(X, e_a, J_s e_a) = 0"};
  for (int s = 1; s <= 3; ++s) {
    const Vector trs = frame_trace_23(apply_in_slot(A, 2, H.j(s)), H.g);
    for (std::size_t x = 0; x < H.dim(); ++x)
      if (!trs[x].is_zero()) fail_once(twisted, "s = " + std::to_string(s) + ", X = e" + std::to_string(x));
  }
  out.push_back(twisted);
  return out;
}

/// Orthonormal frame u_1..u_{2n} such that (u_a, J1 u_a) runs through an
/// orthonormal frame. Built by pairing Gram-Schmidt vectors; throws when J1
/// does not permute the frame up to sign.
inline std::vector<Vector> adapted_frame(const HyperhermitianStructure& H) {
  const auto frame = orthonormal_frame(H.g);
  const std::size_t n = frame.size();
  std::vector<bool> used(n, false);
  std::vector<Vector> half;
  for (std::size_t a = 0; a < n; ++a) {
    if (used[a]) continue;
    const Vector ja = H.j(1).apply(frame[a]);
    bool paired = false;
    for (std::size_t b = 0; b < n && !paired; ++b) {
      if (used[b] || b == a) continue;
      Vector neg(n);
      for (std::size_t i = 0; i < n; ++i) neg[i] = -frame[b][i];
      if (ja == frame[b] || ja == neg) {
        used[a] = used[b] = true;
        half.push_back(frame[a]);
        paired = true;
      }
    }
    if (!paired) throw Error("frame not J1-adapted at frame vector " + std::to_string(a));
  }
  return half;
}

/// The complex trace of A in a J1-adapted frame, split into real and
/// imaginary parts:
///   sum_a [A(X,u_a,u_a) + A(X,J1u_a,J1u_a)] = -2 theta(X),
///   sum_a [A(X,u_a,J1u_a) - A(X,J1u_a,u_a)] = 0.
inline std::vector<Check> complex_trace_A(const Tensor& A, const HyperhermitianStructure& H, const KForm& theta) {
  const auto half = adapted_frame(H);
  const std::size_t n = H.dim();
  Check re{"A_complex_trace_re", "sum_a A(X,u_a,u_a) + A(X,J1 u_a,J1 u_a) = -2 theta(X)"};
  Check im{"A_complex_trace_im", "sum_a A(X,u_a,J1 u_a) - A(X,J1 u_a,u_a) = 0"};
  for (std::size_t x = 0; x < n; ++x) {
    Vector ex(n);
    ex[x] = 1;
    Rational r, i;
    for (const auto& u : half) {
      const Vector ju = H.j(1).apply(u);
      r += eval3(A, ex, u, u) + eval3(A, ex, ju, ju);
      i += eval3(A, ex, u, ju) - eval3(A, ex, ju, u);
    }
    if (r != Rational(-2) * theta({x})) fail_once(re, "X = e" + std::to_string(x));
    if (!i.is_zero()) fail_once(im, "X = e" + std::to_string(x));
  }
  return {re, im};
}

}  // namespace hktlab
