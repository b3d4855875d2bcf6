#pragma once

// Holonomy algebra of an invariant connection by Nomizu closure, and the
// gl(n,H) / sl(n,H) membership tests.

#include "hktlab/hyperhermitian.hpp"

#include <deque>
#include <string>
#include <vector>

namespace hktlab {

struct HolonomyAlgebra {
  std::vector<Matrix> generators;  // a basis
  std::size_t dim() const { return generators.size(); }
};

/// Smallest subspace containing every R(e_i,e_j) that is stable under
/// h -> [nabla_{e_k}, h] and under commutators.
inline HolonomyAlgebra holonomy_algebra(const Connection& C, const Curvature& R) {
  const std::size_t n = C.dim();
  SpanBasis span(n * n);
  std::vector<Matrix> members;
  std::deque<Matrix> pending;
  auto offer = [&](const Matrix& m) {
    if (span.insert(flatten(m))) {
      members.push_back(m);
      pending.push_back(m);
    }
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) offer(R.op(i, j));
  while (!pending.empty()) {
    const Matrix h = pending.front();
    pending.pop_front();
    for (std::size_t k = 0; k < n; ++k) offer(commutator(C.op(k), h));
    const std::size_t count = members.size();
    for (std::size_t q = 0; q < count; ++q) offer(commutator(members[q], h));
  }
  HolonomyAlgebra hol;
  for (const auto& row : span.basis()) hol.generators.push_back(unflatten(row, n));
  return hol;
}

/// [a, b] in span for every pair of generators.
inline bool is_closed(const HolonomyAlgebra& hol) {
  if (hol.generators.empty()) return true;
  const std::size_t n = hol.generators.front().rows();
  SpanBasis span(n * n);
  for (const auto& g : hol.generators) span.insert(flatten(g));
  for (std::size_t a = 0; a < hol.dim(); ++a)
    for (std::size_t b = a + 1; b < hol.dim(); ++b)
      if (!span.contains(flatten(commutator(hol.generators[a], hol.generators[b])))) return false;
  return true;
}

/// A commutes with J_1, J_2, J_3.
inline bool glnh_membership(const Endomorphism& A, const HyperhermitianStructure& H) {
  for (int s = 1; s <= 3; ++s)
    if (A * H.j(s) != H.j(s) * A) return false;
  return true;
}

/// g A + A^T g = 0.
inline bool is_g_skew(const Endomorphism& A, const Metric& g) {
  return (g.matrix() * A + A.transpose() * g.matrix()).is_zero();
}

struct SlMembership {
  bool in_gl = true;
  bool in_sl = true;
  std::string certificate;  // first violating generator
};

inline SlMembership slnh_membership(const HolonomyAlgebra& hol, const HyperhermitianStructure& H) {
  SlMembership m;
  for (std::size_t q = 0; q < hol.dim(); ++q) {
    const Matrix& a = hol.generators[q];
    if (!glnh_membership(a, H)) {
      m.in_gl = m.in_sl = false;
      if (m.certificate.empty()) m.certificate = "generator " + std::to_string(q) + " does not commute with the J_s";
    } else if (!a.trace().is_zero()) {
      m.in_sl = false;
      if (m.certificate.empty())
        m.certificate = "generator " + std::to_string(q) + " has trace " + to_string(a.trace());
    }
  }
  return m;
}

inline bool all_g_skew(const HolonomyAlgebra& hol, const Metric& g) {
  for (const auto& a : hol.generators)
    if (!is_g_skew(a, g)) return false;
  return true;
}

inline bool all_quaternionic(const HolonomyAlgebra& hol, const HyperhermitianStructure& H) {
  for (const auto& a : hol.generators)
    if (!glnh_membership(a, H)) return false;
  return true;
}

}  // namespace hktlab
