#pragma once

// Left-invariant calculus on a Lie algebra: structure constants, the
// Chevalley-Eilenberg differential, invariant connections with their torsion
// and curvature, and the Levi-Civita connection.

#include "hktlab/check.hpp"
#include "hktlab/linalg.hpp"
#include "hktlab/tensor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hktlab {

/// Structure constants c(i,j,k) = c^k_{ij}, i.e. [e_i, e_j] = sum_k c^k_{ij} e_k.
class LieAlgebra {
 public:
  LieAlgebra() = default;
  explicit LieAlgebra(std::size_t dim) : c_(3, dim) {
    if (dim == 0 || dim > kMaxDim) throw Error("dimension must be between 1 and 16");
  }

  std::size_t dim() const { return c_.dim(); }
  const Tensor& constants() const { return c_; }

  /// Sets c^k_{ij} and c^k_{ji} = -c^k_{ij}.
  void set_bracket(std::size_t i, std::size_t j, std::size_t k, const Rational& v) {
    c_(i, j, k) = v;
    c_(j, i, k) = -v;
  }
  /// Raw write of one constant, no antisymmetrization (for loaders that must
  /// report asymmetric input).
  Rational& raw(std::size_t i, std::size_t j, std::size_t k) { return c_(i, j, k); }
  const Rational& operator()(std::size_t i, std::size_t j, std::size_t k) const { return c_(i, j, k); }

  Vector bracket(std::size_t i, std::size_t j) const {
    Vector out(dim());
    for (std::size_t k = 0; k < dim(); ++k) out[k] = c_(i, j, k);
    return out;
  }

  Vector bracket(const Vector& x, const Vector& y) const {
    Vector out(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      if (x[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim(); ++j) {
        if (y[j].is_zero()) continue;
        const Rational f = x[i] * y[j];
        for (std::size_t k = 0; k < dim(); ++k)
          if (!c_(i, j, k).is_zero()) out[k] += f * c_(i, j, k);
      }
    }
    return out;
  }

  /// ad(e_i) as a matrix: ad_i(k, j) = c^k_{ij}.
  Matrix ad(std::size_t i) const {
    Matrix m(dim(), dim());
    for (std::size_t j = 0; j < dim(); ++j)
      for (std::size_t k = 0; k < dim(); ++k) m(k, j) = c_(i, j, k);
    return m;
  }

  bool is_abelian() const { return c_.is_zero(); }

  friend bool operator==(const LieAlgebra& a, const LieAlgebra& b) { return a.c_ == b.c_; }

 private:
  Tensor c_;
};

struct LieValidation {
  bool ok = true;
  std::string message;
  std::vector<std::size_t> where;
};

/// Exact antisymmetry and Jacobi check; reports the first violation.
inline LieValidation validate_lie_algebra(const LieAlgebra& L) {
  const std::size_t n = L.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (L(i, j, k) != -L(j, i, k))
          return {false, "antisymmetry violation at " + index_tuple({i, j, k}), {i, j, k}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          Rational s;
          for (std::size_t m = 0; m < n; ++m)
            s += L(i, j, m) * L(m, k, l) + L(j, k, m) * L(m, i, l) + L(k, i, m) * L(m, j, l);
          if (!s.is_zero())
            return {false, "Jacobi violation at " + index_tuple({i, j, k, l}), {i, j, k, l}};
        }
  return {};
}

/// (da)(X_0..X_k) = sum_{i<j} (-1)^{i+j} a([X_i,X_j], X_0..^i..^j..X_k).
inline KForm ce_differential(const KForm& a, const LieAlgebra& L) {
  const std::size_t k = a.degree(), n = L.dim();
  if (a.dim() != n) throw Error("form and algebra dimensions differ");
  if (k + 1 > n) throw Error("degree exceeds dimension");
  KForm out(k + 1, n);
  std::vector<std::size_t> args(k);
  for (std::size_t r = 0; r < out.size(); ++r) {
    const auto x = out.sorted_tuple(r);
    Rational total;
    for (std::size_t i = 0; i <= k; ++i)
      for (std::size_t j = i + 1; j <= k; ++j) {
        std::size_t p = 1;
        for (std::size_t t = 0; t <= k; ++t)
          if (t != i && t != j) args[p++] = x[t];
        Rational sub;
        for (std::size_t m = 0; m < n; ++m) {
          const Rational& c = L(x[i], x[j], m);
          if (c.is_zero()) continue;
          args[0] = m;
          sub += c * a(args);
        }
        if ((i + j) % 2 == 0) total += sub;
        else total -= sub;
      }
    out.entry(r) = total;
  }
  return out;
}

/// c_low(i,j,k) = g([e_i,e_j], e_k).
inline Tensor lowered_brackets(const LieAlgebra& L, const Metric& g) {
  return g.lower_last(L.constants());
}

/// Left-invariant linear connection. Stored lowered,
/// gamma(i,j,k) = g(nabla_{e_i} e_j, e_k), together with the operators
/// L_i = nabla_{e_i}, L_i(k, j) = Gamma^k_{ij}.
class Connection {
 public:
  Connection() = default;

  static Connection from_lowered(Tensor gamma, const Metric& g) {
    Connection c;
    c.gamma_ = std::move(gamma);
    c.build_ops(g.raise_last(c.gamma_));
    return c;
  }

  /// raised(i, j, k) = Gamma^k_{ij}.
  static Connection from_raised(const Tensor& raised, const Metric& g) {
    Connection c;
    c.gamma_ = g.lower_last(raised);
    c.build_ops(raised);
    return c;
  }

  std::size_t dim() const { return gamma_.dim(); }
  const Tensor& lowered() const { return gamma_; }
  const Rational& operator()(std::size_t i, std::size_t j, std::size_t k) const { return gamma_(i, j, k); }
  const Matrix& op(std::size_t i) const { return ops_[i]; }
  const std::vector<Matrix>& ops() const { return ops_; }

  /// nabla_X Y for invariant X, Y.
  Vector apply(const Vector& x, const Vector& y) const {
    Vector out(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      if (x[i].is_zero()) continue;
      const Vector v = ops_[i].apply(y);
      for (std::size_t k = 0; k < dim(); ++k) out[k] += x[i] * v[k];
    }
    return out;
  }

  /// nabla g = 0, i.e. gamma(i,j,k) + gamma(i,k,j) = 0.
  bool is_metric() const {
    const std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j; k < n; ++k)
          if (gamma_(i, j, k) != -gamma_(i, k, j)) return false;
    return true;
  }

  /// nabla_{e_i} J = [L_i, J] for invariant J.
  Matrix derivative(std::size_t i, const Endomorphism& j) const { return commutator(ops_[i], j); }

  bool preserves(const Endomorphism& j) const {
    for (std::size_t i = 0; i < dim(); ++i)
      if (!derivative(i, j).is_zero()) return false;
    return true;
  }

  friend bool operator==(const Connection& a, const Connection& b) { return a.gamma_ == b.gamma_; }

 private:
  void build_ops(const Tensor& raised) {
    const std::size_t n = raised.dim();
    ops_.assign(n, Matrix(n, n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) ops_[i](k, j) = raised(i, j, k);
  }

  Tensor gamma_;
  std::vector<Matrix> ops_;
};

/// Koszul formula: 2g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y).
inline Connection levi_civita(const LieAlgebra& L, const Metric& g) {
  const Tensor cl = lowered_brackets(L, g);
  const std::size_t n = L.dim();
  Tensor gamma(3, n);
  const Rational half(1, 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        gamma(i, j, k) = half * (cl(i, j, k) - cl(j, k, i) + cl(k, i, j));
  return Connection::from_lowered(std::move(gamma), g);
}

struct Torsion {
  Tensor raised;   // raised(i,j,k) = T^k_{ij}
  Tensor lowered;  // lowered(i,j,k) = g(T(e_i,e_j), e_k)
  std::optional<KForm> form;  // present when lowered is totally skew
  bool is_zero() const { return lowered.is_zero(); }
  bool totally_skew() const { return form.has_value(); }
};

/// T(X,Y) = nabla_X Y - nabla_Y X - [X,Y].
inline Torsion torsion(const Connection& C, const LieAlgebra& L, const Metric& g) {
  const std::size_t n = L.dim();
  const Tensor cl = lowered_brackets(L, g);
  Torsion t;
  t.lowered = Tensor(3, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) t.lowered(i, j, k) = C(i, j, k) - C(j, i, k) - cl(i, j, k);
  t.raised = g.raise_last(t.lowered);
  if (KForm::is_antisymmetric(t.lowered)) t.form = KForm::from_tensor(t.lowered);
  return t;
}

/// r(i,j,k,l) = g(R(e_i,e_j) e_k, e_l), with the operators R(e_i,e_j) kept
/// for holonomy computations.
struct Curvature {
  Tensor r;
  std::vector<Matrix> ops;  // ops[i*dim + j] = R(e_i, e_j)
  std::size_t dim() const { return r.dim(); }
  const Matrix& op(std::size_t i, std::size_t j) const { return ops[i * r.dim() + j]; }
  const Rational& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return r(i, j, k, l);
  }
  bool is_zero() const { return r.is_zero(); }
};

/// R(X,Y) = [nabla_X, nabla_Y] - nabla_{[X,Y]}.
inline Curvature curvature(const Connection& C, const LieAlgebra& L, const Metric& g) {
  const std::size_t n = L.dim();
  Curvature R;
  R.r = Tensor(4, n);
  R.ops.assign(n * n, Matrix(n, n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Matrix m = commutator(C.op(i), C.op(j));
      for (std::size_t k = 0; k < n; ++k)
        if (!L(i, j, k).is_zero()) m = m - L(i, j, k) * C.op(k);
      R.ops[i * n + j] = m;
      R.ops[j * n + i] = -m;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Matrix gm = g.matrix().transpose() * R.ops[i * n + j];
      // gm(l, k) = sum_m g(m, l) R_ij(m, k)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) R.r(i, j, k, l) = gm(l, k);
    }
  return R;
}

}  // namespace hktlab
