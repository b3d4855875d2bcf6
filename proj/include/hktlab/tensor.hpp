#pragma once

// Exact multilinear algebra on a 4n-dimensional real vector space with a
// fixed basis e_0..e_{dim-1}: dense tensors, antisymmetric k-forms, the
// metric, and the form operations the geometry layer is built from.

#include "hktlab/linalg.hpp"
#include "hktlab/rational.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hktlab {

inline constexpr std::size_t kMaxDim = 16;

/// Dense tensor with `rank` slots, each ranging over 0..dim-1. Entries are
/// covariant unless the owner says otherwise.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rank, std::size_t dim) : rank_(rank), dim_(dim) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < rank; ++i) n *= dim;
    data_.resize(n);
  }

  std::size_t rank() const { return rank_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return data_.size(); }

  Rational& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * dim_ + j) * dim_ + k];
  }
  const Rational& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * dim_ + j) * dim_ + k];
  }
  Rational& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return data_[((i * dim_ + j) * dim_ + k) * dim_ + l];
  }
  const Rational& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data_[((i * dim_ + j) * dim_ + k) * dim_ + l];
  }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  Rational& at(std::span<const std::size_t> idx) { return data_[offset(idx)]; }
  const Rational& at(std::span<const std::size_t> idx) const { return data_[offset(idx)]; }

  Rational& flat(std::size_t p) { return data_[p]; }
  const Rational& flat(std::size_t p) const { return data_[p]; }

  /// Multi-index of a flat position.
  std::vector<std::size_t> index_of(std::size_t p) const {
    std::vector<std::size_t> idx(rank_);
    for (std::size_t s = rank_; s-- > 0;) {
      idx[s] = p % dim_;
      p /= dim_;
    }
    return idx;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!x.is_zero()) return false;
    return true;
  }

  /// First flat position where the entry is nonzero, or size() if none.
  std::size_t first_nonzero() const {
    for (std::size_t p = 0; p < data_.size(); ++p)
      if (!data_[p].is_zero()) return p;
    return data_.size();
  }

  Tensor& operator+=(const Tensor& o) {
    for (std::size_t p = 0; p < data_.size(); ++p) data_[p] += o.data_[p];
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    for (std::size_t p = 0; p < data_.size(); ++p) data_[p] -= o.data_[p];
    return *this;
  }
  Tensor& operator*=(const Rational& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(const Rational& s, Tensor a) { return a *= s; }
  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.rank_ == b.rank_ && a.dim_ == b.dim_ && a.data_ == b.data_;
  }

  /// Tensor with slots permuted: out(i_{perm[0]}, ...) pattern such that
  /// out(x_0..x_{r-1}) = this(x_{perm[0]}, .., x_{perm[r-1]}).
  Tensor permuted(std::span<const std::size_t> perm) const {
    Tensor out(rank_, dim_);
    std::vector<std::size_t> src(rank_);
    for (std::size_t p = 0; p < data_.size(); ++p) {
      const auto idx = out.index_of(p);
      for (std::size_t s = 0; s < rank_; ++s) src[s] = idx[perm[s]];
      out.data_[p] = at(src);
    }
    return out;
  }

 private:
  std::size_t offset(std::span<const std::size_t> idx) const {
    std::size_t p = 0;
    for (auto i : idx) p = p * dim_ + i;
    return p;
  }

  std::size_t rank_ = 0, dim_ = 0;
  std::vector<Rational> data_;
};

/// Replaces slot `slot` by the image under `m`:
/// out(.., x, ..) = sum_p m(p, x) in(.., p, ..), i.e. evaluates the tensor
/// with M e_x in that slot.
inline Tensor apply_in_slot(const Tensor& t, std::size_t slot, const Matrix& m) {
  const std::size_t d = t.dim();
  Tensor out(t.rank(), d);
  std::size_t stride = 1;
  for (std::size_t s = slot + 1; s < t.rank(); ++s) stride *= d;
  for (std::size_t p = 0; p < t.size(); ++p) {
    const Rational& v = t.flat(p);
    if (v.is_zero()) continue;
    const std::size_t src = (p / stride) % d;
    const std::size_t base = p - src * stride;
    for (std::size_t x = 0; x < d; ++x) {
      const Rational& c = m(src, x);
      if (!c.is_zero()) out.flat(base + x * stride) += c * v;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Metric

class Metric {
 public:
  /// Validates symmetry and positive-definiteness (leading principal minors)
  /// exactly. Throws Error otherwise.
  explicit Metric(Matrix g) : g_(std::move(g)) {
    if (!g_.square() || g_.rows() == 0) throw Error("metric must be a nonempty square matrix");
    const std::size_t n = g_.rows();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (g_(i, j) != g_(j, i))
          throw Error("metric not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    const auto minors = leading_principal_minors(g_);
    for (std::size_t k = 0; k < minors.size(); ++k)
      if (minors[k] <= 0)
        throw Error("metric not positive-definite: leading minor " + std::to_string(k + 1) +
                    " = " + to_string(minors[k]));
    inv_ = *inverse(g_);
    identity_ = (g_ == Matrix::identity(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!inv_(i, j).is_zero()) inv_pairs_.push_back({i, j, inv_(i, j)});
  }

  static Metric identity(std::size_t n) { return Metric(Matrix::identity(n)); }

  std::size_t dim() const { return g_.rows(); }
  const Matrix& matrix() const { return g_; }
  const Matrix& inverse_matrix() const { return inv_; }
  bool is_identity() const { return identity_; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return g_(i, j); }

  Rational operator()(const Vector& u, const Vector& v) const {
    Rational s;
    for (std::size_t i = 0; i < dim(); ++i) {
      if (u[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim(); ++j)
        if (!v[j].is_zero() && !g_(i, j).is_zero()) s += u[i] * g_(i, j) * v[j];
    }
    return s;
  }

  /// Nonzero entries of g^{-1}. A trace over an orthonormal frame,
  /// sum_a B(e_a, e_a), equals sum over these of ginv(i,j) B(e_i, e_j).
  struct InvEntry {
    std::size_t i, j;
    Rational value;
  };
  const std::vector<InvEntry>& inverse_entries() const { return inv_pairs_; }

  /// Lowers the last slot: out(.., k) = sum_m g(k, m) in(.., m).
  Tensor lower_last(const Tensor& t) const { return apply_in_slot(t, t.rank() - 1, g_); }
  /// Raises the last slot with g^{-1}.
  Tensor raise_last(const Tensor& t) const { return apply_in_slot(t, t.rank() - 1, inv_); }

  friend bool operator==(const Metric& a, const Metric& b) { return a.g_ == b.g_; }

 private:
  Matrix g_;
  Matrix inv_;
  bool identity_ = false;
  std::vector<InvEntry> inv_pairs_;
};

// ---------------------------------------------------------------------------
// Antisymmetric forms

namespace detail {
inline std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Sorts idx in place by insertion sort. Returns the permutation sign, or 0
/// if an index repeats.
inline int sort_with_sign(std::span<std::size_t> idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i - 1] == idx[i]) return 0;
  return sign;
}
}  // namespace detail

/// Totally antisymmetric covariant k-form stored on strictly increasing
/// index tuples (colex order).
class KForm {
 public:
  KForm() = default;
  KForm(std::size_t degree, std::size_t dim)
      : degree_(degree), dim_(dim), data_(detail::binomial(dim, degree)) {
    if (dim > kMaxDim) throw Error("dimension exceeds the supported maximum of 16");
  }

  std::size_t degree() const { return degree_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return data_.size(); }

  /// Value on an arbitrary index tuple (antisymmetry applied).
  Rational operator()(std::span<const std::size_t> idx) const {
    std::array<std::size_t, kMaxDim> buf{};
    std::copy(idx.begin(), idx.end(), buf.begin());
    std::span<std::size_t> s(buf.data(), idx.size());
    const int sign = detail::sort_with_sign(s);
    if (sign == 0) return Rational{};
    const Rational& v = data_[rank_of_sorted(s)];
    return sign > 0 ? v : Rational(-v);
  }
  Rational operator()(std::initializer_list<std::size_t> idx) const {
    return (*this)(std::span<const std::size_t>(idx.begin(), idx.size()));
  }

  /// Sets the value on a tuple; the stored entry is adjusted by the tuple's
  /// permutation sign. Tuples with repeated indices must be set to zero.
  void set(std::span<const std::size_t> idx, const Rational& value) {
    std::array<std::size_t, kMaxDim> buf{};
    std::copy(idx.begin(), idx.end(), buf.begin());
    std::span<std::size_t> s(buf.data(), idx.size());
    const int sign = detail::sort_with_sign(s);
    if (sign == 0) {
      if (!value.is_zero()) throw Error("nonzero value on a repeated index");
      return;
    }
    data_[rank_of_sorted(s)] = sign > 0 ? value : Rational(-value);
  }
  void set(std::initializer_list<std::size_t> idx, const Rational& value) {
    set(std::span<const std::size_t>(idx.begin(), idx.size()), value);
  }

  /// Stored entries with their increasing index tuples.
  std::vector<std::size_t> sorted_tuple(std::size_t rank) const {
    std::vector<std::size_t> idx(degree_);
    // colex unranking
    for (std::size_t i = degree_; i-- > 0;) {
      std::size_t c = i;
      while (detail::binomial(c + 1, i + 1) <= rank) ++c;
      idx[i] = c;
      rank -= detail::binomial(c, i + 1);
    }
    return idx;
  }
  const Rational& entry(std::size_t rank) const { return data_[rank]; }
  Rational& entry(std::size_t rank) { return data_[rank]; }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!x.is_zero()) return false;
    return true;
  }

  /// Evaluates on arbitrary vectors by multilinearity.
  Rational evaluate(const std::vector<Vector>& args) const {
    if (args.size() != degree_) throw Error("wrong number of arguments for form evaluation");
    Rational total;
    std::vector<std::size_t> idx(degree_);
    std::vector<std::size_t> perm(degree_);
    for (std::size_t r = 0; r < data_.size(); ++r) {
      if (data_[r].is_zero()) continue;
      const auto tuple = sorted_tuple(r);
      // sum over permutations of tuple positions: det-like expansion
      for (std::size_t i = 0; i < degree_; ++i) perm[i] = i;
      do {
        Rational term = data_[r];
        for (std::size_t s = 0; s < degree_ && !term.is_zero(); ++s) term *= args[s][tuple[perm[s]]];
        if (term.is_zero()) continue;
        std::vector<std::size_t> p(perm);
        total += detail::sort_with_sign(p) > 0 ? term : Rational(-term);
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return total;
  }

  Tensor to_tensor() const {
    Tensor t(degree_, dim_);
    for (std::size_t p = 0; p < t.size(); ++p) {
      const auto idx = t.index_of(p);
      t.flat(p) = (*this)(idx);
    }
    return t;
  }

  /// Builds a form from a dense tensor. Throws unless the tensor is totally
  /// antisymmetric.
  static KForm from_tensor(const Tensor& t) {
    KForm f(t.rank(), t.dim());
    for (std::size_t r = 0; r < f.size(); ++r) f.data_[r] = t.at(f.sorted_tuple(r));
    for (std::size_t p = 0; p < t.size(); ++p) {
      const auto idx = t.index_of(p);
      if (f(idx) != t.flat(p)) throw Error("tensor is not totally antisymmetric");
    }
    return f;
  }

  static bool is_antisymmetric(const Tensor& t) {
    try {
      (void)from_tensor(t);
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  /// Coordinate 1-form e^i.
  static KForm basis_covector(std::size_t i, std::size_t dim) {
    KForm f(1, dim);
    f.set({i}, Rational(1));
    return f;
  }

  KForm& operator+=(const KForm& o) {
    for (std::size_t r = 0; r < data_.size(); ++r) data_[r] += o.data_[r];
    return *this;
  }
  KForm& operator-=(const KForm& o) {
    for (std::size_t r = 0; r < data_.size(); ++r) data_[r] -= o.data_[r];
    return *this;
  }
  KForm& operator*=(const Rational& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator*(const Rational& s, KForm a) { return a *= s; }
  friend bool operator==(const KForm& a, const KForm& b) {
    return a.degree_ == b.degree_ && a.dim_ == b.dim_ && a.data_ == b.data_;
  }

  std::size_t rank_of_sorted(std::span<const std::size_t> sorted) const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) r += detail::binomial(sorted[i], i + 1);
    return r;
  }

 private:
  std::size_t degree_ = 0, dim_ = 0;
  std::vector<Rational> data_;
};

/// Exterior product, shuffle convention:
/// (a ^ b)(X_1..X_{k+l}) = sum over (k,l)-shuffles s of sign(s) a(X_s..) b(X_s..).
inline KForm wedge(const KForm& a, const KForm& b) {
  if (a.dim() != b.dim()) throw Error("wedge of forms over different dimensions");
  const std::size_t k = a.degree(), l = b.degree(), d = a.dim();
  if (k + l > d) throw Error("degree exceeds dimension");
  KForm out(k + l, d);
  std::vector<std::size_t> left(k), right(l);
  for (std::size_t r = 0; r < out.size(); ++r) {
    const auto tuple = out.sorted_tuple(r);
    Rational total;
    // choose k positions out of k+l for a
    std::vector<bool> pick(k + l, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      std::size_t li = 0, ri = 0, inversions = 0;
      for (std::size_t p = 0; p < k + l; ++p) {
        if (pick[p]) {
          left[li++] = tuple[p];
        } else {
          right[ri++] = tuple[p];
          // every later left element precedes this one in the shuffle
        }
      }
      // sign = (-1)^{# pairs (right before left)}
      std::size_t rights_seen = 0;
      for (std::size_t p = 0; p < k + l; ++p) {
        if (pick[p]) inversions += rights_seen;
        else ++rights_seen;
      }
      const Rational av = a(left);
      if (av.is_zero()) continue;
      const Rational bv = b(right);
      if (bv.is_zero()) continue;
      total += (inversions % 2 == 0) ? av * bv : Rational(-(av * bv));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    out.entry(r) = total;
  }
  return out;
}

/// The J-twist of a 3-form: (X,Y,Z) -> -a(JX, JY, JZ).
inline KForm j_twist(const KForm& a, const Endomorphism& j) {
  if (a.degree() != 3) throw Error("j_twist is defined on 3-forms only");
  Tensor t = a.to_tensor();
  for (std::size_t s = 0; s < 3; ++s) t = apply_in_slot(t, s, j);
  t *= Rational(-1);
  return KForm::from_tensor(t);
}

/// Norm convention for |T|^2, |theta|^2, |C|^2. Calibrated against the
/// dT-trace / Lee form / torsion scalar identity: the full index sum is the
/// one that satisfies it.
enum class NormConvention { FullSum, FactorialNormalized };
inline constexpr NormConvention kNormConvention = NormConvention::FullSum;

/// |t|^2 = sum over an orthonormal frame of t(e_a, e_b, ...)^2, computed as
/// the full contraction with g^{-1} in every slot.
inline Rational norm_sq(const Tensor& t, const Metric& g,
                        NormConvention conv = kNormConvention) {
  Tensor raised = t;
  for (std::size_t s = 0; s < t.rank(); ++s) raised = apply_in_slot(raised, s, g.inverse_matrix());
  Rational total;
  for (std::size_t p = 0; p < t.size(); ++p)
    if (!t.flat(p).is_zero()) total += t.flat(p) * raised.flat(p);
  if (conv == NormConvention::FactorialNormalized) {
    Rational f = 1;
    for (std::size_t i = 2; i <= t.rank(); ++i) f *= static_cast<long>(i);
    total /= f;
  }
  return total;
}

inline Rational norm_sq(const KForm& f, const Metric& g, NormConvention conv = kNormConvention) {
  return norm_sq(f.to_tensor(), g, conv);
}

/// Exact Gram-Schmidt in basis order. Throws when some normalization needs
/// an irrational square root.
inline std::vector<Vector> orthonormal_frame(const Metric& g) {
  const std::size_t n = g.dim();
  std::vector<Vector> frame;
  for (std::size_t a = 0; a < n; ++a) {
    Vector v(n);
    v[a] = 1;
    for (const auto& f : frame) {
      const Rational c = g(v, f);
      if (c.is_zero()) continue;
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * f[i];
    }
    const Rational len2 = g(v, v);
    const auto len = exact_sqrt(len2);
    if (!len)
      throw Error("supply orthonormal input: normalizing basis vector " + std::to_string(a) +
                  " needs sqrt(" + to_string(len2) + ")");
    for (auto& x : v) x /= *len;
    frame.push_back(std::move(v));
  }
  return frame;
}

}  // namespace hktlab
