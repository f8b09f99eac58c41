#pragma once

// Exact integer, rational and quadratic-field arithmetic: dense matrices,
// integer polynomials, determinants, characteristic and vector-minimal
// polynomials, bounded root splitting, and rank over prime fields.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pstlab {

/// Squarefree part of a positive integer: returns (s, r) with x = r*r*s.
inline std::pair<long long, long long> squarefree_split(long long x) {
  if (x <= 0) throw std::invalid_argument("squarefree_split: non-positive input");
  long long s = 1, r = 1;
  for (long long p = 2; p * p <= x; ++p) {
    int e = 0;
    while (x % p == 0) {
      x /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) r *= p;
    if (e % 2) s *= p;
  }
  s *= x;
  return {s, r};
}

inline mpq_class make_rational(long long num, long long den) {
  if (den == 0) throw std::domain_error("make_rational: zero denominator");
  mpq_class q{mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den))};
  q.canonicalize();
  return q;
}

inline bool is_squarefree(long long x) { return x > 0 && squarefree_split(x).second == 1; }

// ---------------------------------------------------------------------------
// ExactScalar: element of Q or of a real quadratic field Q(sqrt(delta)).

class ExactScalar {
 public:
  ExactScalar() = default;
  ExactScalar(long v) : p_(v) {}
  ExactScalar(int v) : p_(v) {}
  ExactScalar(long long v) : p_(static_cast<long>(v)) {}
  ExactScalar(const mpz_class& v) : p_(v) {}
  ExactScalar(mpq_class v) : p_(std::move(v)) {}

  /// p + q*sqrt(delta); delta must be squarefree and > 1.
  static ExactScalar quadratic(mpq_class p, mpq_class q, long long delta) {
    if (!is_squarefree(delta) || delta < 2)
      throw std::invalid_argument("ExactScalar: radicand must be squarefree and > 1");
    ExactScalar s;
    s.p_ = std::move(p);
    s.q_ = std::move(q);
    s.delta_ = delta;
    s.normalize();
    return s;
  }

  static ExactScalar sqrt_of(long long delta) { return quadratic(0, 1, delta); }

  const mpq_class& rational_part() const { return p_; }
  const mpq_class& irrational_part() const { return q_; }
  /// 0 when the value is rational.
  long long radicand() const { return delta_; }
  bool is_rational() const { return delta_ == 0; }
  bool is_zero() const { return sgn(p_) == 0 && delta_ == 0; }

  ExactScalar conjugate() const {
    ExactScalar c = *this;
    c.q_ = -c.q_;
    return c;
  }

  /// p^2 - q^2 delta, the field norm.
  mpq_class norm() const { return p_ * p_ - q_ * q_ * mpq_class(static_cast<long>(delta_)); }

  double to_double() const {
    return p_.get_d() + q_.get_d() * std::sqrt(static_cast<double>(delta_));
  }

  ExactScalar operator-() const {
    ExactScalar r = *this;
    r.p_ = -r.p_;
    r.q_ = -r.q_;
    return r;
  }

  ExactScalar& operator+=(const ExactScalar& o) {
    long long d = common_radicand(o);
    p_ += o.p_;
    q_ += o.q_;
    delta_ = d;
    normalize();
    return *this;
  }
  ExactScalar& operator-=(const ExactScalar& o) { return *this += -o; }
  ExactScalar& operator*=(const ExactScalar& o) {
    long long d = common_radicand(o);
    if (d == 0) {
      p_ *= o.p_;
      return *this;
    }
    mpq_class np = p_ * o.p_ + q_ * o.q_ * mpq_class(static_cast<long>(d));
    mpq_class nq = p_ * o.q_ + q_ * o.p_;
    p_ = std::move(np);
    q_ = std::move(nq);
    delta_ = d;
    normalize();
    return *this;
  }
  ExactScalar& operator/=(const ExactScalar& o) {
    if (o.is_zero()) throw std::domain_error("ExactScalar: division by zero");
    if (o.is_rational()) {
      p_ /= o.p_;
      q_ /= o.p_;
      return *this;
    }
    mpq_class nrm = o.norm();
    *this *= o.conjugate();
    p_ /= nrm;
    q_ /= nrm;
    return *this;
  }

  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
  friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }

  friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
    return a.delta_ == b.delta_ && a.p_ == b.p_ && a.q_ == b.q_;
  }

  std::string str() const {
    if (delta_ == 0) return p_.get_str();
    std::ostringstream os;
    if (sgn(p_) != 0) os << p_.get_str() << (sgn(q_) > 0 ? "+" : "");
    os << q_.get_str() << "*sqrt(" << delta_ << ")";
    return os.str();
  }

 private:
  long long common_radicand(const ExactScalar& o) const {
    if (delta_ == 0) return o.delta_;
    if (o.delta_ == 0 || o.delta_ == delta_) return delta_;
    throw std::domain_error("ExactScalar: arithmetic across different quadratic fields");
  }
  void normalize() {
    if (sgn(q_) == 0) delta_ = 0;
  }

  mpq_class p_{0};
  mpq_class q_{0};
  long long delta_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const ExactScalar& s) { return os << s.str(); }

using ExactVector = std::vector<ExactScalar>;
using RationalVector = std::vector<mpq_class>;
using IntVector = std::vector<mpz_class>;

// ---------------------------------------------------------------------------
// Dense row-major matrix.

template <typename T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  DenseMatrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("DenseMatrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// Principal submatrix with row and column k removed.
  DenseMatrix minor(std::size_t k) const {
    DenseMatrix m(rows_ - 1, cols_ - 1);
    for (std::size_t i = 0, r = 0; i < rows_; ++i) {
      if (i == k) continue;
      for (std::size_t j = 0, c = 0; j < cols_; ++j) {
        if (j == k) continue;
        m(r, c++) = (*this)(i, j);
      }
      ++r;
    }
    return m;
  }

  bool symmetric() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("DenseMatrix: shape mismatch");
    DenseMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += a(i, k) * b(k, j);
      }
    return r;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = DenseMatrix<mpz_class>;
using RationalMatrix = DenseMatrix<mpq_class>;

/// m * v for any scalar pair with a defined product.
template <typename M, typename V>
std::vector<V> mat_vec(const DenseMatrix<M>& m, const std::vector<V>& v) {
  if (m.cols() != v.size()) throw std::invalid_argument("mat_vec: shape mismatch");
  std::vector<V> r(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    V acc{};
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) == 0) continue;
      acc += V(m(i, j)) * v[j];
    }
    r[i] = acc;
  }
  return r;
}

template <typename T>
ExactVector to_exact(const std::vector<T>& v) {
  ExactVector r;
  r.reserve(v.size());
  for (const auto& x : v) r.emplace_back(x);
  return r;
}

inline ExactVector unit_vector(std::size_t n, std::size_t u) {
  ExactVector e(n);
  e.at(u) = ExactScalar(1);
  return e;
}

inline ExactVector operator+(ExactVector a, const ExactVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b.at(i);
  return a;
}
inline ExactVector operator-(ExactVector a, const ExactVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b.at(i);
  return a;
}
inline ExactVector operator-(ExactVector a) {
  for (auto& x : a) x = -x;
  return a;
}
inline ExactVector operator*(const ExactScalar& s, ExactVector a) {
  for (auto& x : a) x *= s;
  return a;
}
inline bool is_zero(const ExactVector& v) {
  return std::all_of(v.begin(), v.end(), [](const ExactScalar& x) { return x.is_zero(); });
}

/// Radicand shared by the entries of v; 0 if all rational.
inline long long radicand(const ExactVector& v) {
  for (const auto& x : v)
    if (!x.is_rational()) return x.radicand();
  return 0;
}

/// Sums vectors from several quadratic fields. Terms are grouped by field so
/// partial sums never mix radicands; the final total is only defined when
/// each field's contribution is closed under conjugation (rational).
class FieldwiseSum {
 public:
  explicit FieldwiseSum(std::size_t n) : n_(n) {}
  void add(const ExactVector& v) {
    auto [it, fresh] = groups_.try_emplace(radicand(v), ExactVector(n_));
    it->second = it->second + v;
  }
  ExactVector total() const {
    ExactVector s(n_);
    for (const auto& [d, v] : groups_) s = s + v;
    return s;
  }

 private:
  std::size_t n_;
  std::map<long long, ExactVector> groups_;
};

// ---------------------------------------------------------------------------
// IntPolynomial: coefficients over Z, stored lowest degree first.

class IntPolynomial {
 public:
  IntPolynomial() = default;
  /// Coefficients lowest degree first.
  explicit IntPolynomial(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }
  IntPolynomial(std::initializer_list<long> coeffs) {
    for (long x : coeffs) c_.emplace_back(x);
    trim();
  }
  /// Coefficients highest degree first, e.g. {1, -2, 0} is x^2 - 2x.
  static IntPolynomial from_high(std::initializer_list<long> coeffs) {
    std::vector<mpz_class> c;
    for (long x : coeffs) c.emplace_back(x);
    std::reverse(c.begin(), c.end());
    return IntPolynomial(std::move(c));
  }
  static IntPolynomial constant(const mpz_class& v) { return IntPolynomial(std::vector<mpz_class>{v}); }
  static IntPolynomial linear_root(const mpz_class& root) {
    return IntPolynomial(std::vector<mpz_class>{-root, 1});
  }

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const mpz_class& coeff(std::size_t i) const { return c_.at(i); }
  const std::vector<mpz_class>& coeffs() const { return c_; }
  const mpz_class& leading() const { return c_.back(); }
  bool monic() const { return !c_.empty() && c_.back() == 1; }

  /// Lowest nonzero coefficient (zero polynomial -> 0).
  mpz_class lowest_nonzero() const {
    for (const auto& x : c_)
      if (x != 0) return x;
    return 0;
  }

  template <typename S>
  S evaluate(const S& x) const {
    S acc{};
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + S(c_[i]);
    return acc;
  }

  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpz_class> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return IntPolynomial(std::move(r));
  }
  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return IntPolynomial(std::move(r));
  }
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
    return IntPolynomial(std::move(r));
  }
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.c_ == b.c_; }

  /// Exact division by a monic divisor; returns false (leaving out untouched)
  /// when the remainder is nonzero.
  bool divide_exact(const IntPolynomial& monic_divisor, IntPolynomial& out) const {
    if (!monic_divisor.monic()) throw std::invalid_argument("divide_exact: divisor must be monic");
    int dd = monic_divisor.degree();
    if (is_zero()) {
      out = {};
      return true;
    }
    if (degree() < dd) return false;
    std::vector<mpz_class> rem = c_;
    std::vector<mpz_class> q(degree() - dd + 1);
    for (int i = degree(); i >= dd; --i) {
      const mpz_class lead = rem[i];
      q[i - dd] = lead;
      if (lead == 0) continue;
      for (int j = 0; j <= dd; ++j) rem[i - dd + j] -= lead * monic_divisor.c_[j];
    }
    for (int i = 0; i < dd; ++i)
      if (rem[i] != 0) return false;
    out = IntPolynomial(std::move(q));
    return true;
  }

  /// Divides out the content and makes the leading coefficient positive.
  IntPolynomial primitive() const {
    if (is_zero()) return {};
    mpz_class g = 0;
    for (const auto& x : c_) g = gcd(g, x);
    if (sgn(c_.back()) < 0) g = -g;
    std::vector<mpz_class> r = c_;
    for (auto& x : r) x /= g;
    return IntPolynomial(std::move(r));
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
      const mpz_class& a = c_[i];
      if (a == 0) continue;
      mpz_class mag = abs(a);
      if (first) {
        if (sgn(a) < 0) os << "-";
      } else {
        os << (sgn(a) < 0 ? " - " : " + ");
      }
      first = false;
      if (i == 0 || mag != 1) os << mag.get_str();
      if (i >= 1) os << "x";
      if (i >= 2) os << "^" << i;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<mpz_class> c_;
};

inline std::ostream& operator<<(std::ostream& os, const IntPolynomial& p) { return os << p.str(); }

/// p(M) * v by Horner's rule.
template <typename M, typename V>
std::vector<V> apply_polynomial(const IntPolynomial& p, const DenseMatrix<M>& m, const std::vector<V>& v) {
  std::vector<V> acc(v.size());
  for (std::size_t i = p.coeffs().size(); i-- > 0;) {
    acc = mat_vec(m, acc);
    const V c(p.coeffs()[i]);
    for (std::size_t k = 0; k < v.size(); ++k) acc[k] += c * v[k];
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Polynomials over Q, used for gcds and spectral idempotents.

namespace qpoly {

using Poly = std::vector<mpq_class>;  // lowest degree first, no trailing zeros

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly from_int(const IntPolynomial& p) {
  Poly r(p.coeffs().begin(), p.coeffs().end());
  return r;
}

inline IntPolynomial to_primitive_int(Poly p) {
  trim(p);
  if (p.empty()) return {};
  mpz_class l = 1;
  for (const auto& x : p) l = lcm(l, x.get_den());
  std::vector<mpz_class> c;
  c.reserve(p.size());
  for (const auto& x : p) {
    mpq_class y = x * l;
    c.push_back(y.get_num());
  }
  return IntPolynomial(std::move(c)).primitive();
}

inline Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline Poly sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

/// Returns (quotient, remainder).
inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
  if (b.empty()) throw std::domain_error("qpoly::divmod: division by zero polynomial");
  trim(a);
  if (a.size() < b.size()) return {{}, a};
  const std::size_t db = b.size() - 1;
  Poly q(a.size() - db);
  const mpq_class& lb = b.back();
  for (std::size_t k = q.size(); k-- > 0;) {
    mpq_class f = a[k + db] / lb;
    q[k] = f;
    if (f != 0)
      for (std::size_t j = 0; j <= db; ++j) a[k + j] -= f * b[j];
  }
  a.resize(b.size() - 1);
  trim(a);
  trim(q);
  return {q, a};
}

inline Poly monic(Poly p) {
  trim(p);
  if (p.empty()) return p;
  mpq_class l = p.back();
  for (auto& x : p) x /= l;
  return p;
}

inline Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

/// Returns s with s*a = 1 mod m; a and m must be coprime.
inline Poly inverse_mod(const Poly& a, const Poly& m) {
  Poly r0 = m, r1 = divmod(a, m).second;
  Poly s0, s1{mpq_class(1)};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1);
    Poly s = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.size() != 1) throw std::domain_error("qpoly::inverse_mod: not coprime");
  for (auto& x : s0) x /= r0[0];
  return divmod(s0, m).second;
}

}  // namespace qpoly

/// Monic gcd over Q, returned as a primitive integer polynomial.
inline IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b) {
  return qpoly::to_primitive_int(qpoly::gcd(qpoly::from_int(a), qpoly::from_int(b)));
}

// ---------------------------------------------------------------------------
// Determinant, characteristic polynomial, vector minimal polynomial.

/// Fraction-free Gaussian elimination (Bareiss) with row pivoting.
inline mpz_class det_bareiss(IntMatrix m) {
  if (!m.square()) throw std::invalid_argument("det_bareiss: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// det(xI - m) by Berkowitz's division-free algorithm.
inline IntPolynomial charpoly(const IntMatrix& m) {
  if (!m.square()) throw std::invalid_argument("charpoly: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return IntPolynomial{1};
  // Coefficients highest degree first.
  std::vector<mpz_class> c{1, -m(0, 0)};
  for (std::size_t r = 1; r < n; ++r) {
    // Toeplitz column: 1, -a_rr, -R S, -R A S, ..., -R A^{r-1} S.
    std::vector<mpz_class> col(r + 2);
    col[0] = 1;
    col[1] = -m(r, r);
    std::vector<mpz_class> s(r);
    for (std::size_t i = 0; i < r; ++i) s[i] = m(i, r);
    for (std::size_t k = 0; k < r; ++k) {
      mpz_class dot = 0;
      for (std::size_t j = 0; j < r; ++j) dot += m(r, j) * s[j];
      col[k + 2] = -dot;
      if (k + 1 < r) {
        std::vector<mpz_class> next(r);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j) next[i] += m(i, j) * s[j];
        s = std::move(next);
      }
    }
    std::vector<mpz_class> nc(r + 2);
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j) nc[i] += col[i - j] * c[j];
    c = std::move(nc);
  }
  std::reverse(c.begin(), c.end());
  return IntPolynomial(std::move(c));
}

/// Least-degree polynomial p with p(m) v = 0, scaled to primitive integer
/// coefficients (monic whenever m is an integer matrix).
template <typename T>
IntPolynomial vector_minpoly(const DenseMatrix<T>& m, const RationalVector& v) {
  if (!m.square() || m.rows() != v.size()) throw std::invalid_argument("vector_minpoly: shape mismatch");
  const std::size_t n = v.size();
  // Echelon rows of the Krylov space; each row carries its expression in the
  // Krylov basis so a vanishing reduction yields the dependence directly.
  struct Row {
    RationalVector vec;
    qpoly::Poly combo;
    std::size_t pivot;
  };
  std::vector<Row> basis;
  RationalVector k = v;
  for (std::size_t deg = 0; deg <= n; ++deg) {
    Row cur{k, qpoly::Poly(deg + 1), 0};
    cur.combo[deg] = 1;
    for (const Row& b : basis) {
      const mpq_class& x = cur.vec[b.pivot];
      if (x == 0) continue;
      mpq_class f = x / b.vec[b.pivot];
      for (std::size_t i = 0; i < n; ++i)
        if (b.vec[i] != 0) cur.vec[i] -= f * b.vec[i];
      for (std::size_t i = 0; i < b.combo.size(); ++i) cur.combo[i] -= f * b.combo[i];
    }
    std::size_t piv = 0;
    while (piv < n && cur.vec[piv] == 0) ++piv;
    if (piv == n) return qpoly::to_primitive_int(qpoly::monic(cur.combo));
    cur.pivot = piv;
    basis.push_back(std::move(cur));
    k = mat_vec(m, k);
  }
  throw std::logic_error("vector_minpoly: Krylov sequence failed to terminate");
}

/// Integer matrix and vector: fraction-free elimination on the Krylov
/// sequence. The dependence found is a scalar multiple of the monic minimal
/// polynomial, which has integer coefficients, so its primitive part is it.
inline IntPolynomial vector_minpoly(const IntMatrix& m, const IntVector& v) {
  if (!m.square() || m.rows() != v.size()) throw std::invalid_argument("vector_minpoly: shape mismatch");
  const std::size_t n = v.size();
  struct Row {
    IntVector vec;
    std::vector<mpz_class> combo;
    std::size_t pivot;
  };
  std::vector<Row> basis;
  IntVector k = v;
  mpz_class g, a, c;
  for (std::size_t deg = 0; deg <= n; ++deg) {
    Row cur{k, std::vector<mpz_class>(deg + 1), 0};
    cur.combo[deg] = 1;
    for (const Row& b : basis) {
      const mpz_class& x = cur.vec[b.pivot];
      if (x == 0) continue;
      const mpz_class& p = b.vec[b.pivot];
      mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
      mpz_divexact(a.get_mpz_t(), p.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(c.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
      for (std::size_t i = 0; i < n; ++i) cur.vec[i] = a * cur.vec[i] - c * b.vec[i];
      for (std::size_t i = 0; i < cur.combo.size(); ++i)
        cur.combo[i] = a * cur.combo[i] - (i < b.combo.size() ? c * b.combo[i] : mpz_class(0));
    }
    g = 0;
    for (const auto& x : cur.vec) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    std::size_t piv = 0;
    while (piv < n && cur.vec[piv] == 0) ++piv;
    if (piv == n) {
      IntPolynomial dep(cur.combo);
      dep = dep.primitive();
      if (dep.leading() != 1) throw std::logic_error("vector_minpoly: non-monic dependence");
      return dep;
    }
    for (const auto& x : cur.combo) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1) {
      for (auto& x : cur.vec) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
      for (auto& x : cur.combo) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    }
    cur.pivot = piv;
    basis.push_back(std::move(cur));
    k = mat_vec(m, k);
  }
  throw std::logic_error("vector_minpoly: Krylov sequence failed to terminate");
}

// ---------------------------------------------------------------------------
// Splitting a polynomial into integer roots, real quadratic pairs and a
// residual of higher degree.

struct IntegerRoot {
  long long value;
  int multiplicity;
  friend bool operator==(const IntegerRoot&, const IntegerRoot&) = default;
};

/// The conjugate pair (a +- b sqrt(delta)) / 2, from the factor x^2 - a x + t.
struct QuadraticRoots {
  long long a;
  long long b;  // > 0
  long long delta;
  long long t;  // product of the pair
  int multiplicity;
  IntPolynomial factor() const { return IntPolynomial{static_cast<long>(t), static_cast<long>(-a), 1}; }
  friend bool operator==(const QuadraticRoots&, const QuadraticRoots&) = default;
};

struct SupportFactorization {
  std::vector<IntegerRoot> integer_roots;  // descending
  std::vector<QuadraticRoots> quadratic_roots;
  IntPolynomial residual;

  /// Product of all reported factors.
  IntPolynomial reconstruct() const {
    IntPolynomial p = residual;
    for (const auto& r : integer_roots)
      for (int i = 0; i < r.multiplicity; ++i) p = p * IntPolynomial::linear_root(static_cast<long>(r.value));
    for (const auto& q : quadratic_roots)
      for (int i = 0; i < q.multiplicity; ++i) p = p * q.factor();
    return p;
  }
};

namespace detail {

inline bool divides(const mpz_class& d, const mpz_class& x) {
  return d != 0 && mpz_divisible_p(x.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline bool is_perfect_square(long long x) {
  if (x < 0) return false;
  long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(x))));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r * r == x;
}

}  // namespace detail

/// Complete split within |root| <= root_bound. p must be monic.
inline SupportFactorization factor_support(const IntPolynomial& p, long long root_bound) {
  if (!p.monic()) throw std::invalid_argument("factor_support: polynomial must be monic");
  if (root_bound < 0) throw std::invalid_argument("factor_support: negative root bound");
  SupportFactorization out;
  IntPolynomial rest = p;

  const mpz_class low = rest.lowest_nonzero();
  for (long long lam = root_bound; lam >= -root_bound; --lam) {
    if (lam != 0 && !detail::divides(mpz_class(static_cast<long>(lam)), low)) continue;
    int mult = 0;
    IntPolynomial q;
    while (rest.degree() >= 1 && rest.divide_exact(IntPolynomial::linear_root(static_cast<long>(lam)), q)) {
      rest = q;
      ++mult;
    }
    if (mult) out.integer_roots.push_back({lam, mult});
  }

  // Remaining monic factors x^2 - s x + t with both roots within the bound:
  // |s| <= 2B, |t| <= B^2, and t divides rest(0) (nonzero, since 0 was removed).
  if (rest.degree() >= 2) {
    const long long tb = root_bound * root_bound;
    mpz_class r1 = rest.evaluate(mpz_class(1)), rm1 = rest.evaluate(mpz_class(-1));
    for (long long t = -tb; t <= tb && rest.degree() >= 2; ++t) {
      if (t == 0 || !detail::divides(mpz_class(static_cast<long>(t)), rest.coeff(0))) continue;
      for (long long s = -2 * root_bound; s <= 2 * root_bound && rest.degree() >= 2; ++s) {
        const long long disc = s * s - 4 * t;
        if (disc <= 0 || detail::is_perfect_square(disc)) continue;
        // rest(1) and rest(-1) are divisible by the factor's values there.
        const mpz_class f1(static_cast<long>(1 - s + t)), fm1(static_cast<long>(1 + s + t));
        if (r1 != 0 && !detail::divides(f1, r1)) continue;
        if (rm1 != 0 && !detail::divides(fm1, rm1)) continue;
        const IntPolynomial f{static_cast<long>(t), static_cast<long>(-s), 1};
        int mult = 0;
        IntPolynomial q;
        while (rest.degree() >= 2 && rest.divide_exact(f, q)) {
          rest = q;
          ++mult;
        }
        if (mult) {
          r1 = rest.evaluate(mpz_class(1));
          rm1 = rest.evaluate(mpz_class(-1));
          auto [delta, b] = squarefree_split(disc);
          out.quadratic_roots.push_back({s, b, delta, t, mult});
        }
      }
    }
  }
  std::sort(out.quadratic_roots.begin(), out.quadratic_roots.end(), [](const auto& x, const auto& y) {
    return x.a + x.b * std::sqrt(static_cast<double>(x.delta)) > y.a + y.b * std::sqrt(static_cast<double>(y.delta));
  });
  out.residual = rest;
  return out;
}

// ---------------------------------------------------------------------------

/// Splits p, a divisor of a polynomial already split as `whole`, by trial
/// division with the known factors.
inline SupportFactorization factor_with(const IntPolynomial& p, const SupportFactorization& whole) {
  SupportFactorization out;
  IntPolynomial rest = p, q;
  for (const auto& r : whole.integer_roots) {
    int mult = 0;
    while (rest.degree() >= 1 && rest.divide_exact(IntPolynomial::linear_root(static_cast<long>(r.value)), q)) {
      rest = q;
      ++mult;
    }
    if (mult) out.integer_roots.push_back({r.value, mult});
  }
  for (const auto& r : whole.quadratic_roots) {
    int mult = 0;
    const IntPolynomial f = r.factor();
    while (rest.degree() >= 2 && rest.divide_exact(f, q)) {
      rest = q;
      ++mult;
    }
    if (mult) out.quadratic_roots.push_back({r.a, r.b, r.delta, r.t, mult});
  }
  out.residual = rest;
  return out;
}

inline bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Rank of m over the prime field Z/p, p an odd prime.
inline int rank_mod_p(const IntMatrix& m, long long p) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("rank_mod_p: modulus must be an odd prime");
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::vector<long long>> a(rows, std::vector<long long>(cols));
  const mpz_class mp(static_cast<long>(p));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), m(i, j).get_mpz_t(), mp.get_mpz_t());
      a[i][j] = r.get_si();
    }
  auto inv = [p](long long x) {
    long long r = 1, e = p - 2;
    x %= p;
    while (e) {
      if (e & 1) r = r * x % p;
      x = x * x % p;
      e >>= 1;
    }
    return r;
  };
  int rank = 0;
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    const long long iv = inv(a[rank][c]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == static_cast<std::size_t>(rank) || a[i][c] == 0) continue;
      const long long f = a[i][c] * iv % p;
      for (std::size_t j = c; j < cols; ++j) a[i][j] = ((a[i][j] - f * a[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

/// One factor (m - shift I) / divisor of a Lagrange product.
struct ShiftFactor {
  ExactScalar shift;
  ExactScalar divisor;
};

/// (prod_i (m - shift_i I) / divisor_i) v, factors applied in list order.
template <typename T>
ExactVector apply_factored(const DenseMatrix<T>& m, ExactVector v, std::span<const ShiftFactor> factors) {
  for (const auto& f : factors) {
    if (f.divisor.is_zero()) throw std::domain_error("apply_factored: zero divisor");
    ExactVector mv = mat_vec(m, v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (mv[i] - f.shift * v[i]) / f.divisor;
  }
  return v;
}

}  // namespace pstlab
