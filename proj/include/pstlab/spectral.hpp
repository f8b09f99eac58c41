#pragma once

// Eigenvalue supports of vertices, exact projections of characteristic
// vectors onto eigenspaces, and strong cospectrality.

#include "pstlab/exact.hpp"
#include "pstlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pstlab {

class DisconnectedGraphError : public std::invalid_argument {
 public:
  DisconnectedGraphError() : std::invalid_argument("graph is disconnected") {}
};

/// An eigenvalue named exactly: an integer, a real quadratic integer
/// (a + b sqrt(delta)) / 2, or "some root of" a factor of degree >= 3.
struct EigenvalueId {
  enum class Kind { Integer, Quadratic, NonQuadratic };

  Kind kind = Kind::Integer;
  long long value = 0;             // Integer
  long long a = 0, b = 0, delta = 0;  // Quadratic, b != 0
  IntPolynomial factor;            // NonQuadratic

  static EigenvalueId integer(long long v) {
    EigenvalueId id;
    id.value = v;
    return id;
  }
  static EigenvalueId quadratic(long long a, long long b, long long delta) {
    if (b == 0) throw std::invalid_argument("EigenvalueId: quadratic with b = 0");
    if (delta < 2 || !is_squarefree(delta)) throw std::invalid_argument("EigenvalueId: radicand not squarefree > 1");
    EigenvalueId id;
    id.kind = Kind::Quadratic;
    id.a = a;
    id.b = b;
    id.delta = delta;
    return id;
  }
  static EigenvalueId non_quadratic(IntPolynomial f) {
    EigenvalueId id;
    id.kind = Kind::NonQuadratic;
    id.factor = std::move(f);
    return id;
  }

  bool is_integer() const { return kind == Kind::Integer; }
  bool is_quadratic() const { return kind == Kind::Quadratic; }
  bool is_residual() const { return kind == Kind::NonQuadratic; }

  ExactScalar exact() const {
    switch (kind) {
      case Kind::Integer: return ExactScalar(value);
      case Kind::Quadratic: {
        mpq_class half_a(static_cast<long>(a)), half_b(static_cast<long>(b));
        half_a /= 2;
        half_b /= 2;
        return ExactScalar::quadratic(half_a, half_b, delta);
      }
      case Kind::NonQuadratic: break;
    }
    throw std::logic_error("EigenvalueId: no exact value for a residual factor");
  }

  /// The algebraic conjugate of a quadratic id.
  EigenvalueId conjugate() const { return is_quadratic() ? quadratic(a, -b, delta) : *this; }

  /// For ordering and display only.
  double approx() const {
    switch (kind) {
      case Kind::Integer: return static_cast<double>(value);
      case Kind::Quadratic: return (a + b * std::sqrt(static_cast<double>(delta))) / 2.0;
      case Kind::NonQuadratic: break;
    }
    return std::nan("");
  }

  std::string str() const {
    switch (kind) {
      case Kind::Integer: return std::to_string(value);
      case Kind::Quadratic: {
        const long long mag = b < 0 ? -b : b;
        std::string s = "(";
        if (a != 0) s += std::to_string(a);
        if (a != 0 || b < 0) s += b < 0 ? "-" : "+";
        if (mag != 1) s += std::to_string(mag) + "*";
        return s + "sqrt(" + std::to_string(delta) + "))/2";
      }
      case Kind::NonQuadratic: return "root of " + factor.str();
    }
    return "?";
  }

  friend bool operator==(const EigenvalueId& x, const EigenvalueId& y) {
    if (x.kind != y.kind) return false;
    switch (x.kind) {
      case Kind::Integer: return x.value == y.value;
      case Kind::Quadratic: return x.a == y.a && x.b == y.b && x.delta == y.delta;
      case Kind::NonQuadratic: return x.factor == y.factor;
    }
    return false;
  }
};

/// Descending by value; residual factors last.
inline bool eigenvalue_order(const EigenvalueId& x, const EigenvalueId& y) {
  if (x.is_residual() != y.is_residual()) return y.is_residual();
  if (x.is_residual()) return x.factor.str() < y.factor.str();
  return x.approx() > y.approx();
}

struct SupportProfile {
  MatrixKind kind = MatrixKind::Laplacian;
  int u = 0;
  IntPolynomial minpoly;              // minimal polynomial of e_u
  std::vector<EigenvalueId> support;  // descending, residual last
  /// projections[i] = F e_u for support[i]; empty for a residual id.
  std::vector<ExactVector> projections;
  /// Sum of the projections onto all eigenvalues that are roots of the
  /// residual factor; zero when residual_present is false.
  ExactVector residual_component;
  bool residual_present = false;

  const ExactVector* projection(const EigenvalueId& id) const {
    for (std::size_t i = 0; i < support.size(); ++i)
      if (support[i] == id && !support[i].is_residual()) return &projections[i];
    return nullptr;
  }
  bool in_support(const EigenvalueId& id) const {
    return std::find(support.begin(), support.end(), id) != support.end();
  }
};

namespace detail {

inline IntVector int_unit(std::size_t n, std::size_t u) {
  IntVector e(n);
  e.at(u) = 1;
  return e;
}

/// Projection of v onto the sum of eigenspaces for the roots of factor f,
/// where f divides the minimal polynomial m of v: r(M) v with r = 1 mod f,
/// r = 0 mod m/f.
inline RationalVector component_for_factor(const IntMatrix& m, const IntVector& v, const IntPolynomial& minpoly,
                                           const IntPolynomial& f) {
  IntPolynomial cof;
  if (!minpoly.divide_exact(qpoly::to_primitive_int(qpoly::monic(qpoly::from_int(f))), cof))
    throw std::logic_error("component_for_factor: factor does not divide the minimal polynomial");
  const qpoly::Poly fq = qpoly::monic(qpoly::from_int(f));
  const qpoly::Poly hq = qpoly::from_int(cof);
  const qpoly::Poly idem = qpoly::mul(hq, qpoly::inverse_mod(hq, fq));
  RationalVector acc(v.size());
  const RationalVector rv(v.begin(), v.end());
  for (std::size_t i = idem.size(); i-- > 0;) {
    acc = mat_vec(m, acc);
    for (std::size_t k = 0; k < v.size(); ++k) acc[k] += idem[i] * rv[k];
  }
  return acc;
}

}  // namespace detail

/// Support and projections of e_u for the given integer symmetric matrix.
/// root_bound bounds the absolute value of every eigenvalue.
/// Profile from a known minimal polynomial of e_u and its splitting.
inline SupportProfile support_profile(const IntMatrix& m, MatrixKind kind, int u, IntPolynomial minpoly,
                                      const SupportFactorization& fac) {
  const std::size_t n = m.rows();
  if (u < 0 || static_cast<std::size_t>(u) >= n) throw std::out_of_range("support_profile: vertex out of range");
  SupportProfile prof;
  prof.kind = kind;
  prof.u = u;
  const IntVector e = detail::int_unit(n, u);
  prof.minpoly = std::move(minpoly);

  // F_lambda e_u = q(M) e_u / q(lambda), q = minpoly / (x - lambda).
  for (const auto& r : fac.integer_roots) {
    IntPolynomial q;
    prof.minpoly.divide_exact(IntPolynomial::linear_root(static_cast<long>(r.value)), q);
    const IntVector w = apply_polynomial(q, m, e);
    const mpz_class d = q.evaluate(mpz_class(static_cast<long>(r.value)));
    ExactVector proj(n);
    for (std::size_t i = 0; i < n; ++i) {
      mpq_class x(w[i], d);
      x.canonicalize();
      proj[i] = ExactScalar(std::move(x));
    }
    prof.support.push_back(EigenvalueId::integer(r.value));
    prof.projections.push_back(std::move(proj));
  }
  // For a root theta of x^2 - a x + t with conjugate theta':
  // F_theta e_u = (M - theta') q(M) e_u / ((theta - theta') q(theta)).
  for (const auto& qr : fac.quadratic_roots) {
    IntPolynomial q;
    prof.minpoly.divide_exact(qr.factor(), q);
    const ExactVector w = to_exact(apply_polynomial(q, m, e));
    for (long long sign : {1LL, -1LL}) {
      const EigenvalueId id = EigenvalueId::quadratic(qr.a, sign * qr.b, qr.delta);
      const ExactScalar theta = id.exact(), other = id.conjugate().exact();
      const ShiftFactor step{other, theta - other};
      ExactVector proj = apply_factored(m, w, std::span<const ShiftFactor>(&step, 1));
      const ExactScalar qt = q.evaluate(theta);
      for (auto& x : proj) x /= qt;
      prof.support.push_back(id);
      prof.projections.push_back(std::move(proj));
    }
  }
  if (fac.residual.degree() >= 1) {
    prof.residual_present = true;
    prof.support.push_back(EigenvalueId::non_quadratic(fac.residual));
    prof.projections.emplace_back();
    prof.residual_component = to_exact(detail::component_for_factor(m, e, prof.minpoly, fac.residual));
  } else {
    prof.residual_component = ExactVector(n);
  }

  // Sort support and projections together.
  std::vector<std::size_t> idx(prof.support.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return eigenvalue_order(prof.support[i], prof.support[j]);
  });
  std::vector<EigenvalueId> sup;
  std::vector<ExactVector> proj;
  for (std::size_t i : idx) {
    sup.push_back(std::move(prof.support[i]));
    proj.push_back(std::move(prof.projections[i]));
  }
  prof.support = std::move(sup);
  prof.projections = std::move(proj);
  return prof;
}

inline SupportProfile support_profile(const IntMatrix& m, MatrixKind kind, int u, long long root_bound) {
  if (u < 0 || static_cast<std::size_t>(u) >= m.rows()) throw std::out_of_range("support_profile: vertex out of range");
  IntPolynomial minpoly = vector_minpoly(m, detail::int_unit(m.rows(), u));
  const SupportFactorization fac = factor_support(minpoly, root_bound);
  return support_profile(m, kind, u, std::move(minpoly), fac);
}

inline SupportProfile support_profile(const Graph& g, MatrixKind kind, int u) {
  if (!is_connected(g)) throw DisconnectedGraphError();
  return support_profile(graph_matrix(g, kind), kind, u, spectral_bound(g, kind));
}

/// Sum of all projections plus the residual component; equals e_u exactly.
inline ExactVector resolution_of_identity(const SupportProfile& p) {
  FieldwiseSum s(p.residual_component.size());
  s.add(p.residual_component);
  for (std::size_t i = 0; i < p.support.size(); ++i)
    if (!p.support[i].is_residual()) s.add(p.projections[i]);
  return s.total();
}

// ---------------------------------------------------------------------------

struct CospectralityProfile {
  int u = 0, v = 0;
  bool strongly_cospectral = false;
  std::optional<EigenvalueId> witness;  // set when not strongly cospectral
  std::vector<EigenvalueId> plus_set, minus_set;
  ExactVector z_plus, z_minus;

  bool in_plus(const EigenvalueId& id) const {
    return std::find(plus_set.begin(), plus_set.end(), id) != plus_set.end();
  }
  bool in_minus(const EigenvalueId& id) const {
    return std::find(minus_set.begin(), minus_set.end(), id) != minus_set.end();
  }
};

/// Minimal polynomials of e_u - e_v and e_u + e_v.
struct SplitMinpolys {
  IntPolynomial minus, plus;
};

inline SplitMinpolys classify_by_minpolys(const IntMatrix& m, int u, int v) {
  if (u == v) throw std::invalid_argument("classify_by_minpolys: u == v");
  const std::size_t n = m.rows();
  IntVector d(n), s(n);
  d.at(u) = 1;
  d.at(v) = -1;
  s.at(u) = 1;
  s.at(v) = 1;
  return {vector_minpoly(m, d), vector_minpoly(m, s)};
}

inline SplitMinpolys classify_by_minpolys(const Graph& g, MatrixKind kind, int u, int v) {
  return classify_by_minpolys(graph_matrix(g, kind), u, v);
}

/// Strong cospectrality read off the two minimal polynomials alone: the
/// supports agree, and each support root annihilates exactly one of e_u -+ e_v.
inline bool strongly_cospectral_by_minpolys(const IntPolynomial& minpoly_u, const IntPolynomial& minpoly_v,
                                            const SplitMinpolys& split) {
  if (!(minpoly_u == minpoly_v)) return false;
  if (gcd(split.minus, split.plus).degree() > 0) return false;
  return split.minus * split.plus == minpoly_u;
}

/// Compares two precomputed profiles of the same matrix.
inline CospectralityProfile compare_profiles(const IntMatrix& m, const SupportProfile& pu, const SupportProfile& pv) {
  const std::size_t n = m.rows();
  CospectralityProfile c;
  c.u = pu.u;
  c.v = pv.u;
  auto fail = [&](EigenvalueId w) {
    c.strongly_cospectral = false;
    c.witness = std::move(w);
    c.plus_set.clear();
    c.minus_set.clear();
    c.z_plus.clear();
    c.z_minus.clear();
    return c;
  };

  // Support difference among exactly named eigenvalues.
  for (const auto& id : pu.support)
    if (!id.is_residual() && !pv.in_support(id)) return fail(id);
  for (const auto& id : pv.support)
    if (!id.is_residual() && !pu.in_support(id)) return fail(id);

  FieldwiseSum z_plus(n), z_minus(n);
  for (std::size_t i = 0; i < pu.support.size(); ++i) {
    const EigenvalueId& id = pu.support[i];
    if (id.is_residual()) continue;
    const ExactVector& xu = pu.projections[i];
    const ExactVector& xv = *pv.projection(id);
    if (xu == xv) {
      c.plus_set.push_back(id);
      z_plus.add(xu);
    } else if (xu == -xv) {
      c.minus_set.push_back(id);
      z_minus.add(xu);
    } else {
      return fail(id);
    }
  }

  if (pu.residual_present || pv.residual_present) {
    if (!(pu.minpoly == pv.minpoly)) {
      // Named parts agree, so the residual factors differ.
      const EigenvalueId& r = pu.residual_present ? pu.support.back() : pv.support.back();
      return fail(r);
    }
    const IntPolynomial& res = pu.support.back().factor;
    const SplitMinpolys split = classify_by_minpolys(m, pu.u, pv.u);
    const IntPolynomial both = gcd(gcd(res, split.minus), split.plus);
    if (both.degree() > 0) return fail(EigenvalueId::non_quadratic(both));
    const IntPolynomial plus_part = gcd(res, split.plus);
    const IntPolynomial minus_part = gcd(res, split.minus);
    const IntVector e = detail::int_unit(n, pu.u);
    if (plus_part.degree() > 0) {
      c.plus_set.push_back(EigenvalueId::non_quadratic(plus_part));
      z_plus.add(to_exact(detail::component_for_factor(m, e, pu.minpoly, plus_part)));
    }
    if (minus_part.degree() > 0) {
      c.minus_set.push_back(EigenvalueId::non_quadratic(minus_part));
      z_minus.add(to_exact(detail::component_for_factor(m, e, pu.minpoly, minus_part)));
    }
  }
  c.z_plus = z_plus.total();
  c.z_minus = z_minus.total();
  c.strongly_cospectral = true;
  return c;
}

inline CospectralityProfile cospectrality_profile(const Graph& g, MatrixKind kind, int u, int v) {
  if (u == v) throw std::invalid_argument("cospectrality_profile: u == v");
  if (!is_connected(g)) throw DisconnectedGraphError();
  const IntMatrix m = graph_matrix(g, kind);
  const long long bound = spectral_bound(g, kind);
  return compare_profiles(m, support_profile(m, kind, u, bound), support_profile(m, kind, v, bound));
}

}  // namespace pstlab
