#pragma once

// Independent replay of negative verdicts. Nothing here reuses the decider's
// spectral machinery: a stored vector x is accepted as F_lambda e_u only if
// M x = lambda x and e_u - x lies in the range of M - lambda I (for a
// symmetric M those two facts pin x down), and residual claims are replayed
// by evaluating polynomials at the matrix directly.

#include "pstlab/exact.hpp"
#include "pstlab/graph.hpp"
#include "pstlab/pst.hpp"
#include "pstlab/spectral.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace pstlab {

struct CertificateCheck {
  bool valid = false;
  std::string reason;
};

namespace certify {

using Rows = std::vector<std::vector<ExactScalar>>;

/// Does y lie in the column space of the square matrix a?
inline bool in_column_space(Rows a, std::vector<ExactScalar> y) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) a[i].push_back(y[i]);
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t p = row;
    while (p < n && a[p][col].is_zero()) ++p;
    if (p == n) continue;
    std::swap(a[p], a[row]);
    const ExactScalar inv = ExactScalar(1) / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || a[i][col].is_zero()) continue;
      const ExactScalar f = a[i][col];
      for (std::size_t j = col; j <= n; ++j) a[i][j] -= f * a[row][j];
    }
    ++row;
  }
  for (std::size_t i = row; i < n; ++i)
    if (!a[i][n].is_zero()) return false;
  return true;
}

inline std::vector<ExactScalar> times(const IntMatrix& m, const ExactVector& x) {
  std::vector<ExactScalar> y(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) y[i] += ExactScalar(m(i, j)) * x[j];
  return y;
}

/// x == F_lambda e_u for the symmetric integer matrix m.
inline bool is_projection(const IntMatrix& m, int u, const ExactScalar& lambda, const ExactVector& x) {
  const std::size_t n = m.rows();
  if (x.size() != n) return false;
  const auto mx = times(m, x);
  for (std::size_t i = 0; i < n; ++i)
    if (!(mx[i] == lambda * x[i])) return false;
  Rows shifted(n, std::vector<ExactScalar>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) shifted[i][j] = ExactScalar(m(i, j)) - (i == j ? lambda : ExactScalar(0));
  std::vector<ExactScalar> rest(n);
  for (std::size_t i = 0; i < n; ++i) rest[i] = (static_cast<int>(i) == u ? ExactScalar(1) : ExactScalar(0)) - x[i];
  return in_column_space(std::move(shifted), std::move(rest));
}

inline bool nonzero(const ExactVector& x) {
  return std::any_of(x.begin(), x.end(), [](const ExactScalar& s) { return !s.is_zero(); });
}

inline ExactVector negated(ExactVector x) {
  for (auto& s : x) s = -s;
  return x;
}

/// p(M) e_u by Horner's rule over the integers.
inline IntVector poly_at(const IntPolynomial& p, const IntMatrix& m, int u) {
  const std::size_t n = m.rows();
  IntVector acc(n);
  for (int k = p.degree(); k >= 0; --k) {
    IntVector next(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next[i] += m(i, j) * acc[j];
    next[static_cast<std::size_t>(u)] += p.coeff(k);
    acc = std::move(next);
  }
  return acc;
}

/// Every eigenvalue of a graph matrix lies in [-b, b].
inline long long eigenvalue_bound(const Graph& g, MatrixKind kind) {
  int maxdeg = 0;
  for (int u = 0; u < g.order(); ++u) maxdeg = std::max(maxdeg, g.degree(u));
  return kind == MatrixKind::Adjacency ? maxdeg : 2LL * maxdeg;
}

inline bool has_integer_root(const IntPolynomial& r, long long bound) {
  for (long long x = -bound; x <= bound; ++x)
    if (r.evaluate(mpz_class(static_cast<long>(x))) == 0) return true;
  return false;
}

/// Monic quadratic factor x^2 - a x + t whose roots lie in [-b, b].
inline bool has_quadratic_factor(const IntPolynomial& r, long long bound) {
  if (r.degree() < 2) return false;
  const mpz_class c0 = r.coeff(0);
  IntPolynomial q;
  for (long long a = -2 * bound; a <= 2 * bound; ++a)
    for (long long t = -bound * bound; t <= bound * bound; ++t) {
      if (t == 0 || !mpz_divisible_ui_p(c0.get_mpz_t(), static_cast<unsigned long>(t < 0 ? -t : t))) continue;
      if (r.divide_exact(IntPolynomial{static_cast<long>(t), static_cast<long>(-a), 1}, q)) return true;
    }
  return false;
}

/// The integer pair (a, b) with value (a + b sqrt(delta)) / 2.
inline std::pair<long long, long long> half_parts(const EigenvalueId& id) {
  return id.is_integer() ? std::pair{2 * id.value, 0LL} : std::pair{id.a, id.b};
}

}  // namespace certify

/// Replays the failed condition recorded in a No report for graph g.
inline CertificateCheck validate_certificate(const Graph& g, const PSTReport& r) {
  using namespace certify;
  auto bad = [](std::string why) { return CertificateCheck{false, std::move(why)}; };
  auto ok = [](std::string why) { return CertificateCheck{true, std::move(why)}; };
  if (r.verdict != Verdict::No) return bad("report is not a negative verdict");
  if (write_graph6(g) != r.graph6) return bad("graph does not match the report");
  const IntMatrix m = graph_matrix(g, r.kind);
  const Certificate& c = r.certificate;

  // Each witness must carry the true projections of e_u and e_v.
  auto check_record = [&](const ProjectionRecord& w, std::string& why) {
    if (w.eigenvalue.is_residual()) {
      why = "witness has no closed form";
      return false;
    }
    const ExactScalar lambda = w.eigenvalue.exact();
    if (!is_projection(m, r.u, lambda, w.of_u)) {
      why = "stored projection of u at " + w.eigenvalue.str() + " is wrong";
      return false;
    }
    if (!is_projection(m, r.v, lambda, w.of_v)) {
      why = "stored projection of v at " + w.eigenvalue.str() + " is wrong";
      return false;
    }
    return true;
  };
  std::string why;
  for (const auto& w : c.witnesses)
    if (!check_record(w, why)) return bad(why);

  switch (c.kind) {
    case CertificateKind::None:
      return bad("negative verdict without a certificate");

    case CertificateKind::NotStronglyCospectral: {
      if (c.witnesses.size() != 1) return bad("expected one witness");
      const auto& w = c.witnesses.front();
      if (!nonzero(w.of_u) && !nonzero(w.of_v)) return bad("witness eigenvalue is in neither support");
      if (w.of_u == w.of_v || w.of_u == negated(w.of_v)) return bad("projections agree up to sign");
      return ok("F e_u != +-F e_v at " + w.eigenvalue.str());
    }

    case CertificateKind::NonIntegerSupport:
    case CertificateKind::ResidualFactor: {
      if (c.vertex < 0) {
        if (c.kind != CertificateKind::NonIntegerSupport || c.witnesses.size() != 1) return bad("malformed certificate");
        const auto& w = c.witnesses.front();
        if (w.eigenvalue.is_integer() || !w.eigenvalue.is_quadratic()) return bad("witness is an integer");
        if (!nonzero(w.of_u)) return bad("witness is not in the support of u");
        return ok("irrational eigenvalue " + w.eigenvalue.str() + " in the support");
      }
      if (c.vertex != r.u && c.vertex != r.v) return bad("residual vertex is not part of the pair");
      if (!c.minpoly.monic() || !c.residual.monic() || c.residual.degree() < 1) return bad("malformed polynomials");
      IntVector zero(m.rows());
      if (poly_at(c.minpoly, m, c.vertex) != zero) return bad("stored polynomial does not annihilate e_vertex");
      IntPolynomial cof;
      if (!c.minpoly.divide_exact(c.residual, cof)) return bad("residual does not divide the polynomial");
      if (poly_at(cof, m, c.vertex) == zero) return bad("no root of the residual lies in the support");
      const long long b = eigenvalue_bound(g, r.kind);
      if (has_integer_root(c.residual, b)) return bad("residual has an integer root");
      if (c.kind == CertificateKind::NonIntegerSupport) {
        if (r.kind != MatrixKind::Laplacian) return bad("non-integer support certifies the Laplacian walk only");
        return ok("support contains a root of " + c.residual.str() + ", none of them integers");
      }
      if (has_quadratic_factor(c.residual, b)) return bad("residual has a quadratic factor");
      return ok("support contains a root of " + c.residual.str() + " of degree >= 3");
    }

    case CertificateKind::MixedDelta: {
      if (c.witnesses.size() != 2) return bad("expected two witnesses");
      const auto& x = c.witnesses[0].eigenvalue;
      const auto& y = c.witnesses[1].eigenvalue;
      if (!x.is_quadratic() || !y.is_quadratic() || x.delta == y.delta) return bad("witnesses share a field");
      if (!nonzero(c.witnesses[0].of_u) || !nonzero(c.witnesses[1].of_u)) return bad("witness outside the support");
      return ok("support meets two quadratic fields");
    }

    case CertificateKind::QuadraticMixedA: {
      if (r.kind != MatrixKind::Adjacency) return bad("mixed rational parts certify the adjacency walk only");
      for (const auto& w : c.witnesses)
        if (!nonzero(w.of_u)) return bad("witness outside the support");
      if (c.witnesses.size() == 2) {
        const auto [a0, b0] = half_parts(c.witnesses[0].eigenvalue);
        const auto [a1, b1] = half_parts(c.witnesses[1].eigenvalue);
        if (b0 == 0 && b1 == 0) return bad("two integer witnesses");
        if (a0 == a1) return bad("witnesses share a rational part");
        return ok("support eigenvalues with rational parts " + std::to_string(a0) + "/2 and " + std::to_string(a1) + "/2");
      }
      if (c.witnesses.size() == 1) {
        const auto& w = c.witnesses.front().eigenvalue;
        if (!w.is_quadratic() || w.a == 0) return bad("witness has no rational part");
        if (!bipartition(g).bipartite()) return bad("graph is not bipartite");
        return ok("bipartite graph with support eigenvalue " + w.str());
      }
      return bad("malformed certificate");
    }

    case CertificateKind::ParityViolation: {
      if (c.support.empty()) return bad("parity certificate without the support");
      FieldwiseSum total(m.rows());
      std::vector<std::pair<EigenvalueId, bool>> classes;  // (eigenvalue, in plus set)
      for (const auto& w : c.support) {
        if (!check_record(w, why)) return bad(why);
        if (!nonzero(w.of_u)) return bad("support element " + w.eigenvalue.str() + " has zero projection");
        total.add(w.of_u);
        if (w.of_u == w.of_v) classes.emplace_back(w.eigenvalue, true);
        else if (w.of_u == negated(w.of_v)) classes.emplace_back(w.eigenvalue, false);
        else return bad("pair is not strongly cospectral at " + w.eigenvalue.str());
      }
      ExactVector e(m.rows());
      e[static_cast<std::size_t>(r.u)] = 1;
      if (!(total.total() == e)) return bad("stored support is incomplete");

      // Integer keys whose quotient by g decides the class.
      std::vector<long long> key;
      if (r.kind == MatrixKind::Laplacian) {
        for (const auto& [id, plus] : classes) {
          if (!id.is_integer()) return bad("non-integer Laplacian eigenvalue in a parity certificate");
          key.push_back(id.value);
        }
      } else {
        bool any_quadratic = false;
        for (const auto& [id, plus] : classes) any_quadratic = any_quadratic || id.is_quadratic();
        long long top = 0;
        bool first = true;
        for (const auto& [id, plus] : classes) {
          long long x;
          if (!any_quadratic) {
            x = id.value;
          } else {
            const auto [a, b] = half_parts(id);
            if (a != 0) return bad("quadratic parity certificate needs a zero rational part");
            x = b;
          }
          key.push_back(x);
          top = first ? x : std::max(top, x);
          first = false;
        }
        for (auto& x : key) x = top - x;
      }
      long long gg = 0;
      for (long long x : key) gg = std::gcd(gg, x < 0 ? -x : x);
      if (gg == 0) return bad("degenerate support");
      for (std::size_t i = 0; i < key.size(); ++i) {
        const bool even = (key[i] / gg) % 2 == 0;
        if (even != classes[i].second)
          return ok(classes[i].first.str() + (classes[i].second ? " is in the plus set" : " is in the minus set") +
                    " but its quotient by " + std::to_string(gg) + " is " + (even ? "even" : "odd"));
      }
      return bad("no parity violation found");
    }
  }
  return bad("unknown certificate kind");
}

}  // namespace pstlab
