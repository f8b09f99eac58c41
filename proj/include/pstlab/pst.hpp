#pragma once

// Exact perfect state transfer deciders for the Laplacian and adjacency
// walks, plus a floating-point fidelity oracle used only to cross-check.

#include "pstlab/exact.hpp"
#include "pstlab/graph.hpp"
#include "pstlab/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pstlab {

enum class Verdict { Yes, No, Undecided };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Undecided: return "undecided";
  }
  return "?";
}

enum class CertificateKind {
  None,
  NotStronglyCospectral,
  NonIntegerSupport,
  ParityViolation,
  MixedDelta,
  ResidualFactor,
  QuadraticMixedA,
};

inline std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::None: return "none";
    case CertificateKind::NotStronglyCospectral: return "not-strongly-cospectral";
    case CertificateKind::NonIntegerSupport: return "non-integer-support";
    case CertificateKind::ParityViolation: return "parity-violation";
    case CertificateKind::MixedDelta: return "mixed-delta";
    case CertificateKind::ResidualFactor: return "residual-factor";
    case CertificateKind::QuadraticMixedA: return "quadratic-mixed-a";
  }
  return "?";
}

/// F e_u and F e_v for one eigenvalue.
struct ProjectionRecord {
  EigenvalueId eigenvalue;
  ExactVector of_u, of_v;
};

/// Everything an independent checker needs to replay the failed condition.
struct Certificate {
  CertificateKind kind = CertificateKind::None;
  std::string detail;
  std::vector<ProjectionRecord> witnesses;
  /// Full support of e_u with projections (parity certificates).
  std::vector<ProjectionRecord> support;
  /// Residual certificates: the vertex whose support holds the residual root,
  /// its minimal polynomial and the residual factor.
  int vertex = -1;
  IntPolynomial minpoly;
  IntPolynomial residual;
};

/// t = multiple_of_pi * pi / sqrt(sqrt_delta).
struct TransferTime {
  mpq_class multiple_of_pi;
  long long sqrt_delta = 1;
  double value() const {
    return multiple_of_pi.get_d() * std::numbers::pi / std::sqrt(static_cast<double>(sqrt_delta));
  }
  std::string str() const {
    std::string num = multiple_of_pi.get_num() == 1 ? "pi" : multiple_of_pi.get_num().get_str() + "*pi";
    std::string den;
    if (multiple_of_pi.get_den() != 1) den = multiple_of_pi.get_den().get_str();
    if (sqrt_delta != 1) den += (den.empty() ? "" : "*") + ("sqrt(" + std::to_string(sqrt_delta) + ")");
    return den.empty() ? num : num + "/" + den;
  }
};

/// gamma = exp(i pi s), s in [0, 2).
struct Phase {
  mpq_class s;
  std::complex<double> value() const { return std::polar(1.0, s.get_d() * std::numbers::pi); }
  std::string str() const {
    if (s == 0) return "1";
    if (s == 1) return "-1";
    if (s == make_rational(1, 2)) return "i";
    if (s == make_rational(3, 2)) return "-i";
    return "exp(i*pi*" + s.get_str() + ")";
  }
};

struct PSTReport {
  MatrixKind kind = MatrixKind::Laplacian;
  int u = 0, v = 0;
  std::string graph6;
  Verdict verdict = Verdict::No;
  Certificate certificate;
  std::string undecided_reason;
  long long g = 0;
  std::optional<TransferTime> time;
  std::optional<Phase> phase;
  std::vector<EigenvalueId> plus_set, minus_set;
};

namespace detail {

inline mpq_class mod2(mpq_class s) {
  const mpz_class two = 2 * s.get_den();
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), s.get_num().get_mpz_t(), two.get_mpz_t());
  mpq_class out{r, s.get_den()};
  out.canonicalize();
  return out;
}

inline long long gcd_ll(long long a, long long b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

}  // namespace detail

/// Caches per-vertex supports of one graph matrix and decides pairs.
class PstAnalyzer {
 public:
  PstAnalyzer(const Graph& g, MatrixKind kind)
      : graph_(g), kind_(kind), m_(graph_matrix(g, kind)), bound_(spectral_bound(g, kind)),
        graph6_(write_graph6(g)), profiles_(g.order()), minpolys_(g.order()) {
    if (kind == MatrixKind::SignlessLaplacian)
      throw std::invalid_argument("PstAnalyzer: transfer is decided for the Laplacian and adjacency walks only");
    if (!is_connected(g)) throw DisconnectedGraphError();
  }

  const Graph& graph() const { return graph_; }
  MatrixKind kind() const { return kind_; }
  const IntMatrix& matrix() const { return m_; }

  const SupportProfile& profile(int u) {
    check_vertex(u);
    if (!profiles_[u]) {
      // Every vertex minimal polynomial divides the characteristic
      // polynomial, so one bounded splitting serves all vertices.
      if (!whole_) whole_ = factor_support(charpoly(m_), bound_);
      profiles_[u] = support_profile(m_, kind_, u, minpoly(u), factor_with(minpoly(u), *whole_));
    }
    return *profiles_[u];
  }

  const IntPolynomial& minpoly(int u) {
    check_vertex(u);
    if (!minpolys_[u]) minpolys_[u] = vector_minpoly(m_, detail::int_unit(m_.rows(), u));
    return *minpolys_[u];
  }

  bool bipartite() {
    if (!bipartite_) bipartite_ = pstlab::bipartition(graph_).bipartite();
    return *bipartite_;
  }

  PSTReport decide(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("decide: u == v");
    PSTReport r;
    r.kind = kind_;
    r.u = u;
    r.v = v;
    r.graph6 = graph6_;
    const SupportProfile& pu = profile(u);
    const SupportProfile& pv = profile(v);
    const CospectralityProfile cos = compare_profiles(m_, pu, pv);

    if (!cos.strongly_cospectral && !cos.witness->is_residual()) {
      const EigenvalueId& w = *cos.witness;
      const std::size_t n = m_.rows();
      ProjectionRecord rec{w, pu.projection(w) ? *pu.projection(w) : ExactVector(n),
                           pv.projection(w) ? *pv.projection(w) : ExactVector(n)};
      return fail(r, CertificateKind::NotStronglyCospectral, "projections differ at " + w.str(), {rec});
    }
    if (pu.residual_present || pv.residual_present) {
      const SupportProfile& holder = pu.residual_present ? pu : pv;
      r.verdict = Verdict::No;
      r.certificate.kind =
          kind_ == MatrixKind::Laplacian ? CertificateKind::NonIntegerSupport : CertificateKind::ResidualFactor;
      r.certificate.detail = "support of " + std::to_string(holder.u) + " has a root of " + holder.support.back().factor.str();
      r.certificate.vertex = holder.u;
      r.certificate.minpoly = holder.minpoly;
      r.certificate.residual = holder.support.back().factor;
      return r;
    }
    r.plus_set = cos.plus_set;
    r.minus_set = cos.minus_set;
    return kind_ == MatrixKind::Laplacian ? decide_laplacian(r, pu, pv) : decide_adjacency(r, pu, pv);
  }

  /// Every unordered pair with verdict Yes, by increasing (u, v). Pairs whose
  /// vertex minimal polynomials differ cannot be strongly cospectral and are
  /// skipped without building a certificate.
  std::vector<PSTReport> search() {
    std::vector<PSTReport> out;
    for (const auto& r : scan())
      if (r.verdict == Verdict::Yes) out.push_back(r);
    return out;
  }

  /// Reports for all pairs that share a vertex minimal polynomial.
  std::vector<PSTReport> scan() {
    std::vector<PSTReport> out;
    const int n = graph_.order();
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (minpoly(u) == minpoly(v)) out.push_back(decide(u, v));
    return out;
  }

 private:
  void check_vertex(int u) const {
    if (u < 0 || u >= graph_.order()) throw std::out_of_range("vertex out of range");
  }

  static PSTReport fail(PSTReport& r, CertificateKind kind, std::string detail, std::vector<ProjectionRecord> witnesses) {
    r.verdict = Verdict::No;
    r.certificate.kind = kind;
    r.certificate.detail = std::move(detail);
    r.certificate.witnesses = std::move(witnesses);
    return r;
  }

  static ProjectionRecord record(const SupportProfile& pu, const SupportProfile& pv, const EigenvalueId& id) {
    return {id, *pu.projection(id), *pv.projection(id)};
  }

  static std::vector<ProjectionRecord> full_support(const SupportProfile& pu, const SupportProfile& pv) {
    std::vector<ProjectionRecord> s;
    for (const auto& id : pu.support) s.push_back(record(pu, pv, id));
    return s;
  }

  /// Shared parity test: key(id) is the integer whose quotient by g decides
  /// the class; plus iff even.
  template <typename Key>
  static std::optional<EigenvalueId> parity_mismatch(const PSTReport& r, long long g, Key key) {
    for (const auto& id : r.plus_set)
      if ((key(id) / g) % 2 != 0) return id;
    for (const auto& id : r.minus_set)
      if ((key(id) / g) % 2 == 0) return id;
    return std::nullopt;
  }

  PSTReport decide_laplacian(PSTReport& r, const SupportProfile& pu, const SupportProfile& pv) {
    for (const auto& id : pu.support)
      if (!id.is_integer())
        return fail(r, CertificateKind::NonIntegerSupport, "non-integer eigenvalue " + id.str(), {record(pu, pv, id)});
    long long g = 0;
    for (const auto& id : pu.support) g = detail::gcd_ll(g, id.value);
    r.g = g;
    if (auto bad = parity_mismatch(r, g, [](const EigenvalueId& id) { return id.value; })) {
      fail(r, CertificateKind::ParityViolation, "eigenvalue " + bad->str() + " in the wrong class for g = " + std::to_string(g),
           {record(pu, pv, *bad)});
      r.certificate.support = full_support(pu, pv);
      return r;
    }
    r.verdict = Verdict::Yes;
    r.time = TransferTime{make_rational(1, g), 1};
    r.phase = Phase{0};
    return r;
  }

  PSTReport decide_adjacency(PSTReport& r, const SupportProfile& pu, const SupportProfile& pv) {
    std::vector<EigenvalueId> quads, ints;
    for (const auto& id : pu.support) (id.is_quadratic() ? quads : ints).push_back(id);
    for (const auto& q : quads)
      if (q.delta != quads.front().delta)
        return fail(r, CertificateKind::MixedDelta, "radicands " + std::to_string(quads.front().delta) + " and " + std::to_string(q.delta),
                    {record(pu, pv, quads.front()), record(pu, pv, q)});

    if (quads.empty()) {
      const long long top = pu.support.front().value;
      long long g = 0;
      for (const auto& id : pu.support) g = detail::gcd_ll(g, top - id.value);
      r.g = g;
      if (auto bad = parity_mismatch(r, g, [top](const EigenvalueId& id) { return top - id.value; })) {
        fail(r, CertificateKind::ParityViolation, "eigenvalue " + bad->str() + " in the wrong class for g = " + std::to_string(g),
             {record(pu, pv, *bad)});
        r.certificate.support = full_support(pu, pv);
        return r;
      }
      r.verdict = Verdict::Yes;
      r.time = TransferTime{make_rational(1, g), 1};
      r.phase = Phase{detail::mod2(make_rational(top, g))};
      return r;
    }

    // Every support element must read (a + b_r sqrt(delta)) / 2 with one a.
    const long long a = quads.front().a;
    for (const auto& q : quads)
      if (q.a != a)
        return fail(r, CertificateKind::QuadraticMixedA, "quadratic eigenvalues with different rational parts",
                    {record(pu, pv, quads.front()), record(pu, pv, q)});
    for (const auto& i : ints)
      if (2 * i.value != a)
        return fail(r, CertificateKind::QuadraticMixedA, "integer eigenvalue " + i.str() + " beside quadratic ones",
                    {record(pu, pv, quads.front()), record(pu, pv, i)});

    if (a != 0) {
      if (bipartite())
        return fail(r, CertificateKind::QuadraticMixedA, "bipartite graph with a quadratic eigenvalue of nonzero rational part",
                    {record(pu, pv, quads.front())});
      r.verdict = Verdict::Undecided;
      r.undecided_reason = to_string(CertificateKind::QuadraticMixedA);
      return r;
    }

    // All support elements are b_r sqrt(delta) / 2 (b = 0 for the integer 0):
    // the integer criterion applies to the b_r with time scaled by 2/sqrt(delta).
    auto bval = [](const EigenvalueId& id) { return id.is_quadratic() ? id.b : 0LL; };
    long long top = bval(pu.support.front());
    for (const auto& id : pu.support) top = std::max(top, bval(id));
    long long g = 0;
    for (const auto& id : pu.support) g = detail::gcd_ll(g, top - bval(id));
    r.g = g;
    if (auto bad = parity_mismatch(r, g, [&](const EigenvalueId& id) { return top - bval(id); })) {
      fail(r, CertificateKind::ParityViolation, "eigenvalue " + bad->str() + " in the wrong class for g' = " + std::to_string(g),
           {record(pu, pv, *bad)});
      r.certificate.support = full_support(pu, pv);
      return r;
    }
    r.verdict = Verdict::Yes;
    r.time = TransferTime{make_rational(2, g), quads.front().delta};
    r.phase = Phase{detail::mod2(make_rational(top, g))};
    return r;
  }

  Graph graph_;
  MatrixKind kind_;
  IntMatrix m_;
  long long bound_;
  std::string graph6_;
  std::vector<std::optional<SupportProfile>> profiles_;
  std::vector<std::optional<IntPolynomial>> minpolys_;
  std::optional<bool> bipartite_;
  std::optional<SupportFactorization> whole_;
};

inline PSTReport laplacian_pst(const Graph& g, int u, int v) {
  if (g.order() < 2) throw std::invalid_argument("laplacian_pst: need at least two vertices");
  return PstAnalyzer(g, MatrixKind::Laplacian).decide(u, v);
}

inline PSTReport adjacency_pst(const Graph& g, int u, int v) {
  return PstAnalyzer(g, MatrixKind::Adjacency).decide(u, v);
}

inline std::vector<PSTReport> pst_search(const Graph& g, MatrixKind kind) { return PstAnalyzer(g, kind).search(); }

// ---------------------------------------------------------------------------
// Numeric oracle

struct SymmetricEigen {
  std::vector<double> values;
  std::vector<double> vectors;  // column k is the k-th eigenvector, row-major n x n
};

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
inline SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        total += at(i, j) * at(i, j);
        if (i != j) off += at(i, j) * at(i, j);
      }
    if (off <= 1e-30 * std::max(total, 1.0)) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
  }
  SymmetricEigen out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = at(i, i);
  out.vectors = std::move(v);
  return out;
}

/// Precomputed eigendecomposition for repeated fidelity evaluations.
class FidelityOracle {
 public:
  FidelityOracle(const Graph& g, MatrixKind kind) : n_(g.order()) {
    const IntMatrix m = graph_matrix(g, kind);
    std::vector<double> a(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) a[i * n_ + j] = m(i, j).get_d();
    eig_ = jacobi_eigen(std::move(a), n_);
  }

  /// (exp(i t M))_{v,u}.
  std::complex<double> amplitude(int u, int v, double t) const {
    std::complex<double> acc = 0;
    for (std::size_t k = 0; k < n_; ++k)
      acc += std::polar(1.0, t * eig_.values[k]) * eig_.vectors[v * n_ + k] * eig_.vectors[u * n_ + k];
    return acc;
  }

  double fidelity(int u, int v, double t) const { return std::min(1.0, std::norm(amplitude(u, v, t))); }

 private:
  std::size_t n_;
  SymmetricEigen eig_;
};

/// |(exp(i t M))_{v,u}|^2 in double precision.
inline double numeric_fidelity(const Graph& g, MatrixKind kind, int u, int v, double t) {
  if (u < 0 || v < 0 || u >= g.order() || v >= g.order()) throw std::out_of_range("numeric_fidelity: vertex out of range");
  return FidelityOracle(g, kind).fidelity(u, v, t);
}

// ---------------------------------------------------------------------------

struct PhaseCheck {
  bool pass = true;
  std::string violation;
};

/// Necessary conditions for transfer between the two colour classes of a
/// bipartite graph under the adjacency walk.
inline PhaseCheck bipartite_phase_check(const PSTReport& report, const Graph& g) {
  if (report.verdict != Verdict::Yes || report.kind != MatrixKind::Adjacency)
    throw std::invalid_argument("bipartite_phase_check: needs an adjacency report with verdict yes");
  const auto bip = bipartition(g);
  if (!bip.bipartite()) throw std::invalid_argument("bipartite_phase_check: graph is not bipartite");
  if (bip.parts->same_class(report.u, report.v))
    throw std::invalid_argument("bipartite_phase_check: u and v are in the same colour class");

  std::vector<EigenvalueId> support = report.plus_set;
  support.insert(support.end(), report.minus_set.begin(), report.minus_set.end());
  for (const auto& id : support)
    if (id.is_integer() && id.value == 0) return {false, "0 in support"};
  int valuation = -1;
  for (const auto& id : support) {
    if (!id.is_integer()) return {false, "non-integer eigenvalue " + id.str() + " in support"};
    long long x = id.value < 0 ? -id.value : id.value;
    int e = 0;
    while (x % 2 == 0) {
      x /= 2;
      ++e;
    }
    if (valuation >= 0 && e != valuation) return {false, "unequal powers of two in support"};
    valuation = e;
  }
  if (!report.phase || !(report.phase->s == make_rational(1, 2) || report.phase->s == make_rational(3, 2)))
    return {false, "phase is not +-i"};
  return {};
}

}  // namespace pstlab
