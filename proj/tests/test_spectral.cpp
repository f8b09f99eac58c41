#include "pstlab/generate.hpp"
#include "pstlab/pst.hpp"
#include "pstlab/spectral.hpp"

#include <gtest/gtest.h>

using namespace pstlab;

namespace {

// Floating-point spectral decomposition, checked for A V = V diag(w) and
// orthonormal V before use.
struct NumericSpectrum {
  std::size_t n;
  SymmetricEigen eig;

  NumericSpectrum(const Graph& g, MatrixKind kind) : n(g.order()) {
    const IntMatrix m = graph_matrix(g, kind);
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j).get_d();
    eig = jacobi_eigen(a, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        double av = 0, dot = 0;
        for (std::size_t j = 0; j < n; ++j) {
          av += a[i * n + j] * vec(j, k);
          dot += vec(j, i) * vec(j, k);
        }
        EXPECT_NEAR(av, eig.values[k] * vec(i, k), 1e-9);
        EXPECT_NEAR(dot, i == k ? 1.0 : 0.0, 1e-9);
      }
  }
  double vec(std::size_t row, std::size_t k) const { return eig.vectors[row * n + k]; }

  // Projection of e_u onto the eigenvectors selected by keep(value).
  template <typename Pred>
  std::vector<double> project(int u, Pred keep) const {
    std::vector<double> x(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      if (keep(eig.values[k]))
        for (std::size_t i = 0; i < n; ++i) x[i] += vec(i, k) * vec(u, k);
    return x;
  }
};

double poly_at(const IntPolynomial& p, double x) {
  double acc = 0;
  for (std::size_t i = p.coeffs().size(); i-- > 0;) acc = acc * x + p.coeffs()[i].get_d();
  return acc;
}

// Every exact projection agrees with the numeric one; returns the number of
// coordinates compared.
int compare_with_numeric(const Graph& g, MatrixKind kind) {
  const NumericSpectrum num(g, kind);
  int checked = 0;
  for (int u = 0; u < g.order(); ++u) {
    const SupportProfile p = support_profile(g, kind, u);
    EXPECT_EQ(resolution_of_identity(p), unit_vector(g.order(), u));
    for (std::size_t i = 0; i < p.support.size(); ++i) {
      const EigenvalueId& id = p.support[i];
      std::vector<double> expected;
      const ExactVector* got;
      if (id.is_residual()) {
        expected = num.project(u, [&](double x) { return std::abs(poly_at(id.factor, x)) < 1e-7; });
        got = &p.residual_component;
      } else {
        const double theta = id.approx();
        expected = num.project(u, [&](double x) { return std::abs(x - theta) < 1e-7; });
        got = &p.projections[i];
      }
      for (std::size_t j = 0; j < expected.size(); ++j, ++checked)
        EXPECT_NEAR((*got)[j].to_double(), expected[j], 1e-8) << write_graph6(g) << " u=" << u << " " << id.str();
    }
    // Eigenvalues outside the support carry no weight on e_u.
    const auto outside = num.project(u, [&](double x) {
      for (const auto& id : p.support)
        if (id.is_residual() ? std::abs(poly_at(id.factor, x)) < 1e-7 : std::abs(x - id.approx()) < 1e-7) return false;
      return true;
    });
    for (double x : outside) EXPECT_NEAR(x, 0.0, 1e-8);
  }
  return checked;
}

ExactVector half_sum(int n, int u, int v, int sign) {
  ExactVector z(n);
  z[u] = ExactScalar(make_rational(1, 2));
  z[v] = ExactScalar(make_rational(sign, 2));
  return z;
}

}  // namespace

TEST(EigenvalueId, ExactValueAndRendering) {
  const auto golden = EigenvalueId::quadratic(1, 1, 5);
  EXPECT_EQ(golden.exact() * golden.exact() - golden.exact(), ExactScalar(1));
  EXPECT_EQ(golden.str(), "(1+sqrt(5))/2");
  EXPECT_EQ(EigenvalueId::quadratic(0, 2, 2).str(), "(2*sqrt(2))/2");
  EXPECT_EQ(EigenvalueId::quadratic(5, -1, 5).str(), "(5-sqrt(5))/2");
  EXPECT_EQ(EigenvalueId::quadratic(0, -2, 3).str(), "(-2*sqrt(3))/2");
  EXPECT_EQ(EigenvalueId::integer(-2).str(), "-2");
  EXPECT_EQ(golden.conjugate(), EigenvalueId::quadratic(1, -1, 5));
  EXPECT_THROW(EigenvalueId::quadratic(1, 0, 5), std::invalid_argument);
  EXPECT_THROW(EigenvalueId::quadratic(1, 1, 4), std::invalid_argument);
}

TEST(SupportProfile, CycleFourByHand) {
  // L(C4) has eigenvalues 0, 2, 2, 4.
  const SupportProfile p = support_profile(family::cycle(4), MatrixKind::Laplacian, 0);
  ASSERT_EQ(p.support, (std::vector<EigenvalueId>{EigenvalueId::integer(4), EigenvalueId::integer(2), EigenvalueId::integer(0)}));
  const auto q = [](long a, long b, long c, long d, long den) {
    return ExactVector{ExactScalar(make_rational(a, den)), ExactScalar(make_rational(b, den)),
                       ExactScalar(make_rational(c, den)), ExactScalar(make_rational(d, den))};
  };
  EXPECT_EQ(p.projections[0], q(1, -1, 1, -1, 4));
  EXPECT_EQ(p.projections[1], q(1, 0, -1, 0, 2));
  EXPECT_EQ(p.projections[2], q(1, 1, 1, 1, 4));
  EXPECT_EQ(p.minpoly, (IntPolynomial{0, 8, -6, 1}));
}

TEST(SupportProfile, PathThreeAdjacencyIsQuadratic) {
  const SupportProfile p = support_profile(family::path(3), MatrixKind::Adjacency, 0);
  ASSERT_EQ(p.support.size(), 3u);
  EXPECT_EQ(p.support[0], EigenvalueId::quadratic(0, 2, 2));
  EXPECT_EQ(p.support[1], EigenvalueId::integer(0));
  EXPECT_EQ(p.support[2], EigenvalueId::quadratic(0, -2, 2));
  // x for sqrt(2) is (1/4, sqrt(2)/4, 1/4).
  const ExactScalar r = ExactScalar::quadratic(0, make_rational(1, 4), 2);
  EXPECT_EQ(p.projections[0], (ExactVector{ExactScalar(make_rational(1, 4)), r, ExactScalar(make_rational(1, 4))}));
  EXPECT_FALSE(p.residual_present);
}

TEST(SupportProfile, AgreesWithNumericDecomposition) {
  int checked = 0;
  for (int n = 2; n <= 6; ++n)
    for (const Graph& g : gen_connected_graphs(n).collect())
      for (auto kind : {MatrixKind::Laplacian, MatrixKind::Adjacency}) checked += compare_with_numeric(g, kind);
  checked += compare_with_numeric(family::path(6), MatrixKind::Adjacency);
  checked += compare_with_numeric(family::path(7), MatrixKind::Laplacian);
  checked += compare_with_numeric(family::hypercube(3), MatrixKind::Adjacency);
  EXPECT_GT(checked, 10000);
}

TEST(SupportProfile, ResidualFactorForCubicEigenvalues) {
  // A(P6) has eigenvalues 2cos(k pi/7), roots of x^3 -+ x^2 - 2x +- 1.
  const SupportProfile p = support_profile(family::path(6), MatrixKind::Adjacency, 0);
  ASSERT_TRUE(p.residual_present);
  EXPECT_EQ(p.support.size(), 1u);
  EXPECT_EQ(p.support[0].factor.degree(), 6);
  EXPECT_EQ(p.residual_component, unit_vector(6, 0));
}

TEST(Cospectrality, CycleFourAntipodes) {
  const auto c = cospectrality_profile(family::cycle(4), MatrixKind::Laplacian, 0, 2);
  ASSERT_TRUE(c.strongly_cospectral);
  EXPECT_EQ(c.plus_set, (std::vector<EigenvalueId>{EigenvalueId::integer(4), EigenvalueId::integer(0)}));
  EXPECT_EQ(c.minus_set, std::vector<EigenvalueId>{EigenvalueId::integer(2)});
  EXPECT_EQ(c.z_plus, half_sum(4, 0, 2, 1));
  EXPECT_EQ(c.z_minus, half_sum(4, 0, 2, -1));
  const auto adj = cospectrality_profile(family::cycle(4), MatrixKind::Laplacian, 0, 1);
  EXPECT_FALSE(adj.strongly_cospectral);
  EXPECT_TRUE(adj.witness.has_value());
}

TEST(Cospectrality, ResidualSplitOnPathSix) {
  const auto c = cospectrality_profile(family::path(6), MatrixKind::Adjacency, 0, 5);
  ASSERT_TRUE(c.strongly_cospectral);
  ASSERT_EQ(c.plus_set.size(), 1u);
  ASSERT_EQ(c.minus_set.size(), 1u);
  // End entries of the 2cos(k pi/7) eigenvector are sin(k pi/7) and
  // (-1)^(k+1) sin(k pi/7): odd k is the plus set, with root sum 1.
  EXPECT_EQ(c.plus_set[0].factor, (IntPolynomial{1, -2, -1, 1}));
  EXPECT_EQ(c.minus_set[0].factor, (IntPolynomial{-1, -2, 1, 1}));
  EXPECT_EQ(c.z_plus, half_sum(6, 0, 5, 1));
  EXPECT_EQ(c.z_minus, half_sum(6, 0, 5, -1));
}

TEST(Cospectrality, ProfilesAgreeWithMinpolyTest) {
  int pairs = 0, strong = 0;
  for (int n = 2; n <= 6; ++n)
    for (const Graph& g : gen_connected_graphs(n).collect())
      for (auto kind : {MatrixKind::Laplacian, MatrixKind::Adjacency}) {
        const IntMatrix m = graph_matrix(g, kind);
        for (int u = 0; u < n; ++u)
          for (int v = u + 1; v < n; ++v) {
            const auto c = cospectrality_profile(g, kind, u, v);
            const bool by_minpoly = strongly_cospectral_by_minpolys(vector_minpoly(m, detail::int_unit(n, u)),
                                                                    vector_minpoly(m, detail::int_unit(n, v)),
                                                                    classify_by_minpolys(m, u, v));
            EXPECT_EQ(c.strongly_cospectral, by_minpoly) << write_graph6(g) << " " << u << "," << v;
            if (c.strongly_cospectral) {
              EXPECT_EQ(c.z_plus, half_sum(n, u, v, 1));
              EXPECT_EQ(c.z_minus, half_sum(n, u, v, -1));
              ++strong;
            }
            ++pairs;
          }
      }
  EXPECT_GT(pairs, 3000);
  EXPECT_GT(strong, 100);
}

TEST(Cospectrality, RejectsBadInput) {
  EXPECT_THROW(cospectrality_profile(Graph(3, {{0, 1}}), MatrixKind::Laplacian, 0, 1), DisconnectedGraphError);
  EXPECT_THROW(cospectrality_profile(family::path(3), MatrixKind::Laplacian, 1, 1), std::invalid_argument);
}
