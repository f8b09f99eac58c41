#include "pstlab/exact.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pstlab;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t n, int lo, int hi, bool symmetric) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = symmetric ? i : 0; j < n; ++j) {
      m(i, j) = d(rng);
      if (symmetric) m(j, i) = m(i, j);
    }
  return m;
}

// Cofactor expansion along the first row.
mpz_class det_cofactor(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  mpz_class total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix sub(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) sub(r - 1, cc++) = m(r, c);
    const mpz_class term = m(0, j) * det_cofactor(sub);
    total += (j % 2 == 0) ? term : mpz_class(-term);
  }
  return total;
}

// Rank over Z/p by plain elimination on residues.
int rank_mod_p_naive(const IntMatrix& m, long long p) {
  std::vector<std::vector<long long>> a(m.rows(), std::vector<long long>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      mpz_class r;
      mpz_fdiv_r_ui(r.get_mpz_t(), m(i, j).get_mpz_t(), static_cast<unsigned long>(p));
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
  for (std::size_t c = 0; c < m.cols() && rank < static_cast<int>(m.rows()); ++c) {
    std::size_t piv = rank;
    while (piv < m.rows() && a[piv][c] == 0) ++piv;
    if (piv == m.rows()) continue;
    std::swap(a[piv], a[rank]);
    const long long iv = inv(a[rank][c]);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == static_cast<std::size_t>(rank) || a[i][c] == 0) continue;
      const long long f = a[i][c] * iv % p;
      for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = ((a[i][j] - f * a[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST(Squarefree, SplitsOffSquares) {
  EXPECT_EQ(squarefree_split(8), (std::pair<long long, long long>{2, 2}));
  EXPECT_EQ(squarefree_split(45), (std::pair<long long, long long>{5, 3}));
  EXPECT_EQ(squarefree_split(1), (std::pair<long long, long long>{1, 1}));
  EXPECT_TRUE(is_squarefree(30));
  EXPECT_FALSE(is_squarefree(12));
  EXPECT_THROW(squarefree_split(0), std::invalid_argument);
}

TEST(ExactScalar, FieldArithmetic) {
  const ExactScalar r2 = ExactScalar::sqrt_of(2);
  EXPECT_EQ(r2 * r2, ExactScalar(2));
  EXPECT_TRUE((r2 * r2).is_rational());
  const ExactScalar x = ExactScalar::quadratic(make_rational(1, 2), make_rational(3, 2), 5);
  EXPECT_EQ(x * x.conjugate(), ExactScalar(x.norm()));
  EXPECT_EQ(x / x, ExactScalar(1));
  EXPECT_EQ((x - x).radicand(), 0);
  EXPECT_EQ(ExactScalar(3) / ExactScalar(6), ExactScalar(make_rational(1, 2)));
  EXPECT_NEAR((ExactScalar(1) + r2).to_double(), 1 + std::sqrt(2.0), 1e-15);
  EXPECT_THROW(r2 + ExactScalar::sqrt_of(3), std::domain_error);
  EXPECT_THROW(ExactScalar(1) / ExactScalar(0), std::domain_error);
  EXPECT_THROW(ExactScalar::quadratic(0, 1, 4), std::invalid_argument);
}

TEST(ExactScalar, Rendering) {
  EXPECT_EQ(ExactScalar(make_rational(-3, 4)).str(), "-3/4");
  EXPECT_EQ(ExactScalar::quadratic(1, -2, 3).str(), "1-2*sqrt(3)");
}

TEST(IntPolynomial, ArithmeticAndDivision) {
  const IntPolynomial p = IntPolynomial::linear_root(2) * IntPolynomial::linear_root(-3);  // x^2 + x - 6
  EXPECT_EQ(p, (IntPolynomial{-6, 1, 1}));
  IntPolynomial q;
  ASSERT_TRUE(p.divide_exact(IntPolynomial::linear_root(2), q));
  EXPECT_EQ(q, IntPolynomial::linear_root(-3));
  EXPECT_FALSE(p.divide_exact(IntPolynomial::linear_root(1), q));
  EXPECT_EQ(p.evaluate(mpz_class(2)), 0);
  EXPECT_EQ((IntPolynomial{4, 6}).primitive(), (IntPolynomial{2, 3}));
  EXPECT_EQ(gcd(p, IntPolynomial::linear_root(2) * IntPolynomial::linear_root(5)), IntPolynomial::linear_root(2));
}

TEST(Determinant, BareissMatchesCofactorExpansion) {
  std::mt19937 rng(7);
  int checked = 0;
  for (std::size_t n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 25; ++trial) {
      const IntMatrix m = random_matrix(rng, n, -4, 4, false);
      EXPECT_EQ(det_bareiss(m), det_cofactor(m));
      ++checked;
    }
  EXPECT_EQ(checked, 150);
  IntMatrix singular{{1, 2}, {2, 4}};
  EXPECT_EQ(det_bareiss(singular), 0);
  IntMatrix swap{{0, 1}, {1, 0}};
  EXPECT_EQ(det_bareiss(swap), -1);
}

TEST(Charpoly, AgreesWithDeterminantAtIntegerPoints) {
  std::mt19937 rng(11);
  for (std::size_t n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      const IntMatrix m = random_matrix(rng, n, -3, 3, trial % 2 == 0);
      const IntPolynomial p = charpoly(m);
      ASSERT_EQ(p.degree(), static_cast<int>(n));
      ASSERT_TRUE(p.monic());
      for (long k = -3; k <= 3; ++k) {
        IntMatrix s(n, n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) s(i, j) = (i == j ? mpz_class(k) : mpz_class(0)) - m(i, j);
        EXPECT_EQ(p.evaluate(mpz_class(k)), det_cofactor(s));
      }
    }
}

TEST(VectorMinpoly, AnnihilatesAndIsMinimal) {
  std::mt19937 rng(5);
  for (std::size_t n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      const IntMatrix m = random_matrix(rng, n, -2, 2, true);
      IntVector v(n);
      v[trial % n] = 1;
      const IntPolynomial mu = vector_minpoly(m, v);
      ASSERT_TRUE(mu.monic());
      // mu(M) v = 0.
      for (const auto& x : apply_polynomial(mu, m, v)) EXPECT_EQ(x, 0);
      // The Krylov vectors v, Mv, ..., M^{d-1} v are independent: their Gram
      // determinant is nonzero.
      const int d = mu.degree();
      std::vector<IntVector> k{v};
      for (int i = 1; i < d; ++i) k.push_back(mat_vec(m, k.back()));
      IntMatrix gram(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (std::size_t t = 0; t < n; ++t) gram(i, j) += k[i][t] * k[j][t];
      EXPECT_NE(det_bareiss(gram), 0);
      // Rational entry point agrees.
      EXPECT_EQ(vector_minpoly(m, RationalVector(v.begin(), v.end())), mu);
    }
}

TEST(FactorSupport, SplitsIntegerQuadraticAndResidual) {
  // (x-2)^2 (x+1) (x^2-2) (x^3-3x-1)
  const IntPolynomial cubic{-1, -3, 0, 1};
  const IntPolynomial p = IntPolynomial::linear_root(2) * IntPolynomial::linear_root(2) * IntPolynomial::linear_root(-1) *
                          IntPolynomial{-2, 0, 1} * cubic;
  const SupportFactorization f = factor_support(p, 3);
  ASSERT_EQ(f.integer_roots.size(), 2u);
  EXPECT_EQ(f.integer_roots[0].value, 2);
  EXPECT_EQ(f.integer_roots[0].multiplicity, 2);
  EXPECT_EQ(f.integer_roots[1].value, -1);
  ASSERT_EQ(f.quadratic_roots.size(), 1u);
  EXPECT_EQ(f.quadratic_roots[0].a, 0);
  EXPECT_EQ(f.quadratic_roots[0].b, 2);  // sqrt(2) = (0 + 2 sqrt(2)) / 2
  EXPECT_EQ(f.quadratic_roots[0].delta, 2);
  EXPECT_EQ(f.residual, cubic);
  EXPECT_EQ(f.reconstruct(), p);
  EXPECT_THROW(factor_support(IntPolynomial{1, 2}, 3), std::invalid_argument);

  const SupportFactorization g = factor_with(IntPolynomial::linear_root(2) * cubic, f);
  ASSERT_EQ(g.integer_roots.size(), 1u);
  EXPECT_TRUE(g.quadratic_roots.empty());
  EXPECT_EQ(g.residual, cubic);
}

TEST(FactorSupport, GoldenRatioFactor) {
  const SupportFactorization f = factor_support(IntPolynomial{-1, -1, 1}, 2);  // x^2 - x - 1
  ASSERT_EQ(f.quadratic_roots.size(), 1u);
  EXPECT_EQ(f.quadratic_roots[0].a, 1);
  EXPECT_EQ(f.quadratic_roots[0].b, 1);
  EXPECT_EQ(f.quadratic_roots[0].delta, 5);
  EXPECT_EQ(f.residual.degree(), 0);
}

TEST(RankModP, MatchesNaiveElimination) {
  std::mt19937 rng(3);
  for (long long p : {3LL, 5LL, 7LL, 11LL, 13LL})
    for (int trial = 0; trial < 20; ++trial) {
      const IntMatrix m = random_matrix(rng, 2 + trial % 5, -6, 6, false);
      EXPECT_EQ(rank_mod_p(m, p), rank_mod_p_naive(m, p));
    }
  EXPECT_THROW(rank_mod_p(IntMatrix{{1}}, 2), std::invalid_argument);
  EXPECT_THROW(rank_mod_p(IntMatrix{{1}}, 9), std::invalid_argument);
}

TEST(ApplyFactored, ShiftsAndDivides) {
  const IntMatrix m{{0, 1}, {1, 0}};
  const ExactVector e{ExactScalar(1), ExactScalar(0)};
  // (M + 1) e / 2 projects onto the eigenvalue 1.
  const ShiftFactor f{ExactScalar(-1), ExactScalar(2)};
  const ExactVector x = apply_factored(m, e, std::span<const ShiftFactor>(&f, 1));
  EXPECT_EQ(x, (ExactVector{ExactScalar(make_rational(1, 2)), ExactScalar(make_rational(1, 2))}));
  const ShiftFactor zero{ExactScalar(0), ExactScalar(0)};
  EXPECT_THROW(apply_factored(m, e, std::span<const ShiftFactor>(&zero, 1)), std::domain_error);
}

TEST(FieldwiseSum, ConjugatePairsCancel) {
  FieldwiseSum s(1);
  s.add({ExactScalar::sqrt_of(2)});
  s.add({ExactScalar::sqrt_of(3)});
  s.add({-ExactScalar::sqrt_of(2)});
  s.add({-ExactScalar::sqrt_of(3)});
  s.add({ExactScalar(1)});
  EXPECT_EQ(s.total(), ExactVector{ExactScalar(1)});
}
