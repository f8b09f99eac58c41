#include "pstlab/generate.hpp"
#include "pstlab/pst.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace pstlab;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_yes(const PSTReport& r, long long multiple_num, long long multiple_den, long long sqrt_delta,
                long long s_num, long long s_den) {
  ASSERT_EQ(r.verdict, Verdict::Yes) << r.graph6 << " " << r.u << "," << r.v << " " << r.certificate.detail;
  ASSERT_TRUE(r.time && r.phase);
  EXPECT_EQ(r.time->multiple_of_pi, make_rational(multiple_num, multiple_den));
  EXPECT_EQ(r.time->sqrt_delta, sqrt_delta);
  EXPECT_EQ(r.phase->s, make_rational(s_num, s_den));
}

std::vector<std::pair<int, int>> yes_pairs(const std::vector<PSTReport>& reports) {
  std::vector<std::pair<int, int>> out;
  for (const auto& r : reports) out.emplace_back(r.u, r.v);
  return out;
}

}  // namespace

TEST(LaplacianPst, SmallPositives) {
  const auto p2 = laplacian_pst(family::path(2), 0, 1);
  expect_yes(p2, 1, 2, 1, 0, 1);
  EXPECT_EQ(p2.g, 2);
  EXPECT_EQ(p2.time->str(), "pi/2");
  EXPECT_EQ(p2.phase->str(), "1");

  const auto c4 = laplacian_pst(family::cycle(4), 0, 2);
  expect_yes(c4, 1, 2, 1, 0, 1);
  EXPECT_EQ(c4.plus_set, (std::vector<EigenvalueId>{EigenvalueId::integer(4), EigenvalueId::integer(0)}));
  EXPECT_EQ(c4.minus_set, std::vector<EigenvalueId>{EigenvalueId::integer(2)});

  // K4 - e has Laplacian spectrum {0, 2, 4, 4}.
  const auto k4e = laplacian_pst(family::complete_minus_edge(4), 0, 1);
  expect_yes(k4e, 1, 2, 1, 0, 1);
  EXPECT_EQ(k4e.g, 2);
}

TEST(LaplacianPst, StarLeavesFail) {
  const auto r = laplacian_pst(family::star(3), 1, 2);
  EXPECT_EQ(r.verdict, Verdict::No);
  EXPECT_NE(r.certificate.kind, CertificateKind::None);
  EXPECT_FALSE(r.certificate.witnesses.empty());
  EXPECT_FALSE(r.time.has_value());
}

TEST(LaplacianPst, HypercubeAntipodes) {
  const Graph q3 = family::hypercube(3);
  const auto found = pst_search(q3, MatrixKind::Laplacian);
  EXPECT_EQ(yes_pairs(found), (std::vector<std::pair<int, int>>{{0, 7}, {1, 6}, {2, 5}, {3, 4}}));
  for (const auto& r : found) expect_yes(r, 1, 2, 1, 0, 1);
  EXPECT_EQ(yes_pairs(pst_search(family::cycle(4), MatrixKind::Laplacian)),
            (std::vector<std::pair<int, int>>{{0, 2}, {1, 3}}));
}

TEST(LaplacianPst, NoSmallTreeBeyondAnEdge) {
  for (int n = 3; n <= 8; ++n)
    for (const Graph& t : gen_free_trees(n).collect()) EXPECT_TRUE(pst_search(t, MatrixKind::Laplacian).empty());
}

TEST(LaplacianPst, RejectsBadInput) {
  EXPECT_THROW(laplacian_pst(Graph(3, {{0, 1}}), 0, 1), DisconnectedGraphError);
  EXPECT_THROW(laplacian_pst(family::path(3), 2, 2), std::invalid_argument);
  EXPECT_THROW(laplacian_pst(family::path(3), 0, 3), std::out_of_range);
}

TEST(AdjacencyPst, PathsTwoAndThree) {
  const auto p2 = adjacency_pst(family::path(2), 0, 1);
  expect_yes(p2, 1, 2, 1, 1, 2);
  EXPECT_EQ(p2.phase->str(), "i");

  // Branch with support {sqrt 2, 0, -sqrt 2}: rescaled spectrum {1, 0, -1}.
  const auto p3 = adjacency_pst(family::path(3), 0, 2);
  expect_yes(p3, 1, 1, 2, 1, 1);
  EXPECT_EQ(p3.time->str(), "pi/sqrt(2)");
  EXPECT_EQ(p3.phase->str(), "-1");
  EXPECT_NEAR(p3.time->value(), kPi / std::sqrt(2.0), 1e-15);

  EXPECT_EQ(adjacency_pst(family::path(4), 0, 3).verdict, Verdict::No);
}

TEST(AdjacencyPst, IntegerBranchOnCubes) {
  // A(C4) spectrum {2, 0, 0, -2}: g = 2, phase exp(i pi 2/2) = -1.
  expect_yes(adjacency_pst(family::cycle(4), 0, 2), 1, 2, 1, 1, 1);
  // A(Q3) spectrum {3, 1, -1, -3}: g = 2, phase exp(i pi 3/2) = -i.
  expect_yes(adjacency_pst(family::hypercube(3), 0, 7), 1, 2, 1, 3, 2);
}

TEST(AdjacencyPst, ResidualSupportIsCertified) {
  const auto r = adjacency_pst(family::path(6), 0, 5);
  EXPECT_EQ(r.verdict, Verdict::No);
  EXPECT_EQ(r.certificate.kind, CertificateKind::ResidualFactor);
  EXPECT_GE(r.certificate.residual.degree(), 3);
}

TEST(Decider, SymmetricInPair) {
  for (int n = 2; n <= 6; ++n)
    for (const Graph& g : gen_connected_graphs(n).collect())
      for (auto kind : {MatrixKind::Laplacian, MatrixKind::Adjacency}) {
        PstAnalyzer an(g, kind);
        for (int u = 0; u < n; ++u)
          for (int v = u + 1; v < n; ++v) {
            const auto a = an.decide(u, v), b = an.decide(v, u);
            ASSERT_EQ(a.verdict, b.verdict);
            EXPECT_EQ(a.g, b.g);
            if (a.verdict == Verdict::Yes) {
              EXPECT_EQ(a.time->multiple_of_pi, b.time->multiple_of_pi);
              EXPECT_EQ(a.time->sqrt_delta, b.time->sqrt_delta);
              EXPECT_EQ(a.phase->s, b.phase->s);
            }
            if (a.verdict == Verdict::Yes && kind == MatrixKind::Laplacian) {
              const auto& plus = a.plus_set;
              EXPECT_NE(std::find(plus.begin(), plus.end(), EigenvalueId::integer(0)), plus.end());
            }
          }
      }
}

TEST(Decider, EveryYesIsNumericallyConfirmed) {
  int confirmed = 0;
  for (int n = 2; n <= 6; ++n)
    for (const Graph& g : gen_connected_graphs(n).collect())
      for (auto kind : {MatrixKind::Laplacian, MatrixKind::Adjacency}) {
        const auto found = pst_search(g, kind);
        if (found.empty()) continue;
        const FidelityOracle oracle(g, kind);
        for (const auto& r : found) {
          EXPECT_GE(oracle.fidelity(r.u, r.v, r.time->value()), 1 - 1e-9) << r.graph6;
          const auto amp = oracle.amplitude(r.u, r.v, r.time->value());
          EXPECT_NEAR(amp.real(), r.phase->value().real(), 1e-9);
          EXPECT_NEAR(amp.imag(), r.phase->value().imag(), 1e-9);
          ++confirmed;
        }
      }
  EXPECT_GE(confirmed, 10);
}

TEST(Decider, ParitySplitIsNecessary) {
  // At t = pi/g each support eigenvalue contributes (-1)^(lambda/g) F e_u;
  // the sum is e_v, and moving any one eigenvalue to the other class breaks it.
  for (const Graph& g : {family::cycle(4), family::complete_minus_edge(4), family::hypercube(3)}) {
    PstAnalyzer an(g, MatrixKind::Laplacian);
    for (const auto& r : an.search()) {
      const SupportProfile& p = an.profile(r.u);
      const std::size_t n = g.order();
      ExactVector sum(n);
      std::vector<ExactVector> terms;
      for (std::size_t i = 0; i < p.support.size(); ++i) {
        const bool even = (p.support[i].value / r.g) % 2 == 0;
        terms.push_back(even ? p.projections[i] : -p.projections[i]);
        sum = sum + terms.back();
      }
      EXPECT_EQ(sum, unit_vector(n, r.v));
      for (const auto& t : terms) {
        ExactVector flipped = sum;
        flipped = flipped - t;
        flipped = flipped - t;
        EXPECT_NE(flipped, unit_vector(n, r.v));
      }
    }
  }
}

TEST(NumericFidelity, ClosedForms) {
  EXPECT_NEAR(numeric_fidelity(family::path(2), MatrixKind::Laplacian, 0, 1, kPi / 2), 1.0, 1e-12);
  EXPECT_NEAR(numeric_fidelity(family::path(2), MatrixKind::Laplacian, 0, 1, 0.0), 0.0, 1e-12);
  // |U(t)_{01}|^2 = sin^2(t) for L(P2).
  for (double t : {0.3, 1.1, 2.0})
    EXPECT_NEAR(numeric_fidelity(family::path(2), MatrixKind::Laplacian, 0, 1, t), std::pow(std::sin(t), 2), 1e-12);
  EXPECT_NEAR(numeric_fidelity(family::path(3), MatrixKind::Adjacency, 0, 2, kPi / std::sqrt(2.0)), 1.0, 1e-9);
  EXPECT_THROW(numeric_fidelity(family::path(2), MatrixKind::Laplacian, 0, 2, 1.0), std::out_of_range);
}

TEST(NumericFidelity, GridSearchFindsPathThreeTime) {
  const FidelityOracle oracle(family::path(3), MatrixKind::Adjacency);
  double best = 0, best_t = 0;
  for (int k = 0; k <= 40000; ++k) {
    const double t = k * 1e-4;
    const double f = oracle.fidelity(0, 2, t);
    if (f > best) {
      best = f;
      best_t = t;
    }
  }
  EXPECT_GE(best, 1 - 1e-6);
  EXPECT_NEAR(best_t, kPi / std::sqrt(2.0), 1e-3);
}

TEST(BipartitePhase, ChecksAndPreconditions) {
  const Graph p2 = family::path(2);
  EXPECT_TRUE(bipartite_phase_check(adjacency_pst(p2, 0, 1), p2).pass);

  PSTReport fake = adjacency_pst(p2, 0, 1);
  fake.plus_set.push_back(EigenvalueId::integer(0));
  const auto bad = bipartite_phase_check(fake, p2);
  EXPECT_FALSE(bad.pass);
  EXPECT_EQ(bad.violation, "0 in support");

  // C4 antipodes lie in the same colour class.
  const Graph c4 = family::cycle(4);
  EXPECT_THROW(bipartite_phase_check(adjacency_pst(c4, 0, 2), c4), std::invalid_argument);
  EXPECT_THROW(bipartite_phase_check(laplacian_pst(p2, 0, 1), p2), std::invalid_argument);
}
