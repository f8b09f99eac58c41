#include "pstlab/certify.hpp"
#include "pstlab/verify.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace pstlab;

namespace {

std::vector<PSTReport> negatives(const Graph& g, MatrixKind kind) {
  std::vector<PSTReport> out;
  PstAnalyzer an(g, kind);
  for (int u = 0; u < g.order(); ++u)
    for (int v = u + 1; v < g.order(); ++v) {
      PSTReport r = an.decide(u, v);
      if (r.verdict == Verdict::No) out.push_back(std::move(r));
    }
  return out;
}

}  // namespace

TEST(Certificates, EveryNegativeValidatesOnSmallGraphs) {
  std::map<CertificateKind, int> kinds;
  for (int n = 2; n <= 6; ++n)
    for (const Graph& g : gen_connected_graphs(n).collect())
      for (auto kind : {MatrixKind::Laplacian, MatrixKind::Adjacency})
        for (const auto& r : negatives(g, kind)) {
          const auto check = validate_certificate(g, r);
          EXPECT_TRUE(check.valid) << r.graph6 << " " << r.u << "," << r.v << " " << to_string(r.certificate.kind) << ": "
                                   << check.reason;
          ++kinds[r.certificate.kind];
        }
  EXPECT_GT(kinds[CertificateKind::NotStronglyCospectral], 1000);
  EXPECT_GT(kinds[CertificateKind::NonIntegerSupport], 0);
  EXPECT_GT(kinds[CertificateKind::ParityViolation], 0);
  EXPECT_GT(kinds[CertificateKind::ResidualFactor], 0);
}

TEST(Certificates, TreeNegativesValidate) {
  for (auto kind : {MatrixKind::Laplacian, MatrixKind::Adjacency}) {
    const auto sweep = tree_sweep(2, 8, kind, true, true);
    for (const auto& r : sweep.negatives)
      EXPECT_TRUE(validate_certificate(parse_graph6(r.graph6), r).valid) << r.graph6 << " " << r.u << "," << r.v;
  }
}

TEST(Certificates, TamperedProjectionIsRejected) {
  const Graph g = family::path(4);
  PSTReport r = laplacian_pst(g, 0, 1);
  ASSERT_EQ(r.verdict, Verdict::No);
  ASSERT_FALSE(r.certificate.witnesses.empty());
  ASSERT_TRUE(validate_certificate(g, r).valid);
  r.certificate.witnesses[0].of_u[0] += ExactScalar(1);
  EXPECT_FALSE(validate_certificate(g, r).valid);
}

TEST(Certificates, SwappedProjectionsAreRejected) {
  // A not-strongly-cospectral claim needs a witness whose projections really
  // differ up to sign.
  const Graph g = family::star(3);
  PSTReport r = laplacian_pst(g, 1, 2);
  ASSERT_EQ(r.verdict, Verdict::No);
  PSTReport forged = r;
  forged.certificate.kind = CertificateKind::NotStronglyCospectral;
  forged.certificate.witnesses.resize(1);
  forged.certificate.witnesses[0].of_v = forged.certificate.witnesses[0].of_u;
  EXPECT_FALSE(validate_certificate(g, forged).valid);
}

TEST(Certificates, WrongKindIsRejected) {
  const Graph g = family::path(6);
  PSTReport r = adjacency_pst(g, 0, 5);
  ASSERT_EQ(r.certificate.kind, CertificateKind::ResidualFactor);
  ASSERT_TRUE(validate_certificate(g, r).valid);

  PSTReport fake_residual = r;
  fake_residual.certificate.residual = IntPolynomial{-2, 0, 1};  // x^2 - 2 does not divide the minpoly
  EXPECT_FALSE(validate_certificate(g, fake_residual).valid);

  PSTReport no_kind = r;
  no_kind.certificate.kind = CertificateKind::None;
  EXPECT_FALSE(validate_certificate(g, no_kind).valid);
}

TEST(Certificates, PositiveOrMismatchedReportsAreRejected) {
  const Graph c4 = family::cycle(4);
  EXPECT_FALSE(validate_certificate(c4, laplacian_pst(c4, 0, 2)).valid);
  const PSTReport r = laplacian_pst(c4, 0, 1);
  EXPECT_FALSE(validate_certificate(family::path(4), r).valid);
  PSTReport flipped = r;
  flipped.kind = MatrixKind::Adjacency;
  EXPECT_FALSE(validate_certificate(c4, flipped).valid);
}

TEST(Certificates, ParityCertificateNeedsCompleteSupport) {
  // Find a parity violation and drop one support record.
  for (int n = 3; n <= 6; ++n)
    for (const Graph& g : gen_connected_graphs(n).collect())
      for (const auto& r : negatives(g, MatrixKind::Laplacian)) {
        if (r.certificate.kind != CertificateKind::ParityViolation) continue;
        ASSERT_TRUE(validate_certificate(g, r).valid);
        PSTReport cut = r;
        cut.certificate.support.pop_back();
        EXPECT_FALSE(validate_certificate(g, cut).valid);
        return;
      }
  FAIL() << "no parity violation found";
}
