#include <gtest/gtest.h>

#include <cmath>

#include "mesp/linalg.hpp"
#include "mesp/objectives.hpp"
#include "test_util.hpp"

using namespace mesp;
using namespace mesp::testutil;

namespace {

double matRelErr(const Matrix& A, const Matrix& B) {
  return (A - B).norm() / std::max(1.0, B.norm());
}

double logDetRank(const Matrix& X, int r) {
  return detTop(eig(SymMatrix(X)).eigenvalues, r);
}

}  // namespace

TEST(SymMatrixTest, ConstructorSymmetrizes) {
  Matrix A(2, 2);
  A << 1.0, 3.0, 1.0, 2.0;
  SymMatrix S(A);
  EXPECT_DOUBLE_EQ(S.m(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(S.m(1, 0), 2.0);
  EXPECT_DOUBLE_EQ(S.m(0, 0), 1.0);
  EXPECT_EQ(S.order(), 2);
}

TEST(EigTest, DescendingOrderAndReconstruction) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SymMatrix M = randomPSD(7, 7, 100 + seed);
    SpectralDecomposition sd = eig(M);
    for (int i = 0; i + 1 < 7; ++i) {
      EXPECT_GE(sd.eigenvalues(i), sd.eigenvalues(i + 1));
    }
    Matrix recon = sd.Q * sd.eigenvalues.asDiagonal() * sd.Q.transpose();
    EXPECT_LT(matRelErr(recon, M.m), 1e-12);
    Matrix gram = sd.Q.transpose() * sd.Q;
    EXPECT_LT((gram - Matrix::Identity(7, 7)).norm(), 1e-12);
  }
}

TEST(FactorizeTest, ReconstructsFullRank) {
  SymMatrix C = randomPSD(6, 6, 7);
  CovarianceInstance inst = factorize(C);
  EXPECT_EQ(inst.n, 6);
  EXPECT_EQ(inst.d, 6);
  EXPECT_LT(matRelErr(inst.V.transpose() * inst.V, C.m), 1e-12);
}

TEST(FactorizeTest, ReconstructsRankDeficient) {
  SymMatrix C = randomPSD(8, 3, 11);
  CovarianceInstance inst = factorize(C);
  EXPECT_EQ(inst.d, 3);
  EXPECT_LT(matRelErr(inst.V.transpose() * inst.V, C.m), 1e-12);
}

TEST(FactorizeTest, RejectsIndefinite) {
  SymMatrix M = diagonalMatrix({1.0, -1.0});
  try {
    factorize(M);
    FAIL() << "expected NotPSD";
  } catch (const MespError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPSD);
  }
}

TEST(FactorizeTest, RejectsZeroMatrix) {
  SymMatrix M(Matrix::Zero(3, 3));
  try {
    factorize(M);
    FAIL() << "expected ZeroMatrix";
  } catch (const MespError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroMatrix);
  }
}

TEST(PinvTest, PinnedDiagonal) {
  PseudoInverseState st = pinv(diagonalMatrix({4.0, 0.0}));
  EXPECT_EQ(st.rank, 1);
  EXPECT_NEAR(st.Xdag(0, 0), 0.25, 1e-15);
  EXPECT_NEAR(st.Xdag(1, 1), 0.0, 1e-15);
  EXPECT_NEAR(st.projector(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(st.projector(1, 1), 1.0, 1e-15);
}

TEST(PinvTest, DefiningEquations) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    int n = 6;
    int r = (seed % 2 == 0) ? 6 : 3;
    SymMatrix X = randomPSD(n, r, 200 + seed);
    PseudoInverseState st = pinv(X);
    EXPECT_EQ(st.rank, r);
    EXPECT_LT(matRelErr(st.X * st.Xdag * st.X, st.X), 1e-10);
    EXPECT_LT(matRelErr(st.Xdag * st.X * st.Xdag, st.Xdag), 1e-10);
    Matrix XXd = st.X * st.Xdag;
    EXPECT_LT((XXd - XXd.transpose()).norm(), 1e-10);
    Matrix P = Matrix::Identity(n, n) - XXd;
    EXPECT_LT((st.projector - P).norm(), 1e-10);
  }
}

TEST(PinvUpdateTest, PinnedTwoByTwo) {
  Matrix X = Matrix::Zero(2, 2);
  X(0, 0) = 1.0;
  PseudoInverseState st = pinv(SymMatrix(X));
  Vector v(2);
  v << 1.0, 1.0;
  PseudoInverseState up = pinvUpdate(st, v);
  Matrix expected(2, 2);
  expected << 1.0, -1.0, -1.0, 2.0;
  EXPECT_LT((up.Xdag - expected).norm(), 1e-12);
  EXPECT_EQ(up.rank, 2);
  EXPECT_LT(up.projector.norm(), 1e-12);
}

TEST(PinvUpdateTest, MatchesFreshPinv) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SubStream rng(300 + seed, 0);
    int d = 7;
    Matrix B = gaussianMatrix(d, 4, rng);
    SymMatrix X(B * B.transpose());
    PseudoInverseState st = pinv(X);
    Vector v = gaussianMatrix(d, 1, rng).col(0);
    PseudoInverseState up = pinvUpdate(st, v);
    PseudoInverseState fresh = pinv(SymMatrix(X.m + v * v.transpose()));
    EXPECT_EQ(up.rank, 5);
    EXPECT_LT(matRelErr(up.Xdag, fresh.Xdag), 1e-7);
    EXPECT_LT(matRelErr(up.projector, fresh.projector), 1e-7);
  }
}

TEST(PinvUpdateTest, RejectsVectorInColumnSpace) {
  SubStream rng(17, 0);
  Matrix B = gaussianMatrix(6, 3, rng);
  SymMatrix X(B * B.transpose());
  PseudoInverseState st = pinv(X);
  Vector v = 0.3 * B.col(0) - 1.2 * B.col(2);
  try {
    pinvUpdate(st, v);
    FAIL() << "expected InColumnSpace";
  } catch (const MespError& e) {
    EXPECT_EQ(e.code(), ErrorCode::InColumnSpace);
  }
}

TEST(PinvDowndateTest, MatchesFreshPinv) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SubStream rng(400 + seed, 0);
    int d = 7;
    int s = 4;
    Matrix B = gaussianMatrix(d, s, rng);
    SymMatrix X(B * B.transpose());
    PseudoInverseState st = pinv(X);
    int removed = static_cast<int>(seed % s);
    Vector v = B.col(removed);
    PseudoInverseState down = pinvDowndate(st, v);
    Matrix Xm = X.m - v * v.transpose();
    PseudoInverseState fresh = pinv(SymMatrix(Xm));
    EXPECT_EQ(down.rank, s - 1);
    EXPECT_LT(matRelErr(down.Xdag, fresh.Xdag), 1e-7);
    EXPECT_LT(matRelErr(down.projector, fresh.projector), 1e-7);
  }
}

TEST(PinvDowndateTest, RejectsOrthogonalVector) {
  Matrix X = Matrix::Zero(3, 3);
  X(0, 0) = 2.0;
  PseudoInverseState st = pinv(SymMatrix(X));
  Vector v(3);
  v << 0.0, 1.0, 0.0;
  try {
    pinvDowndate(st, v);
    FAIL() << "expected DegenerateColumn";
  } catch (const MespError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateColumn);
  }
}

TEST(ColumnPinvTest, MatchesDirectConstruction) {
  CovarianceInstance inst = factorize(randomPSD(6, 6, 55));
  std::vector<int> S = {0, 2, 5};
  PseudoInverseState st = columnPinv(inst, S);
  Matrix X = Matrix::Zero(inst.d, inst.d);
  for (int j : S) X += inst.column(j) * inst.column(j).transpose();
  PseudoInverseState fresh = pinv(SymMatrix(X));
  EXPECT_LT(matRelErr(st.Xdag, fresh.Xdag), 1e-10);
  EXPECT_EQ(st.rank, 3);
}

// Identities tying determinants, pseudoinverses, and nullspace projectors of
// a rank-one sum X = sum_{i in S} v_i v_i^T to those of X minus one summand.
TEST(RankOneIdentityTest, SampledConfigurations) {
  int checked = 0;
  for (std::uint64_t cfg = 0; cfg < 40; ++cfg) {
    SubStream rng(9000 + cfg, 0);
    int d = 4 + static_cast<int>(rng.next() % 5);
    int s = 2 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(d - 2));
    Matrix B(d, s);
    for (int c = 0; c < s; ++c) {
      double scale = std::pow(10.0, 2.0 * rng.uniform() - 1.0);
      for (int r = 0; r < d; ++r) B(r, c) = scale * rng.gaussian();
    }
    Matrix X = B * B.transpose();
    PseudoInverseState stX = pinv(SymMatrix(X));
    ASSERT_EQ(stX.rank, s);
    int i = static_cast<int>(rng.next() % static_cast<std::uint64_t>(s));
    Vector vi = B.col(i);
    Matrix Xm = Matrix::Zero(d, d);
    for (int c = 0; c < s; ++c) {
      if (c != i) Xm += B.col(c) * B.col(c).transpose();
    }
    PseudoInverseState stM = pinv(SymMatrix(Xm));
    ASSERT_EQ(stM.rank, s - 1);

    Vector u = stX.Xdag * vi;
    double un2 = u.squaredNorm();

    // Determinant recursion through the nullspace projector.
    double lhs1 = logDetRank(X, s);
    double rhs1 = logDetRank(Xm, s - 1) +
                  std::log(vi.dot(stM.projector * vi));
    EXPECT_NEAR(lhs1, rhs1, 1e-6 * (1.0 + std::abs(lhs1)));

    // Rank-preserving determinant update for a vector inside the span.
    Vector w = Vector::Zero(d);
    {
      int k = 0;
      for (int c = 0; c < s; ++c) {
        if (c == i) continue;
        w += (rng.gaussian()) * B.col(c);
        ++k;
      }
      (void)k;
    }
    double lhs2 = logDetRank(Xm + w * w.transpose(), s - 1);
    double rhs2 = logDetRank(Xm, s - 1) + std::log1p(w.dot(stM.Xdag * w));
    EXPECT_NEAR(lhs2, rhs2, 1e-6 * (1.0 + std::abs(lhs2)));

    // Rank-increasing determinant update for a generic vector.
    Vector g = gaussianMatrix(d, 1, rng).col(0);
    double lhs3 = logDetRank(Xm + g * g.transpose(), s);
    double rhs3 = logDetRank(Xm, s - 1) + std::log(g.dot(stM.projector * g));
    EXPECT_NEAR(lhs3, rhs3, 1e-6 * (1.0 + std::abs(lhs3)));

    // Summand normalization and span membership.
    EXPECT_NEAR(vi.dot(stX.Xdag * vi), 1.0, 1e-6);
    EXPECT_LT((stX.projector * vi).norm(), 1e-6 * vi.norm());

    // Residual mass of the removed summand against the shrunken span.
    EXPECT_NEAR(vi.dot(stM.projector * vi), 1.0 / un2, 1e-6 * (1.0 / un2));

    // Projector transfer for both vector types.
    double lhs4 = g.dot(stM.projector * g);
    double rhs4 = g.dot(stX.projector * g) + g.dot(u) * g.dot(u) / un2;
    EXPECT_NEAR(lhs4, rhs4, 1e-6 * (1.0 + std::abs(rhs4)));
    EXPECT_LT(std::abs(w.dot(stM.projector * w)), 1e-6 * w.squaredNorm());

    // Incremental forms agree with fresh factorizations.
    PseudoInverseState down = pinvDowndate(stX, vi);
    EXPECT_LT(matRelErr(down.Xdag, stM.Xdag), 1e-6);
    PseudoInverseState up = pinvUpdate(stM, vi);
    EXPECT_LT(matRelErr(up.Xdag, stX.Xdag), 1e-6);
    ++checked;
  }
  EXPECT_EQ(checked, 40);
}
