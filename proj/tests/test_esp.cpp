#include <gtest/gtest.h>

#include <cmath>

#include "mesp/esp.hpp"
#include "mesp/oracle.hpp"
#include "mesp/subsets.hpp"
#include "test_util.hpp"

using namespace mesp;
using namespace mesp::testutil;

TEST(EspAllTest, PinnedSmallVector) {
  ESPTable t = espAll(vectorOf({1.0, 2.0, 3.0}), 3);
  EXPECT_NEAR(t[0], 1.0, 1e-15);
  EXPECT_NEAR(t[1], 6.0, 1e-15);
  EXPECT_NEAR(t[2], 11.0, 1e-15);
  EXPECT_NEAR(t[3], 6.0, 1e-15);
  EXPECT_EQ(t.upTo(), 3);
}

TEST(EspAllTest, OnesGiveBinomials) {
  int n = 9;
  ESPTable t = espAll(Vector::Ones(n), n);
  for (int l = 0; l <= n; ++l) {
    EXPECT_NEAR(t[l], choose(n, l), 1e-9 * choose(n, l) + 1e-12);
  }
}

TEST(EspAllTest, MatchesEnumeration) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    SubStream rng(2000 + seed, 0);
    int n = 5 + static_cast<int>(rng.next() % 4);
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = rng.uniform() * 3.0;
    if (seed % 2 == 0) x(0) = 0.0;
    ESPTable t = espAll(x, n);
    for (int l = 0; l <= n; ++l) {
      double direct = naiveESP(x, l);
      EXPECT_NEAR(t[l], direct, 1e-10 * (1.0 + std::abs(direct)));
    }
  }
}

TEST(EspSuffixTest, FirstRowMatchesFullTable) {
  Vector x = vectorOf({0.5, 1.5, 0.0, 2.0, 1.0});
  int upTo = 3;
  auto B = espSuffix(x, upTo);
  ASSERT_EQ(static_cast<int>(B.size()), 6);
  ESPTable full = espAll(x, upTo);
  for (int l = 0; l <= upTo; ++l) {
    EXPECT_NEAR(B[0][static_cast<size_t>(l)], full[l], 1e-12);
  }
  // Empty-suffix base row.
  EXPECT_NEAR(B[5][0], 1.0, 1e-15);
  for (int l = 1; l <= upTo; ++l) EXPECT_NEAR(B[5][static_cast<size_t>(l)], 0.0, 1e-15);
}

TEST(EspSuffixTest, RecurrenceHolds) {
  SubStream rng(2100, 0);
  int n = 7;
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.uniform() * 2.0;
  int upTo = 4;
  auto B = espSuffix(x, upTo);
  for (int j = 0; j < n; ++j) {
    for (int l = 1; l <= upTo; ++l) {
      double expected = B[static_cast<size_t>(j) + 1][static_cast<size_t>(l)] +
                        x(j) * B[static_cast<size_t>(j) + 1][static_cast<size_t>(l - 1)];
      EXPECT_NEAR(B[static_cast<size_t>(j)][static_cast<size_t>(l)], expected,
                  1e-12 * (1.0 + std::abs(expected)));
    }
  }
}

TEST(EigESPTest, PinnedDiagonal) {
  ESPTable t = eigESP(diagonalMatrix({1.0, 2.0, 3.0}), 3);
  EXPECT_NEAR(t[0], 1.0, 1e-12);
  EXPECT_NEAR(t[1], 6.0, 1e-12);
  EXPECT_NEAR(t[2], 11.0, 1e-12);
  EXPECT_NEAR(t[3], 6.0, 1e-12);
}

TEST(EigESPTest, IdentityOrderTwo) {
  ESPTable t = eigESP(SymMatrix(Matrix::Identity(4, 4)), 2);
  EXPECT_NEAR(t[2], 6.0, 1e-12);
}

TEST(EigESPTest, MatchesPrincipalMinorSums) {
  // The order-l elementary symmetric polynomial of the eigenvalues equals the
  // sum of all order-l principal minors.
  SymMatrix M = randomPSD(6, 6, 77);
  int n = 6;
  for (int l = 1; l <= 3; ++l) {
    double minorSum = 0.0;
    forEachSubset(n, l, [&](const std::vector<int>& S) {
      Matrix sub(l, l);
      for (int a = 0; a < l; ++a) {
        for (int b = 0; b < l; ++b) sub(a, b) = M.m(S[static_cast<size_t>(a)], S[static_cast<size_t>(b)]);
      }
      minorSum += sub.determinant();
    });
    ESPTable t = eigESP(M, l);
    EXPECT_NEAR(t[l], minorSum, 1e-9 * (1.0 + std::abs(minorSum)));
  }
}

TEST(EspAllTest, RejectsNegativeOrder) {
  EXPECT_THROW(espAll(vectorOf({1.0}), -1), MespError);
}
