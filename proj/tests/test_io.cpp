#include <gtest/gtest.h>

#include <fstream>
#include <functional>
#include <string>

#include "mesp/io.hpp"

using namespace mesp;

namespace {

std::string writeTemp(const std::string& name, const std::string& content) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST(ReadMatrixFileTest, DenseWhitespace) {
  std::string path = writeTemp("dense_ws.txt", "2 0.5\n0.5 3\n");
  Matrix M = readMatrixFile(path);
  ASSERT_EQ(M.rows(), 2);
  EXPECT_DOUBLE_EQ(M(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(M(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(M(1, 1), 3.0);
}

TEST(ReadMatrixFileTest, DenseCommaAndSemicolon) {
  std::string path = writeTemp("dense_csv.csv", "2, 0.5; 0.5, 3\n");
  Matrix M = readMatrixFile(path, "csv");
  ASSERT_EQ(M.rows(), 2);
  EXPECT_DOUBLE_EQ(M(1, 0), 0.5);
}

TEST(ReadMatrixFileTest, DenseSingleEntryPerLine) {
  std::string path = writeTemp("dense_flat.txt", "1\n0\n0\n4\n");
  Matrix M = readMatrixFile(path);
  ASSERT_EQ(M.rows(), 2);
  EXPECT_DOUBLE_EQ(M(1, 1), 4.0);
}

TEST(ReadMatrixFileTest, MatrixMarketSymmetric) {
  std::string path = writeTemp("sym.mtx",
                               "%%MatrixMarket matrix coordinate real symmetric\n"
                               "% comment line\n"
                               "3 3 4\n"
                               "1 1 2.0\n"
                               "2 2 3.0\n"
                               "3 3 4.0\n"
                               "2 1 0.5\n");
  Matrix M = readMatrixFile(path);
  ASSERT_EQ(M.rows(), 3);
  EXPECT_DOUBLE_EQ(M(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(M(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(M(2, 2), 4.0);
  EXPECT_DOUBLE_EQ(M(0, 2), 0.0);
}

TEST(ReadMatrixFileTest, MatrixMarketGeneral) {
  std::string path = writeTemp("gen.mm",
                               "%%MatrixMarket matrix coordinate real general\n"
                               "2 2 3\n"
                               "1 1 1.0\n"
                               "1 2 0.25\n"
                               "2 1 0.25\n");
  Matrix M = readMatrixFile(path);
  EXPECT_DOUBLE_EQ(M(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(M(1, 0), 0.25);
  EXPECT_DOUBLE_EQ(M(1, 1), 0.0);
}

TEST(ReadMatrixFileTest, ExplicitFormatOverridesExtension) {
  std::string path = writeTemp("dense_named.mtx_like.txt",
                               "%%MatrixMarket matrix coordinate real general\n"
                               "1 1 1\n"
                               "1 1 5.0\n");
  Matrix M = readMatrixFile(path, "mm");
  EXPECT_DOUBLE_EQ(M(0, 0), 5.0);
}

TEST(ReadMatrixFileTest, ErrorPaths) {
  auto expectParseError = [](const std::function<void()>& fn) {
    try {
      fn();
      FAIL() << "expected ParseError";
    } catch (const MespError& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError);
    }
  };
  expectParseError([] { readMatrixFile("/nonexistent/path/m.txt"); });
  std::string notSquare = writeTemp("bad_count.txt", "1 2 3\n");
  expectParseError([&] { readMatrixFile(notSquare); });
  std::string badToken = writeTemp("bad_token.txt", "1 x\nx 1\n");
  expectParseError([&] { readMatrixFile(badToken); });
  std::string empty = writeTemp("empty.txt", "");
  expectParseError([&] { readMatrixFile(empty); });
  std::string badHeader = writeTemp("bad_header.mtx", "1 1\n1 1 2.0\n");
  expectParseError([&] { readMatrixFile(badHeader); });
  std::string truncated = writeTemp("trunc.mtx",
                                    "%%MatrixMarket matrix coordinate real general\n"
                                    "2 2 3\n"
                                    "1 1 1.0\n");
  expectParseError([&] { readMatrixFile(truncated); });
  std::string rect = writeTemp("rect.mtx",
                               "%%MatrixMarket matrix coordinate real general\n"
                               "2 3 1\n"
                               "1 1 1.0\n");
  expectParseError([&] { readMatrixFile(rect); });
  std::string unknown = writeTemp("plain.txt", "1\n");
  expectParseError([&] { readMatrixFile(unknown, "yaml"); });
}

TEST(ToSymmetricCheckedTest, AcceptsTinyAsymmetry) {
  Matrix A(2, 2);
  A << 1.0, 0.5, 0.5 + 1e-12, 2.0;
  SymMatrix S = toSymmetricChecked(A);
  EXPECT_NEAR(S.m(0, 1), 0.5, 1e-9);
  EXPECT_DOUBLE_EQ(S.m(0, 1), S.m(1, 0));
}

TEST(ToSymmetricCheckedTest, RejectsLargeAsymmetry) {
  Matrix A(2, 2);
  A << 1.0, 0.5, 0.7, 2.0;
  try {
    toSymmetricChecked(A);
    FAIL() << "expected ParseError";
  } catch (const MespError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}

TEST(ToSymmetricCheckedTest, RejectsRectangular) {
  Matrix A(2, 3);
  A.setZero();
  EXPECT_THROW(toSymmetricChecked(A), MespError);
}
