#include "mesp/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace mesp {

namespace {

bool hasSuffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

Matrix readDense(std::istream& in, const std::string& path) {
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    for (char& c : line) {
      if (c == ',' || c == ';') c = ' ';
    }
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        size_t used = 0;
        values.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw MespError(ErrorCode::ParseError,
                        path + ": bad numeric token '" + tok + "'");
      }
    }
  }
  if (values.empty()) {
    throw MespError(ErrorCode::ParseError, path + ": no data");
  }
  const double root = std::sqrt(static_cast<double>(values.size()));
  const int n = static_cast<int>(std::lround(root));
  if (static_cast<size_t>(n) * static_cast<size_t>(n) != values.size()) {
    throw MespError(ErrorCode::ParseError,
                    path + ": entry count is not a perfect square");
  }
  Matrix M(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      M(i, j) = values[static_cast<size_t>(i) * n + static_cast<size_t>(j)];
    }
  }
  return M;
}

Matrix readMatrixMarket(std::istream& in, const std::string& path) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("%%MatrixMarket", 0) != 0) {
    throw MespError(ErrorCode::ParseError, path + ": missing header");
  }
  const std::string h = lowercase(header);
  if (h.find("coordinate") == std::string::npos ||
      h.find("real") == std::string::npos) {
    throw MespError(ErrorCode::ParseError,
                    path + ": only real coordinate data is supported");
  }
  const bool symmetric = h.find("symmetric") != std::string::npos;
  std::string line;
  long rows = 0, cols = 0, nnz = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ls(line);
    if (!(ls >> rows >> cols >> nnz)) {
      throw MespError(ErrorCode::ParseError, path + ": bad size line");
    }
    break;
  }
  if (rows <= 0 || rows != cols) {
    throw MespError(ErrorCode::ParseError, path + ": matrix must be square");
  }
  Matrix M = Matrix::Zero(rows, cols);
  long seen = 0;
  while (seen < nnz && std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ls(line);
    long i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v)) {
      throw MespError(ErrorCode::ParseError, path + ": bad entry line");
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw MespError(ErrorCode::ParseError, path + ": entry out of range");
    }
    M(i - 1, j - 1) = v;
    if (symmetric && i != j) M(j - 1, i - 1) = v;
    ++seen;
  }
  if (seen != nnz) {
    throw MespError(ErrorCode::ParseError, path + ": truncated entry list");
  }
  return M;
}

}  // namespace

Matrix readMatrixFile(const std::string& path, const std::string& format) {
  std::ifstream in(path);
  if (!in) {
    throw MespError(ErrorCode::ParseError, path + ": cannot open file");
  }
  std::string fmt = lowercase(format);
  if (fmt == "auto") {
    const std::string lower = lowercase(path);
    fmt = (hasSuffix(lower, ".mtx") || hasSuffix(lower, ".mm")) ? "mm"
                                                                : "dense";
  }
  if (fmt == "mm") return readMatrixMarket(in, path);
  if (fmt == "dense" || fmt == "csv") return readDense(in, path);
  throw MespError(ErrorCode::ParseError, "unknown input format '" + format + "'");
}

SymMatrix toSymmetricChecked(const Matrix& A) {
  if (A.rows() != A.cols()) {
    throw MespError(ErrorCode::ParseError, "matrix must be square");
  }
  const double scale = std::max(1e-300, A.cwiseAbs().maxCoeff());
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * scale) {
    throw MespError(ErrorCode::ParseError,
                    "matrix asymmetry exceeds the relative tolerance");
  }
  return SymMatrix(A);
}

}  // namespace mesp
