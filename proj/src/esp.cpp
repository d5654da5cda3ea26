#include "mesp/esp.hpp"

#include <algorithm>

namespace mesp {

ESPTable espAll(const Vector& x, int upTo) {
  if (upTo < 0) {
    throw MespError(ErrorCode::BadCardinality, "negative polynomial order");
  }
  ESPTable t;
  t.e.assign(static_cast<size_t>(upTo) + 1, 0.0);
  t.e[0] = 1.0;
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    const int top = std::min(upTo, i + 1);
    for (int l = top; l >= 1; --l) {
      t.e[static_cast<size_t>(l)] += x(i) * t.e[static_cast<size_t>(l) - 1];
    }
  }
  return t;
}

std::vector<std::vector<double>> espSuffix(const Vector& x, int upTo) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> B(
      static_cast<size_t>(n) + 1,
      std::vector<double>(static_cast<size_t>(upTo) + 1, 0.0));
  B[static_cast<size_t>(n)][0] = 1.0;
  for (int j = n - 1; j >= 0; --j) {
    auto& row = B[static_cast<size_t>(j)];
    const auto& next = B[static_cast<size_t>(j) + 1];
    row[0] = 1.0;
    for (int l = 1; l <= upTo; ++l) {
      row[static_cast<size_t>(l)] =
          next[static_cast<size_t>(l)] + x(j) * next[static_cast<size_t>(l) - 1];
    }
  }
  return B;
}

ESPTable eigESP(const Vector& eigenvalues, int upTo) {
  return espAll(eigenvalues, upTo);
}

ESPTable eigESP(const SymMatrix& M, int upTo) {
  return espAll(eig(M).eigenvalues, upTo);
}

}  // namespace mesp
