#pragma once

#include "mesp/linalg.hpp"

namespace mesp {

/// Elementary symmetric polynomial values e[l] for l = 0..upTo.
struct ESPTable {
  std::vector<double> e;

  double operator[](int l) const { return e[static_cast<size_t>(l)]; }
  int upTo() const { return static_cast<int>(e.size()) - 1; }
};

/// All elementary symmetric polynomials of the entries of x up to order upTo,
/// by the stable one-pass recurrence.
ESPTable espAll(const Vector& x, int upTo);

/// Suffix table B with B[j][l] equal to the order-l elementary symmetric
/// polynomial of x_j, ..., x_{n-1}; row n is the empty-suffix base case.
std::vector<std::vector<double>> espSuffix(const Vector& x, int upTo);

/// Elementary symmetric polynomials of the eigenvalues of a symmetric matrix.
ESPTable eigESP(const SymMatrix& M, int upTo);
ESPTable eigESP(const Vector& eigenvalues, int upTo);

}  // namespace mesp
