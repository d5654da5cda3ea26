#pragma once

#include "mesp/linalg.hpp"

namespace mesp {

/// Optimal subset with its objective value, ties resolved toward the
/// lexicographically smallest index set.
struct ExactResult {
  std::vector<int> S;
  double value = 0.0;
};

/// Probability attached to one subset of an enumerated distribution.
struct SubsetProbability {
  std::vector<int> S;
  double p = 0.0;
};

constexpr double kDefaultEnumerationCap = 2e5;

/// Exhaustive search for the size-s principal submatrix of C with the
/// largest log-determinant.
ExactResult exactMESP(const CovarianceInstance& inst, int s,
                      double cap = kDefaultEnumerationCap);

/// Exhaustive search for the size-s principal submatrix of C with the
/// smallest inverse trace; singular submatrices score +inf.
ExactResult exactAMESP(const CovarianceInstance& inst, int s,
                       double cap = kDefaultEnumerationCap);

/// Elementary symmetric polynomial of order l by direct subset enumeration.
double naiveESP(const Vector& x, int l, double cap = kDefaultEnumerationCap);

/// Distribution proportional to the product of the selected entries of xhat,
/// over all size-s subsets in lexicographic order.
std::vector<SubsetProbability> exactProductDistribution(
    const Vector& xhat, int s, double cap = kDefaultEnumerationCap);

/// Distribution proportional to the product of the selected entries of xhat
/// times the Gram determinant of the selected columns.
std::vector<SubsetProbability> exactVolumeDistribution(
    const CovarianceInstance& inst, const Vector& xhat, int s,
    double cap = kDefaultEnumerationCap);

/// Smallest eigenvalue over all size-s principal submatrices of C.
double exactDelta(const CovarianceInstance& inst, int s,
                  double cap = kDefaultEnumerationCap);

/// log det of the size-s principal submatrix C[S, S]; -inf when singular.
double logDetSubmatrix(const SymMatrix& C, const std::vector<int>& S);

/// tr of the inverse of C[S, S]; +inf when singular.
double invTraceSubmatrix(const SymMatrix& C, const std::vector<int>& S);

}  // namespace mesp
