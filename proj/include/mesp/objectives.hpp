#pragma once

#include "mesp/linalg.hpp"

namespace mesp {

/// Split point of a descending spectrum: the unique k in [0, s-1] with
/// lambda_k > threshold >= lambda_{k+1}, where threshold averages the
/// eigenvalue tail below k over the remaining s - k slots.
struct KappaIndex {
  int k = 0;
  double threshold = 0.0;
};

/// Spectral function gradient of the form Q diag(beta) Q^T.
struct GeneralizedGradient {
  Matrix matrix;
  Vector beta;
};

/// Closed-form bound gaps for a given problem size.
struct MespBounds {
  double sampling = 0.0;
  double nikolov = 0.0;
  double localSearch = 0.0;
  double greedy = 0.0;
};

/// log of the product of the s largest entries of a descending eigenvalue
/// vector; -inf when any factor is nonpositive.
double detTop(const Vector& lambdaDesc, int s);

/// log of the product of the s smallest entries; -inf when any factor is
/// nonpositive.
double detBottom(const Vector& lambdaDesc, int s);

/// Sum of reciprocals of the s largest entries; +inf when any of them is
/// nonpositive.
double trTop(const Vector& lambdaDesc, int s);

/// Sum of the s smallest entries.
double trBottom(const Vector& lambdaDesc, int s);

KappaIndex kappa(const Vector& lambdaDesc, int s);

/// Concave surrogate of the size-s log-determinant objective.
double gammaS(const SymMatrix& X, int s);
double gammaFromEigenvalues(const Vector& lambdaDesc, int s);

/// Supgradient of gammaS at X; requires rank(X) >= s.
GeneralizedGradient gammaSupgradient(const SymMatrix& X, int s);
GeneralizedGradient gammaSupgradientFromSpectrum(const SpectralDecomposition& sd,
                                                 int s, double rankTol);

/// Convex surrogate of the size-s inverse-trace objective.
double phiS(const SymMatrix& X, int s);
double phiFromEigenvalues(const Vector& lambdaDesc, int s);

/// Subgradient of phiS at X (negative semidefinite coefficients).
GeneralizedGradient phiSubgradient(const SymMatrix& X, int s);
GeneralizedGradient phiSubgradientFromSpectrum(const SpectralDecomposition& sd,
                                               int s);

/// Worst-case optimality gaps of the four selection heuristics.
MespBounds mespBounds(int n, int s);

}  // namespace mesp
