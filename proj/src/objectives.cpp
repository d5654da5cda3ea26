#include "mesp/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mesp/subsets.hpp"

namespace mesp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void checkCardinality(const Vector& lambda, int s) {
  if (s < 1 || s > lambda.size()) {
    throw MespError(ErrorCode::BadCardinality,
                    "size must lie in [1, dimension]");
  }
}

}  // namespace

double detTop(const Vector& lambdaDesc, int s) {
  checkCardinality(lambdaDesc, s);
  double acc = 0.0;
  for (int i = 0; i < s; ++i) {
    if (lambdaDesc(i) <= 0.0) return -kInf;
    acc += std::log(lambdaDesc(i));
  }
  return acc;
}

double detBottom(const Vector& lambdaDesc, int s) {
  checkCardinality(lambdaDesc, s);
  const int d = static_cast<int>(lambdaDesc.size());
  double acc = 0.0;
  for (int i = d - s; i < d; ++i) {
    if (lambdaDesc(i) <= 0.0) return -kInf;
    acc += std::log(lambdaDesc(i));
  }
  return acc;
}

double trTop(const Vector& lambdaDesc, int s) {
  checkCardinality(lambdaDesc, s);
  double acc = 0.0;
  for (int i = 0; i < s; ++i) {
    if (lambdaDesc(i) <= 0.0) return kInf;
    acc += 1.0 / lambdaDesc(i);
  }
  return acc;
}

double trBottom(const Vector& lambdaDesc, int s) {
  checkCardinality(lambdaDesc, s);
  const int d = static_cast<int>(lambdaDesc.size());
  double acc = 0.0;
  for (int i = d - s; i < d; ++i) acc += lambdaDesc(i);
  return acc;
}

KappaIndex kappa(const Vector& lambdaDesc, int s) {
  checkCardinality(lambdaDesc, s);
  const double tol = 1e-12 * (1.0 + std::abs(lambdaDesc(0)));
  double tail = lambdaDesc.sum();
  for (int k = 0; k < s; ++k) {
    const double threshold = tail / (s - k);
    const bool above = (k == 0) || (lambdaDesc(k - 1) > threshold + tol);
    const bool below = threshold >= lambdaDesc(k) - tol;
    if (above && below) return {k, threshold};
    tail -= lambdaDesc(k);
  }
  throw MespError(ErrorCode::NoValidIndex, "no split index found");
}

double gammaFromEigenvalues(const Vector& lambdaDesc, int s) {
  KappaIndex ki = kappa(lambdaDesc, s);
  if (ki.threshold <= 0.0) return -kInf;
  double acc = (s - ki.k) * std::log(ki.threshold);
  for (int i = 0; i < ki.k; ++i) acc += std::log(lambdaDesc(i));
  return acc;
}

double gammaS(const SymMatrix& X, int s) {
  return gammaFromEigenvalues(eig(X).eigenvalues, s);
}

GeneralizedGradient gammaSupgradientFromSpectrum(const SpectralDecomposition& sd,
                                                 int s, double rankTol) {
  const Vector& lambda = sd.eigenvalues;
  checkCardinality(lambda, s);
  const double cutoff = rankTol * std::max(lambda(0), 0.0);
  int rank = 0;
  while (rank < lambda.size() && lambda(rank) > cutoff) ++rank;
  if (rank < s) {
    throw MespError(ErrorCode::RankDeficient,
                    "matrix rank is below the subset size");
  }
  KappaIndex ki = kappa(lambda, s);
  const int d = static_cast<int>(lambda.size());
  double tail = 0.0;
  for (int i = ki.k; i < d; ++i) tail += lambda(i);
  GeneralizedGradient g;
  g.beta.resize(d);
  for (int i = 0; i < ki.k; ++i) g.beta(i) = 1.0 / lambda(i);
  const double tailCoef = (s - ki.k) / tail;
  for (int i = ki.k; i < d; ++i) g.beta(i) = tailCoef;
  g.matrix = sd.Q * g.beta.asDiagonal() * sd.Q.transpose();
  g.matrix = 0.5 * (g.matrix + g.matrix.transpose()).eval();
  return g;
}

GeneralizedGradient gammaSupgradient(const SymMatrix& X, int s) {
  return gammaSupgradientFromSpectrum(eig(X), s,
                                      defaultRankTolerance(X.order()));
}

double phiFromEigenvalues(const Vector& lambdaDesc, int s) {
  KappaIndex ki = kappa(lambdaDesc, s);
  if (ki.threshold <= 0.0) return kInf;
  const int d = static_cast<int>(lambdaDesc.size());
  double tail = 0.0;
  for (int i = ki.k; i < d; ++i) tail += lambdaDesc(i);
  double acc = (s - ki.k) * (s - ki.k) / tail;
  for (int i = 0; i < ki.k; ++i) acc += 1.0 / lambdaDesc(i);
  return acc;
}

double phiS(const SymMatrix& X, int s) {
  return phiFromEigenvalues(eig(X).eigenvalues, s);
}

GeneralizedGradient phiSubgradientFromSpectrum(const SpectralDecomposition& sd,
                                               int s) {
  const Vector& lambda = sd.eigenvalues;
  checkCardinality(lambda, s);
  KappaIndex ki = kappa(lambda, s);
  if (ki.threshold <= 0.0) {
    throw MespError(ErrorCode::RankDeficient,
                    "subgradient undefined at infinite value");
  }
  const int d = static_cast<int>(lambda.size());
  double tail = 0.0;
  for (int i = ki.k; i < d; ++i) tail += lambda(i);
  GeneralizedGradient g;
  g.beta.resize(d);
  for (int i = 0; i < ki.k; ++i) g.beta(i) = -1.0 / (lambda(i) * lambda(i));
  const double m = static_cast<double>(s - ki.k);
  const double tailCoef = -(m * m) / (tail * tail);
  for (int i = ki.k; i < d; ++i) g.beta(i) = tailCoef;
  g.matrix = sd.Q * g.beta.asDiagonal() * sd.Q.transpose();
  g.matrix = 0.5 * (g.matrix + g.matrix.transpose()).eval();
  return g;
}

GeneralizedGradient phiSubgradient(const SymMatrix& X, int s) {
  return phiSubgradientFromSpectrum(eig(X), s);
}

MespBounds mespBounds(int n, int s) {
  if (s < 1 || s > n) {
    throw MespError(ErrorCode::BadCardinality, "size must lie in [1, n]");
  }
  MespBounds b;
  b.sampling = s * std::log(static_cast<double>(s)) + logChoose(n, s) -
               s * std::log(static_cast<double>(n));
  b.nikolov = s * std::log(static_cast<double>(s)) - std::lgamma(s + 1.0);
  const double alt = n - s + 2.0 - static_cast<double>(n) / s;
  b.localSearch =
      s * std::min(std::log(static_cast<double>(s)), std::log(alt));
  b.greedy = 0.5 * std::log(2.0) * s * (s - 1.0) +
             0.5 * s * std::log(static_cast<double>(n));
  return b;
}

}  // namespace mesp
