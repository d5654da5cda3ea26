#include "mesp/oracle.hpp"

#include <cmath>
#include <limits>

#include "mesp/subsets.hpp"

namespace mesp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix submatrix(const Matrix& C, const std::vector<int>& S) {
  const int s = static_cast<int>(S.size());
  Matrix out(s, s);
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) out(a, b) = C(S[a], S[b]);
  }
  return out;
}

Vector subEigenvalues(const SymMatrix& C, const std::vector<int>& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(submatrix(C.m, S),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double logDetAscending(const Vector& lambdaAsc) {
  const double cutoff =
      defaultRankTolerance(static_cast<int>(lambdaAsc.size())) *
      std::max(lambdaAsc(lambdaAsc.size() - 1), 0.0);
  double acc = 0.0;
  for (int i = 0; i < lambdaAsc.size(); ++i) {
    if (lambdaAsc(i) <= cutoff) return -kInf;
    acc += std::log(lambdaAsc(i));
  }
  return acc;
}

}  // namespace

double logDetSubmatrix(const SymMatrix& C, const std::vector<int>& S) {
  return logDetAscending(subEigenvalues(C, S));
}

double invTraceSubmatrix(const SymMatrix& C, const std::vector<int>& S) {
  const Vector lambda = subEigenvalues(C, S);
  const double cutoff =
      defaultRankTolerance(static_cast<int>(S.size())) *
      std::max(lambda(lambda.size() - 1), 0.0);
  double acc = 0.0;
  for (int i = 0; i < lambda.size(); ++i) {
    if (lambda(i) <= cutoff) return kInf;
    acc += 1.0 / lambda(i);
  }
  return acc;
}

ExactResult exactMESP(const CovarianceInstance& inst, int s, double cap) {
  if (s < 1 || s > inst.d) {
    throw MespError(ErrorCode::BadCardinality, "size must lie in [1, rank]");
  }
  checkEnumerationCap(inst.n, s, cap, "exactMESP");
  ExactResult best;
  best.value = -kInf;
  bool first = true;
  forEachSubset(inst.n, s, [&](const std::vector<int>& S) {
    const double v = logDetSubmatrix(inst.C, S);
    if (first || v > best.value) {
      best.S = S;
      best.value = v;
      first = false;
    }
  });
  return best;
}

ExactResult exactAMESP(const CovarianceInstance& inst, int s, double cap) {
  if (s < 1 || s > inst.d) {
    throw MespError(ErrorCode::BadCardinality, "size must lie in [1, rank]");
  }
  checkEnumerationCap(inst.n, s, cap, "exactAMESP");
  ExactResult best;
  best.value = kInf;
  bool first = true;
  forEachSubset(inst.n, s, [&](const std::vector<int>& S) {
    const double v = invTraceSubmatrix(inst.C, S);
    if (first || v < best.value) {
      best.S = S;
      best.value = v;
      first = false;
    }
  });
  return best;
}

double naiveESP(const Vector& x, int l, double cap) {
  const int n = static_cast<int>(x.size());
  if (l == 0) return 1.0;
  if (l < 0 || l > n) return 0.0;
  checkEnumerationCap(n, l, cap, "naiveESP");
  double acc = 0.0;
  forEachSubset(n, l, [&](const std::vector<int>& S) {
    double prod = 1.0;
    for (int i : S) prod *= x(i);
    acc += prod;
  });
  return acc;
}

std::vector<SubsetProbability> exactProductDistribution(const Vector& xhat,
                                                        int s, double cap) {
  const int n = static_cast<int>(xhat.size());
  if (s < 1 || s > n) {
    throw MespError(ErrorCode::BadCardinality, "size must lie in [1, n]");
  }
  checkEnumerationCap(n, s, cap, "exactProductDistribution");
  std::vector<SubsetProbability> out;
  double total = 0.0;
  forEachSubset(n, s, [&](const std::vector<int>& S) {
    double prod = 1.0;
    for (int i : S) prod *= xhat(i);
    out.push_back({S, prod});
    total += prod;
  });
  if (total <= 0.0) {
    throw MespError(ErrorCode::InsufficientSupport,
                    "weights carry no size-s subset");
  }
  for (auto& e : out) e.p /= total;
  return out;
}

std::vector<SubsetProbability> exactVolumeDistribution(
    const CovarianceInstance& inst, const Vector& xhat, int s, double cap) {
  const int n = inst.n;
  if (s < 1 || s > inst.d) {
    throw MespError(ErrorCode::BadCardinality, "size must lie in [1, rank]");
  }
  checkEnumerationCap(n, s, cap, "exactVolumeDistribution");
  std::vector<SubsetProbability> out;
  double total = 0.0;
  forEachSubset(n, s, [&](const std::vector<int>& S) {
    double prod = 1.0;
    for (int i : S) prod *= xhat(i);
    double det = 0.0;
    if (prod > 0.0) {
      Matrix G(s, s);
      for (int a = 0; a < s; ++a) {
        for (int b = 0; b < s; ++b) {
          G(a, b) = inst.V.col(S[a]).dot(inst.V.col(S[b]));
        }
      }
      Eigen::SelfAdjointEigenSolver<Matrix> solver(G, Eigen::EigenvaluesOnly);
      const double logDet = logDetAscending(solver.eigenvalues());
      det = std::isfinite(logDet) ? std::exp(logDet) : 0.0;
    }
    out.push_back({S, prod * det});
    total += prod * det;
  });
  if (total <= 0.0) {
    throw MespError(ErrorCode::InsufficientSupport,
                    "weights carry no independent size-s subset");
  }
  for (auto& e : out) e.p /= total;
  return out;
}

double exactDelta(const CovarianceInstance& inst, int s, double cap) {
  if (s < 1 || s > inst.n) {
    throw MespError(ErrorCode::BadCardinality, "size must lie in [1, n]");
  }
  checkEnumerationCap(inst.n, s, cap, "exactDelta");
  double best = kInf;
  forEachSubset(inst.n, s, [&](const std::vector<int>& S) {
    const Vector lambda = subEigenvalues(inst.C, S);
    best = std::min(best, lambda(0));
  });
  return best;
}

}  // namespace mesp
