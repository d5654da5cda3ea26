#include "mesp/fw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mesp/oracle.hpp"

namespace mesp {

namespace {

constexpr double kSupportTol = 1e-8;

std::vector<int> supportOf(const Vector& x) {
  std::vector<int> out;
  for (int i = 0; i < x.size(); ++i) {
    if (x(i) > kSupportTol) out.push_back(i);
  }
  return out;
}

std::vector<int> topIndices(const Vector& g, int s) {
  std::vector<int> ord(g.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::stable_sort(ord.begin(), ord.end(),
                   [&](int a, int b) { return g(a) > g(b); });
  ord.resize(s);
  return ord;
}

}  // namespace

Smoothness smoothnessConstant(const CovarianceInstance& inst, int s,
                              double cap) {
  Smoothness sm;
  sm.delta = exactDelta(inst, s, cap);
  if (sm.delta <= 0.0) {
    throw MespError(ErrorCode::RankDeficient,
                    "a size-s principal submatrix is singular");
  }
  const double lmax = eig(inst.C).eigenvalues(0);
  sm.L = (lmax * lmax) / (sm.delta * sm.delta);
  return sm;
}

double dualGap(const DualCertificate& cert, double primal) {
  if (cert.kind != CertificateKind::LD) {
    throw MespError(ErrorCode::KindMismatch,
                    "gap is defined for upper-bound certificates");
  }
  return cert.boundValue - primal;
}

FWResult solvePC(const CovarianceInstance& inst, int s, double alpha,
                 long maxIter, const Vector* x0) {
  const int n = inst.n;
  const int d = inst.d;
  if (s < 1 || s > d) {
    throw MespError(ErrorCode::BadCardinality, "size must lie in [1, rank]");
  }

  Vector x;
  if (x0 != nullptr) {
    if (x0->size() != n) {
      throw MespError(ErrorCode::BadCardinality, "start point has wrong size");
    }
    if (x0->minCoeff() < -1e-9 || x0->maxCoeff() > 1.0 + 1e-9 ||
        std::abs(x0->sum() - s) > 1e-6) {
      throw MespError(ErrorCode::BadCardinality, "start point is infeasible");
    }
    x = x0->cwiseMax(0.0).cwiseMin(1.0);
  } else {
    x = Vector::Constant(n, static_cast<double>(s) / n);
  }

  const double rankTol = defaultRankTolerance(d);

  FWResult best;
  best.solution.s = s;
  best.solution.value = -std::numeric_limits<double>::infinity();
  double bestDual = std::numeric_limits<double>::infinity();

  FWTrace trace;
  double runningMin = std::numeric_limits<double>::infinity();
  double effectiveAlpha = alpha;
  long effectiveMaxIter = maxIter;

  for (long t = 0;; ++t) {
    Matrix X = inst.V * x.asDiagonal() * inst.V.transpose();
    SymMatrix Xs(X);
    SpectralDecomposition sd = eig(Xs);
    int rank = 0;
    const double cutoff = rankTol * std::max(sd.eigenvalues(0), 0.0);
    while (rank < d && sd.eigenvalues(rank) > cutoff) ++rank;
    if (rank < s) {
      throw MespError(ErrorCode::RankCollapse,
                      "iterate rank fell below the subset size");
    }

    const double primal = gammaFromEigenvalues(sd.eigenvalues, s);
    GeneralizedGradient grad = gammaSupgradientFromSpectrum(sd, s, rankTol);

    Matrix GV = grad.matrix * inst.V;
    Vector scores = (inst.V.cwiseProduct(GV)).colwise().sum().transpose();

    std::vector<int> top = topIndices(scores, s);
    const double nu = scores(top[static_cast<size_t>(s) - 1]);
    Vector mu = Vector::Zero(n);
    double topSum = 0.0;
    for (int idx : top) {
      mu(idx) = scores(idx) - nu;
      topSum += scores(idx);
    }
    const double gap = topSum - s;
    const double dualVal = primal + gap;

    if (effectiveAlpha <= 0.0) {
      effectiveAlpha = 1e-6 * std::max(1.0, std::abs(primal));
    }

    runningMin = std::min(runningMin, gap);
    const double step = 2.0 / (t + 2.0);
    trace.iters.push_back({static_cast<int>(t), step, primal, gap, runningMin,
                           static_cast<int>(supportOf(x).size())});

    if (primal > best.solution.value) {
      best.solution.x = x;
      best.solution.value = primal;
      best.solution.support = supportOf(x);
    }
    if (dualVal < bestDual) {
      bestDual = dualVal;
      best.certificate.Lambda = grad.matrix;
      best.certificate.nu = nu;
      best.certificate.mu = mu;
      best.certificate.boundValue = dualVal;
      best.certificate.kind = CertificateKind::LD;
    }

    if (runningMin < effectiveAlpha) break;
    if (effectiveMaxIter <= 0) {
      effectiveMaxIter = 5000;
      try {
        Smoothness sm = smoothnessConstant(inst, s);
        const double bound =
            10.0 * std::ceil(4.0 * sm.L * std::min(s, n - s) / effectiveAlpha);
        effectiveMaxIter = static_cast<long>(std::min(bound, 2.0e9));
        effectiveMaxIter = std::max(effectiveMaxIter, 1L);
      } catch (const MespError& e) {
        if (e.code() != ErrorCode::TooLarge) throw;
      }
    }
    if (t + 1 >= effectiveMaxIter) {
      trace.alpha = effectiveAlpha;
      trace.terminalGap = runningMin;
      best.trace = std::move(trace);
      throw IterationLimitError(std::move(best));
    }

    Vector vertex = Vector::Zero(n);
    for (int idx : top) vertex(idx) = 1.0;
    x = step * vertex + (1.0 - step) * x;
  }

  trace.alpha = effectiveAlpha;
  trace.terminalGap = runningMin;
  best.trace = std::move(trace);
  return best;
}

}  // namespace mesp
