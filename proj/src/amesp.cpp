#include "mesp/amesp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>

#include "mesp/esp.hpp"
#include "mesp/oracle.hpp"
#include "mesp/subsets.hpp"

namespace mesp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRefreshInterval = 64;

std::vector<int> supportOf(const Vector& x) {
  std::vector<int> out;
  for (int i = 0; i < x.size(); ++i) {
    if (x(i) > 1e-8) out.push_back(i);
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

double espOfClampedEigenvalues(const Matrix& Y, int order) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(Y, Eigen::EigenvaluesOnly);
  Vector lambda = solver.eigenvalues().cwiseMax(0.0);
  return espAll(lambda, order)[order];
}

/// Shared left-to-right volume walk; decide(j, pAccept) returns whether j is
/// taken, so the sampler and the probability replay use identical arithmetic.
std::vector<int> volumeWalk(const CovarianceInstance& inst, const Vector& xhat,
                            int s,
                            const std::function<bool(int, double)>& decide) {
  const int n = static_cast<int>(xhat.size());
  const int d = inst.d;
  Matrix W = inst.V;
  Matrix Y = Matrix::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    if (xhat(i) > 0.0) Y.noalias() += xhat(i) * W.col(i) * W.col(i).transpose();
  }
  if (espOfClampedEigenvalues(Y, s) <= 0.0) {
    throw MespError(ErrorCode::InsufficientSupport,
                    "weights carry no independent size-s subset");
  }
  std::vector<int> S;
  for (int j = 0; j < n; ++j) {
    const int need = s - static_cast<int>(S.size());
    if (need == 0) {
      if (decide(j, 0.0)) {
        throw MespError(ErrorCode::InsufficientSupport,
                        "walk accepted beyond the target size");
      }
      continue;
    }
    const Vector wj = W.col(j);
    const double wj2 = wj.squaredNorm();
    Matrix Yrest = Y;
    if (xhat(j) > 0.0) Yrest.noalias() -= xhat(j) * wj * wj.transpose();

    double za = 0.0;
    Matrix Yacc;
    bool haveAcc = false;
    if (xhat(j) > 0.0 && wj2 > 0.0) {
      Matrix Pj = Matrix::Identity(d, d) - wj * wj.transpose() / wj2;
      Yacc = Pj * Yrest * Pj;
      Yacc = 0.5 * (Yacc + Yacc.transpose()).eval();
      haveAcc = true;
      za = xhat(j) * wj2 * espOfClampedEigenvalues(Yacc, need - 1);
    }
    const double zr = espOfClampedEigenvalues(Yrest, need);
    const double total = za + zr;
    const double pAccept = (total > 0.0 && za > 0.0) ? za / total : 0.0;

    if (decide(j, pAccept)) {
      if (!haveAcc) {
        throw MespError(ErrorCode::InsufficientSupport,
                        "zero-probability branch taken");
      }
      S.push_back(j);
      W -= wj * (wj.transpose() * W) / wj2;
      Y = Yacc;
    } else {
      Y = Yrest;
    }
  }
  if (static_cast<int>(S.size()) != s) {
    throw MespError(ErrorCode::InsufficientSupport,
                    "pass terminated with an incomplete subset");
  }
  return S;
}

}  // namespace

APCResult solveAPC(const CovarianceInstance& inst, int s, double alpha,
                   long maxIter) {
  const int n = inst.n;
  const int d = inst.d;
  if (s < 1 || s > d) {
    throw MespError(ErrorCode::BadCardinality, "size must lie in [1, rank]");
  }
  Vector x = Vector::Constant(n, static_cast<double>(s) / n);
  const double rankTol = defaultRankTolerance(d);

  APCResult best;
  best.solution.s = s;
  best.solution.value = kInf;
  double bestDual = -kInf;

  FWTrace trace;
  double runningMin = kInf;
  double effectiveAlpha = alpha;
  long effectiveMaxIter = maxIter > 0 ? maxIter : 5000;

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

    const double primal = phiFromEigenvalues(sd.eigenvalues, s);
    GeneralizedGradient sub = phiSubgradientFromSpectrum(sd, s);
    Matrix Lambda = -sub.matrix;

    Matrix LV = Lambda * inst.V;
    Vector g = (inst.V.cwiseProduct(LV)).colwise().sum().transpose();

    std::vector<int> top = topIndices(g, s);
    const double nu = g(top[static_cast<size_t>(s) - 1]);
    Vector mu = Vector::Zero(n);
    double topSum = 0.0;
    for (int idx : top) {
      mu(idx) = g(idx) - nu;
      topSum += g(idx);
    }
    const double gap = topSum - x.dot(g);

    Vector sqrtEig = eig(SymMatrix(Lambda)).eigenvalues.cwiseMax(0.0);
    for (int i = 0; i < sqrtEig.size(); ++i) sqrtEig(i) = std::sqrt(sqrtEig(i));
    const double trHalf = trBottom(sqrtEig, s);
    const double dualVal = 2.0 * trHalf - s * nu - mu.sum();

    if (effectiveAlpha <= 0.0) {
      effectiveAlpha = 1e-6 * std::max(1.0, std::abs(primal));
    }

    runningMin = std::min(runningMin, gap);
    const double step = 2.0 / (t + 2.0);
    trace.iters.push_back({static_cast<int>(t), step, primal, gap, runningMin,
                           static_cast<int>(supportOf(x).size())});

    if (primal < best.solution.value) {
      best.solution.x = x;
      best.solution.value = primal;
      best.solution.support = supportOf(x);
    }
    if (dualVal > bestDual) {
      bestDual = dualVal;
      best.certificate.Lambda = Lambda;
      best.certificate.nu = nu;
      best.certificate.mu = mu;
      best.certificate.boundValue = dualVal;
      best.certificate.kind = CertificateKind::ALD;
    }

    if (runningMin < effectiveAlpha) break;
    if (t + 1 >= effectiveMaxIter) {
      trace.alpha = effectiveAlpha;
      trace.terminalGap = runningMin;
      best.trace = std::move(trace);
      throw AIterationLimitError(std::move(best));
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

SampledSubset volumeSample(const CovarianceInstance& inst, const Vector& xhat,
                           int s, SubStream& rng) {
  if (s < 1 || s > inst.d) {
    throw MespError(ErrorCode::BadCardinality, "size must lie in [1, rank]");
  }
  SampledSubset out;
  out.seed = rng.streamId();
  out.S = volumeWalk(inst, xhat, s, [&](int, double pAccept) {
    return rng.uniform() < pAccept;
  });
  out.logObjective = gramLogDet(inst, out.S);
  return out;
}

double volumePathProbability(const CovarianceInstance& inst,
                             const Vector& xhat, int s,
                             const std::vector<int>& S) {
  double p = 1.0;
  size_t pos = 0;
  try {
    volumeWalk(inst, xhat, s, [&](int j, double pAccept) {
      if (pos < S.size() && S[pos] == j) {
        p *= pAccept;
        ++pos;
        return true;
      }
      p *= 1.0 - pAccept;
      return false;
    });
  } catch (const MespError& e) {
    if (e.code() == ErrorCode::InsufficientSupport) return 0.0;
    throw;
  }
  return p;
}

SampledSubset bestOfVolumeSampling(const CovarianceInstance& inst,
                                   const Vector& xhat, int s, int trials,
                                   std::uint64_t masterSeed, int threads) {
  if (trials < 1) {
    throw MespError(ErrorCode::BadCardinality, "trial count must be positive");
  }
  std::vector<SampledSubset> results(static_cast<size_t>(trials));
  std::vector<double> traces(static_cast<size_t>(trials));
  auto runRange = [&](int lo, int hi) {
    for (int t = lo; t < hi; ++t) {
      SubStream rng(masterSeed, static_cast<std::uint64_t>(t));
      results[static_cast<size_t>(t)] = volumeSample(inst, xhat, s, rng);
      traces[static_cast<size_t>(t)] =
          invTraceSubmatrix(inst.C, results[static_cast<size_t>(t)].S);
    }
  };
  threads = std::max(1, std::min(threads, trials));
  if (threads == 1) {
    runRange(0, trials);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (trials + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const int lo = w * chunk;
      const int hi = std::min(trials, lo + chunk);
      if (lo < hi) pool.emplace_back(runRange, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  int bestIdx = 0;
  for (int t = 1; t < trials; ++t) {
    if (traces[static_cast<size_t>(t)] < traces[static_cast<size_t>(bestIdx)]) {
      bestIdx = t;
    }
  }
  return results[static_cast<size_t>(bestIdx)];
}

double expectedATrace(const CovarianceInstance& inst, const Vector& xhat,
                      int s, double cap) {
  const auto dist = exactVolumeDistribution(inst, xhat, s, cap);
  double acc = 0.0;
  for (const auto& e : dist) {
    if (e.p > 0.0) acc += e.p * invTraceSubmatrix(inst.C, e.S);
  }
  return acc;
}

ASearchResult aLocalSearch(const CovarianceInstance& inst, int s,
                           const std::vector<int>* initial, double thetaA) {
  const int n = inst.n;
  ASearchState st;
  if (initial != nullptr) {
    SearchState seed = makeSearchState(inst, *initial);
    st.S = seed.S;
    st.pinv = seed.pinv;
  } else {
    SearchState seed = greedyInit(inst, s);
    st.S = seed.S;
    st.pinv = seed.pinv;
  }
  if (static_cast<int>(st.S.size()) != s) {
    throw MespError(ErrorCode::BadCardinality,
                    "initial set size does not match s");
  }
  st.invTrace = st.pinv.Xdag.trace();

  LocalSearchTrace trace;
  auto inS = [&](int j) {
    return std::binary_search(st.S.begin(), st.S.end(), j);
  };
  const double tol = 1e-12 * (1.0 + inst.V.colwise().squaredNorm().maxCoeff());

  bool improved = true;
  while (improved) {
    improved = false;
    ++trace.passes;
    const std::vector<int> snapshot = st.S;
    for (int i : snapshot) {
      const Vector vi = inst.V.col(i);
      PseudoInverseState down = pinvDowndate(st.pinv, vi);
      const double trDown = down.Xdag.trace();
      int bestJ = -1;
      double bestTr = kInf;
      for (int j = 0; j < n; ++j) {
        if (inS(j)) continue;
        const Vector vj = inst.V.col(j);
        const double pvv = vj.dot(down.projector * vj);
        if (pvv <= tol) continue;
        const double newTr = trDown + (1.0 + vj.dot(down.Xdag * vj)) / pvv;
        if (newTr < bestTr) {
          bestTr = newTr;
          bestJ = j;
        }
      }
      if (bestJ < 0 || bestTr >= st.invTrace * (1.0 - thetaA)) continue;

      st.pinv = pinvUpdate(down, inst.V.col(bestJ));
      st.S.erase(std::lower_bound(st.S.begin(), st.S.end(), i));
      st.S.insert(std::upper_bound(st.S.begin(), st.S.end(), bestJ), bestJ);
      ++st.swapCount;
      if (st.swapCount % kRefreshInterval == 0) {
        st.pinv = columnPinv(inst, st.S);
      }
      st.invTrace = st.pinv.Xdag.trace();
      trace.swaps.push_back({i, bestJ, st.invTrace});
      improved = true;
    }
  }

  const Vector lambdaX = eig(SymMatrix(st.pinv.X)).eigenvalues;
  const double lambdaS = lambdaX(s - 1);
  Matrix A = 2.0 * st.pinv.Xdag * st.pinv.Xdag +
             (2.0 / (lambdaS * lambdaS)) * st.pinv.projector;
  A = 0.5 * (A + A.transpose()).eval();
  Vector g = (inst.V.cwiseProduct((A * inst.V).eval()))
                 .colwise()
                 .sum()
                 .transpose();
  std::vector<double> sorted(g.data(), g.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double h = 0.0;
  for (int i = 0; i < s; ++i) h += sorted[static_cast<size_t>(i)];
  Vector sqrtEigA = eig(SymMatrix(A)).eigenvalues.cwiseMax(0.0);
  for (int i = 0; i < sqrtEigA.size(); ++i) {
    sqrtEigA(i) = std::sqrt(sqrtEigA(i));
  }
  const double trHalfA = trBottom(sqrtEigA, s);
  const double tStar = trHalfA / h;

  ASearchResult out;
  out.state = std::move(st);
  out.trace = std::move(trace);
  out.certificate.Lambda = (tStar * tStar) * A;
  out.certificate.nu = tStar * tStar * sorted[static_cast<size_t>(s) - 1];
  out.certificate.mu =
      ((tStar * tStar) * g.array() - out.certificate.nu).cwiseMax(0.0).matrix();
  Vector sqrtEigL =
      eig(SymMatrix(out.certificate.Lambda)).eigenvalues.cwiseMax(0.0);
  for (int i = 0; i < sqrtEigL.size(); ++i) {
    sqrtEigL(i) = std::sqrt(sqrtEigL(i));
  }
  out.certificate.boundValue = 2.0 * trBottom(sqrtEigL, s) -
                               s * out.certificate.nu -
                               out.certificate.mu.sum();
  out.certificate.kind = CertificateKind::ALD;
  return out;
}

AmespRatios amespRatios(int n, int s, double lambdaMax, double delta) {
  if (s < 1 || s > n) {
    throw MespError(ErrorCode::BadCardinality, "size must lie in [1, n]");
  }
  if (lambdaMax <= 0.0 || delta <= 0.0 || delta > lambdaMax + 1e-12) {
    throw MespError(ErrorCode::BadCardinality,
                    "eigenvalue extremes must satisfy 0 < delta <= lambdaMax");
  }
  AmespRatios r;
  r.volume = std::min(s, n - s + 1);
  const double ratio = lambdaMax / delta;
  r.localSearch = std::min(0.5 * s * (1.0 + ratio),
                           0.5 * (n + s + (n - s) * ratio));
  return r;
}

}  // namespace mesp
