#include "mesp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "mesp/esp.hpp"
#include "mesp/subsets.hpp"

namespace mesp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void checkWeights(const Vector& xhat, int s) {
  if (s < 1 || s > xhat.size()) {
    throw MespError(ErrorCode::BadCardinality, "size must lie in [1, n]");
  }
  int positive = 0;
  for (int i = 0; i < xhat.size(); ++i) {
    if (xhat(i) > 0.0) ++positive;
  }
  if (positive < s) {
    throw MespError(ErrorCode::InsufficientSupport,
                    "fewer than s positive weights");
  }
}

double logSumExp(const std::vector<double>& terms) {
  double m = -kInf;
  for (double t : terms) m = std::max(m, t);
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - m);
  return m + std::log(acc);
}

}  // namespace

double gramLogDet(const CovarianceInstance& inst, const std::vector<int>& S) {
  const int s = static_cast<int>(S.size());
  Matrix G(s, s);
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) {
      G(a, b) = inst.V.col(S[a]).dot(inst.V.col(S[b]));
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(G, Eigen::EigenvaluesOnly);
  const Vector lambda = solver.eigenvalues();
  const double cutoff =
      defaultRankTolerance(s) * std::max(lambda(s - 1), 0.0);
  double acc = 0.0;
  for (int i = 0; i < s; ++i) {
    if (lambda(i) <= cutoff) return -kInf;
    acc += std::log(lambda(i));
  }
  return acc;
}

SampledSubset sampleSubset(const CovarianceInstance& inst, const Vector& xhat,
                           int s, SubStream& rng) {
  const int n = static_cast<int>(xhat.size());
  checkWeights(xhat, s);
  const auto B = espSuffix(xhat, s);
  if (B[0][static_cast<size_t>(s)] <= 0.0) {
    throw MespError(ErrorCode::InsufficientSupport,
                    "weights carry no size-s subset");
  }
  SampledSubset out;
  out.seed = rng.streamId();
  for (int j = 0; j < n; ++j) {
    const double u = rng.uniform();
    const int need = s - static_cast<int>(out.S.size());
    if (need == 0) continue;
    const double denom = B[static_cast<size_t>(j)][static_cast<size_t>(need)];
    if (denom <= 0.0) continue;
    const double pAccept =
        xhat(j) * B[static_cast<size_t>(j) + 1][static_cast<size_t>(need) - 1] /
        denom;
    if (u < pAccept) out.S.push_back(j);
  }
  if (static_cast<int>(out.S.size()) != s) {
    throw MespError(ErrorCode::InsufficientSupport,
                    "pass terminated with an incomplete subset");
  }
  out.logObjective = gramLogDet(inst, out.S);
  return out;
}

double samplePathProbability(const Vector& xhat, int s,
                             const std::vector<int>& S) {
  const int n = static_cast<int>(xhat.size());
  const auto B = espSuffix(xhat, s);
  double p = 1.0;
  size_t pos = 0;
  int taken = 0;
  for (int j = 0; j < n; ++j) {
    const int need = s - taken;
    if (need == 0) break;
    const double denom = B[static_cast<size_t>(j)][static_cast<size_t>(need)];
    if (denom <= 0.0) return 0.0;
    const double pAccept =
        xhat(j) * B[static_cast<size_t>(j) + 1][static_cast<size_t>(need) - 1] /
        denom;
    if (pos < S.size() && S[pos] == j) {
      p *= pAccept;
      ++pos;
      ++taken;
    } else {
      p *= 1.0 - pAccept;
    }
  }
  return (taken == s) ? p : 0.0;
}

SampledSubset bestOfSampling(const CovarianceInstance& inst,
                             const Vector& xhat, int s, int trials,
                             std::uint64_t masterSeed, int threads) {
  if (trials < 1) {
    throw MespError(ErrorCode::BadCardinality, "trial count must be positive");
  }
  std::vector<SampledSubset> results(static_cast<size_t>(trials));
  auto runRange = [&](int lo, int hi) {
    for (int t = lo; t < hi; ++t) {
      SubStream rng(masterSeed, static_cast<std::uint64_t>(t));
      results[static_cast<size_t>(t)] = sampleSubset(inst, xhat, s, rng);
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
    if (results[static_cast<size_t>(t)].logObjective >
        results[static_cast<size_t>(bestIdx)].logObjective) {
      bestIdx = t;
    }
  }
  return results[static_cast<size_t>(bestIdx)];
}

double expectedLogObjective(const CovarianceInstance& inst, const Vector& xhat,
                            int s, double cap) {
  const int n = static_cast<int>(xhat.size());
  checkWeights(xhat, s);
  checkEnumerationCap(n, s, cap, "expectedLogObjective");
  std::vector<double> logNum;
  std::vector<double> logDen;
  forEachSubset(n, s, [&](const std::vector<int>& S) {
    double logW = 0.0;
    for (int i : S) {
      if (xhat(i) <= 0.0) {
        logW = -kInf;
        break;
      }
      logW += std::log(xhat(i));
    }
    if (!std::isfinite(logW)) return;
    logDen.push_back(logW);
    const double logDet = gramLogDet(inst, S);
    if (std::isfinite(logDet)) logNum.push_back(logW + logDet);
  });
  if (logDen.empty()) {
    throw MespError(ErrorCode::InsufficientSupport,
                    "weights carry no size-s subset");
  }
  if (logNum.empty()) return -kInf;
  return logSumExp(logNum) - logSumExp(logDen);
}

double conditionalH(const CovarianceInstance& inst, const Vector& xhat, int s,
                    const std::vector<int>& T) {
  const int n = static_cast<int>(xhat.size());
  const int t = static_cast<int>(T.size());
  if (t > s || s > inst.d) {
    throw MespError(ErrorCode::BadCardinality,
                    "conditioning set larger than the target size");
  }
  std::vector<bool> inT(static_cast<size_t>(n), false);
  for (int i : T) inT[static_cast<size_t>(i)] = true;

  double logDetT = 0.0;
  Matrix P = Matrix::Identity(inst.d, inst.d);
  if (t > 0) {
    PseudoInverseState st;
    st.X = Matrix::Zero(inst.d, inst.d);
    st.Xdag = Matrix::Zero(inst.d, inst.d);
    st.projector = Matrix::Identity(inst.d, inst.d);
    st.rank = 0;
    for (int i : T) {
      const Vector v = inst.V.col(i);
      const double score = v.dot(st.projector * v);
      if (score <= 0.0) {
        throw MespError(ErrorCode::DependentColumns,
                        "conditioning columns are linearly dependent");
      }
      logDetT += std::log(score);
      try {
        st = pinvUpdate(st, v);
      } catch (const MespError& e) {
        if (e.code() == ErrorCode::InColumnSpace) {
          throw MespError(ErrorCode::DependentColumns,
                          "conditioning columns are linearly dependent");
        }
        throw;
      }
    }
    P = st.projector;
  }
  if (t == s) return std::exp(logDetT);

  Matrix Y = Matrix::Zero(inst.d, inst.d);
  Vector xOff(n - t);
  int pos = 0;
  for (int j = 0; j < n; ++j) {
    if (inT[static_cast<size_t>(j)]) continue;
    xOff(pos++) = xhat(j);
    if (xhat(j) > 0.0) {
      const Vector w = P * inst.V.col(j);
      Y.noalias() += xhat(j) * w * w.transpose();
    }
  }
  const ESPTable num = eigESP(SymMatrix(Y), s - t);
  const ESPTable den = espAll(xOff, s - t);
  if (den[s - t] <= 0.0) {
    throw MespError(ErrorCode::InsufficientSupport,
                    "no admissible completion of the conditioning set");
  }
  return std::exp(logDetT) * num[s - t] / den[s - t];
}

SampledSubset derandomize(const CovarianceInstance& inst, const Vector& xhat,
                          int s) {
  const int n = static_cast<int>(xhat.size());
  checkWeights(xhat, s);
  SampledSubset out;
  std::vector<bool> chosen(static_cast<size_t>(n), false);
  for (int round = 0; round < s; ++round) {
    int bestJ = -1;
    double bestH = 0.0;
    for (int j = 0; j < n; ++j) {
      if (chosen[static_cast<size_t>(j)] || xhat(j) <= 0.0) continue;
      std::vector<int> cand = out.S;
      cand.push_back(j);
      std::sort(cand.begin(), cand.end());
      double h = 0.0;
      try {
        h = conditionalH(inst, xhat, s, cand);
      } catch (const MespError& e) {
        if (e.code() != ErrorCode::DependentColumns &&
            e.code() != ErrorCode::InsufficientSupport) {
          throw;
        }
        continue;
      }
      if (h > bestH) {
        bestH = h;
        bestJ = j;
      }
    }
    if (bestJ < 0) {
      throw MespError(ErrorCode::DependentColumns,
                      "every candidate extension is singular");
    }
    out.S.push_back(bestJ);
    std::sort(out.S.begin(), out.S.end());
    chosen[static_cast<size_t>(bestJ)] = true;
  }
  out.logObjective = gramLogDet(inst, out.S);
  return out;
}

}  // namespace mesp
