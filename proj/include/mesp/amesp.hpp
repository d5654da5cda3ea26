#pragma once

#include "mesp/local_search.hpp"
#include "mesp/sampling.hpp"

namespace mesp {

/// Fractional point for the convex inverse-trace relaxation.
struct AFractionalSolution {
  Vector x;
  int s = 0;
  double value = 0.0;
  std::vector<int> support;
};

struct APCResult {
  AFractionalSolution solution;
  DualCertificate certificate;
  FWTrace trace;
};

/// Iteration-cap overrun for the inverse-trace solver, carrying the best
/// solution and certificate found so far.
class AIterationLimitError : public MespError {
 public:
  explicit AIterationLimitError(APCResult best)
      : MespError(ErrorCode::IterationLimit,
                  "gap target not reached within the iteration cap"),
        best_(std::move(best)) {}

  const APCResult& best() const { return best_; }

 private:
  APCResult best_;
};

/// Conditional-gradient minimization of the convex inverse-trace surrogate,
/// with a lower-bound certificate from the best dual iterate.
APCResult solveAPC(const CovarianceInstance& inst, int s, double alpha = 0.0,
                   long maxIter = 0);

/// One left-to-right pass drawing a size-s subset with probability
/// proportional to the product of the selected weights times the Gram
/// determinant of the selected columns.
SampledSubset volumeSample(const CovarianceInstance& inst, const Vector& xhat,
                           int s, SubStream& rng);

/// Probability that the pass above emits exactly the subset S.
double volumePathProbability(const CovarianceInstance& inst,
                             const Vector& xhat, int s,
                             const std::vector<int>& S);

/// Best volume draw (smallest inverse trace, earliest stream on ties).
SampledSubset bestOfVolumeSampling(const CovarianceInstance& inst,
                                   const Vector& xhat, int s, int trials,
                                   std::uint64_t masterSeed, int threads = 1);

/// Exact expectation of the inverse trace under the volume distribution.
double expectedATrace(const CovarianceInstance& inst, const Vector& xhat,
                      int s, double cap = 2e5);

/// Selected set state for the inverse-trace objective.
struct ASearchState {
  std::vector<int> S;
  PseudoInverseState pinv;
  double invTrace = 0.0;
  int swapCount = 0;
};

struct ASearchResult {
  ASearchState state;
  DualCertificate certificate;
  LocalSearchTrace trace;
};

/// Swap descent on the inverse trace with a lower-bound certificate at the
/// final state. initial == nullptr starts from greedy forward selection.
ASearchResult aLocalSearch(const CovarianceInstance& inst, int s,
                           const std::vector<int>* initial = nullptr,
                           double thetaA = 1e-9);

/// Worst-case approximation ratios of the two inverse-trace heuristics.
struct AmespRatios {
  double volume = 0.0;
  double localSearch = 0.0;
};

AmespRatios amespRatios(int n, int s, double lambdaMax, double delta);

}  // namespace mesp
