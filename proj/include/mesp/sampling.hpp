#pragma once

#include <cstdint>

#include "mesp/fw.hpp"
#include "mesp/rng.hpp"

namespace mesp {

/// Subset drawn by a randomized selection scheme, with the log-determinant
/// of its Gram matrix and the stream identifier that produced it.
struct SampledSubset {
  std::vector<int> S;
  double logObjective = 0.0;
  std::uint64_t seed = 0;
};

/// One left-to-right pass drawing a size-s subset with probability
/// proportional to the product of the selected weights.
SampledSubset sampleSubset(const CovarianceInstance& inst, const Vector& xhat,
                           int s, SubStream& rng);

/// Probability that the pass above emits exactly the subset S.
double samplePathProbability(const Vector& xhat, int s,
                             const std::vector<int>& S);

/// Best draw (largest log objective, earliest stream on ties) over the given
/// number of independent trials. threads <= 1 runs sequentially.
SampledSubset bestOfSampling(const CovarianceInstance& inst,
                             const Vector& xhat, int s, int trials,
                             std::uint64_t masterSeed, int threads = 1);

/// log of the exact expectation of the sampled Gram determinant, by
/// enumeration over all size-s subsets in the support.
double expectedLogObjective(const CovarianceInstance& inst, const Vector& xhat,
                            int s, double cap = 2e5);

/// Conditional expectation of the sampled Gram determinant given that the
/// draw contains T, evaluated in closed form. Throws DependentColumns when
/// the columns of T are linearly dependent.
double conditionalH(const CovarianceInstance& inst, const Vector& xhat, int s,
                    const std::vector<int>& T);

/// Greedy maximization of the conditional expectation, one index per round.
SampledSubset derandomize(const CovarianceInstance& inst, const Vector& xhat,
                          int s);

/// log-determinant of the Gram matrix of the selected columns of V.
double gramLogDet(const CovarianceInstance& inst, const std::vector<int>& S);

}  // namespace mesp
