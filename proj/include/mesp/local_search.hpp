#pragma once

#include "mesp/fw.hpp"

namespace mesp {

/// Selected index set with the pseudoinverse bundle of its rank-one sum and
/// the log-determinant of its Gram matrix.
struct SearchState {
  std::vector<int> S;
  PseudoInverseState pinv;
  double logDet = 0.0;
  int swapCount = 0;
};

struct SwapRecord {
  int outIndex = 0;
  int inIndex = 0;
  double logDet = 0.0;
};

struct LocalSearchTrace {
  std::vector<SwapRecord> swaps;
  int passes = 0;
};

/// State for an explicit index set; throws DependentColumns when the
/// selected columns are linearly dependent.
SearchState makeSearchState(const CovarianceInstance& inst,
                            const std::vector<int>& S);

/// Greedy forward selection of s columns maximizing the Gram determinant.
/// Throws RankStarved when no column can increase the rank.
SearchState greedyInit(const CovarianceInstance& inst, int s);

/// Swap ascent: replaces one selected column per accepted move while a swap
/// improves the determinant by a factor above 1 + theta.
std::pair<SearchState, LocalSearchTrace> localSearch(
    const CovarianceInstance& inst, SearchState state, double theta = 1e-6);

/// Upper-bound certificate built from a swap-stable state. Throws
/// NotLocallyOptimal when the stability inequalities fail beyond slack.
DualCertificate dualCertificateFromLocal(const CovarianceInstance& inst,
                                         const SearchState& state,
                                         double theta = 1e-6);

}  // namespace mesp
