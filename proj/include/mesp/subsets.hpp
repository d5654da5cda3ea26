#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mesp/errors.hpp"

namespace mesp {

/// log of the binomial coefficient n choose k.
inline double logChoose(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// n choose k as a count, guarded against overflow of the enumeration cap.
inline double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(logChoose(n, k));
}

/// Visits every size-k subset of {0,...,n-1} in lexicographic order.
/// The callback receives the subset as a sorted index vector.
template <typename Fn>
void forEachSubset(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(static_cast<const std::vector<int>&>(idx));
    int p = k - 1;
    while (p >= 0 && idx[p] == n - k + p) --p;
    if (p < 0) break;
    ++idx[p];
    for (int q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
}

/// Throws TooLarge when n choose k exceeds cap.
inline void checkEnumerationCap(int n, int k, double cap, const char* what) {
  if (choose(n, k) > cap) {
    throw MespError(ErrorCode::TooLarge, std::string(what) +
                                             ": subset count exceeds cap");
  }
}

}  // namespace mesp
