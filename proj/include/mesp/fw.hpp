#pragma once

#include "mesp/objectives.hpp"

namespace mesp {

/// Point in the scaled box {0 <= x <= 1, sum x = s} with its concave
/// relaxation value and the indices carrying mass above 1e-8.
struct FractionalSolution {
  Vector x;
  int s = 0;
  double value = 0.0;
  std::vector<int> support;
};

enum class CertificateKind { LD, ALD };

/// Feasible dual point. For kind LD, boundValue is an upper bound on the
/// optimal selection objective; for kind ALD it is a lower bound on the
/// optimal inverse trace.
struct DualCertificate {
  Matrix Lambda;
  double nu = 0.0;
  Vector mu;
  double boundValue = 0.0;
  CertificateKind kind = CertificateKind::LD;
};

/// One solver iteration: step size, objective, linearized gap, and the
/// running minimum of the gap up to this iteration.
struct FWIterRecord {
  int t = 0;
  double step = 0.0;
  double primal = 0.0;
  double gap = 0.0;
  double runningMinGap = 0.0;
  int supportSize = 0;
};

struct FWTrace {
  std::vector<FWIterRecord> iters;
  double alpha = 0.0;
  double terminalGap = 0.0;
};

struct FWResult {
  FractionalSolution solution;
  DualCertificate certificate;
  FWTrace trace;
};

/// Raised when the iteration cap is reached before the gap target; carries
/// the best solution and certificate found so far.
class IterationLimitError : public MespError {
 public:
  explicit IterationLimitError(FWResult best)
      : MespError(ErrorCode::IterationLimit,
                  "gap target not reached within the iteration cap"),
        best_(std::move(best)) {}

  const FWResult& best() const { return best_; }

 private:
  FWResult best_;
};

/// Curvature data for the relaxation: delta is the smallest eigenvalue over
/// all size-s principal submatrices, L the resulting smoothness constant.
struct Smoothness {
  double delta = 0.0;
  double L = 0.0;
};

Smoothness smoothnessConstant(const CovarianceInstance& inst, int s,
                              double cap = 2e5);

/// Conditional-gradient solver for the concave relaxation. alpha <= 0 and
/// maxIter <= 0 select defaults. Returns the best iterate, the best dual
/// certificate across iterations, and the full trace.
FWResult solvePC(const CovarianceInstance& inst, int s, double alpha = 0.0,
                 long maxIter = 0, const Vector* x0 = nullptr);

/// boundValue - primal for an LD certificate; throws KindMismatch otherwise.
double dualGap(const DualCertificate& cert, double primal);

}  // namespace mesp
