#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mesp/errors.hpp"

namespace mesp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense symmetric matrix; the constructor averages away any asymmetry.
struct SymMatrix {
  Matrix m;

  SymMatrix() = default;
  explicit SymMatrix(const Matrix& a) : m(0.5 * (a + a.transpose())) {}

  int order() const { return static_cast<int>(m.rows()); }
};

/// Positive semidefinite input C together with a factor V such that
/// V has d rows, n columns, rank d, and V^T V reproduces C.
struct CovarianceInstance {
  SymMatrix C;
  int n = 0;
  int d = 0;
  Matrix V;
  double rankTolerance = 0.0;

  Vector column(int j) const { return V.col(j); }
};

/// Eigenvalues sorted descending with matching orthonormal columns of Q.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix Q;
};

/// Moore-Penrose pseudoinverse bundle for a PSD matrix X.
/// projector is the orthogonal projector onto the nullspace of X.
struct PseudoInverseState {
  Matrix X;
  Matrix Xdag;
  Matrix projector;
  int rank = 0;
};

/// Default relative rank cutoff: order * machine epsilon.
double defaultRankTolerance(int order);

/// Eigendecomposition of a symmetric matrix, eigenvalues descending.
SpectralDecomposition eig(const SymMatrix& M);

/// Factor a PSD matrix as V^T V with V of full row rank.
/// Throws NotPSD when an eigenvalue falls below -tol * lambda_max and
/// ZeroMatrix when no eigenvalue exceeds the cutoff.
CovarianceInstance factorize(const SymMatrix& C, double tol);
CovarianceInstance factorize(const SymMatrix& C);

/// Pseudoinverse of a PSD matrix with relative eigenvalue cutoff tol.
PseudoInverseState pinv(const SymMatrix& M, double tol);
PseudoInverseState pinv(const SymMatrix& M);

/// Rank-increasing update to the pseudoinverse of X + v v^T.
/// Requires v to leave the column space of X; throws InColumnSpace otherwise.
PseudoInverseState pinvUpdate(const PseudoInverseState& state, const Vector& v);

/// Rank-decreasing update to the pseudoinverse of X - v v^T, valid when v is
/// one of the rank-one summands of X. Throws DegenerateColumn when X†v
/// vanishes.
PseudoInverseState pinvDowndate(const PseudoInverseState& state,
                                const Vector& v);

/// Fresh pseudoinverse of the rank-one sum over the selected columns of V.
PseudoInverseState columnPinv(const CovarianceInstance& inst,
                              const std::vector<int>& S);

}  // namespace mesp
