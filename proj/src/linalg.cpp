#include "mesp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mesp {

namespace {

constexpr double kSpanTol = 1e-9;

}  // namespace

double defaultRankTolerance(int order) {
  return order * std::numeric_limits<double>::epsilon();
}

SpectralDecomposition eig(const SymMatrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(M.m);
  if (solver.info() != Eigen::Success) {
    throw MespError(ErrorCode::NotPSD, "eigendecomposition failed");
  }
  const int n = M.order();
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.Q.resize(n, n);
  for (int i = 0; i < n; ++i) out.Q.col(i) = solver.eigenvectors().col(n - 1 - i);
  return out;
}

CovarianceInstance factorize(const SymMatrix& C, double tol) {
  const int n = C.order();
  SpectralDecomposition sd = eig(C);
  const double lmax = sd.eigenvalues(0);
  const double lmin = sd.eigenvalues(n - 1);
  const double scale = std::max(std::abs(lmax), std::abs(lmin));
  if (lmin < -tol * scale) {
    throw MespError(ErrorCode::NotPSD, "negative eigenvalue in input matrix");
  }
  const double cutoff = tol * std::max(lmax, 0.0);
  int d = 0;
  while (d < n && sd.eigenvalues(d) > cutoff) ++d;
  if (d == 0) {
    throw MespError(ErrorCode::ZeroMatrix, "input matrix is numerically zero");
  }
  CovarianceInstance inst;
  inst.C = C;
  inst.n = n;
  inst.d = d;
  inst.rankTolerance = tol;
  inst.V.resize(d, n);
  for (int i = 0; i < d; ++i) {
    inst.V.row(i) = std::sqrt(sd.eigenvalues(i)) * sd.Q.col(i).transpose();
  }
  return inst;
}

CovarianceInstance factorize(const SymMatrix& C) {
  return factorize(C, defaultRankTolerance(C.order()));
}

PseudoInverseState pinv(const SymMatrix& M, double tol) {
  const int n = M.order();
  SpectralDecomposition sd = eig(M);
  const double cutoff = tol * std::max(sd.eigenvalues(0), 0.0);
  PseudoInverseState st;
  st.X = M.m;
  st.Xdag = Matrix::Zero(n, n);
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    if (sd.eigenvalues(i) > cutoff) {
      st.Xdag.noalias() +=
          (1.0 / sd.eigenvalues(i)) * sd.Q.col(i) * sd.Q.col(i).transpose();
      ++rank;
    }
  }
  st.rank = rank;
  st.projector = Matrix::Identity(n, n) - st.Xdag * st.X;
  st.projector = 0.5 * (st.projector + st.projector.transpose()).eval();
  return st;
}

PseudoInverseState pinv(const SymMatrix& M) {
  return pinv(M, defaultRankTolerance(M.order()));
}

PseudoInverseState pinvUpdate(const PseudoInverseState& state,
                              const Vector& v) {
  const Vector pv = state.projector * v;
  const double pvNorm2 = pv.squaredNorm();
  if (pvNorm2 <= kSpanTol * kSpanTol * std::max(1.0, v.squaredNorm())) {
    throw MespError(ErrorCode::InColumnSpace,
                    "update column already lies in the column space");
  }
  const Vector xv = state.Xdag * v;
  const double beta = 1.0 + v.dot(xv);
  PseudoInverseState out;
  out.X = state.X + v * v.transpose();
  out.X = 0.5 * (out.X + out.X.transpose()).eval();
  out.Xdag = state.Xdag - (xv * pv.transpose() + pv * xv.transpose()) / pvNorm2 +
             (beta / (pvNorm2 * pvNorm2)) * pv * pv.transpose();
  out.Xdag = 0.5 * (out.Xdag + out.Xdag.transpose()).eval();
  out.projector = state.projector - pv * pv.transpose() / pvNorm2;
  out.projector = 0.5 * (out.projector + out.projector.transpose()).eval();
  out.rank = state.rank + 1;
  return out;
}

PseudoInverseState pinvDowndate(const PseudoInverseState& state,
                                const Vector& v) {
  const Vector u = state.Xdag * v;
  const double u2 = u.squaredNorm();
  if (u2 <= kSpanTol * kSpanTol * std::max(1.0, v.squaredNorm())) {
    throw MespError(ErrorCode::DegenerateColumn,
                    "pseudoinverse image of the column vanishes");
  }
  const Vector w = state.Xdag * u;
  const double uw = u.dot(w);
  PseudoInverseState out;
  out.X = state.X - v * v.transpose();
  out.X = 0.5 * (out.X + out.X.transpose()).eval();
  out.Xdag = state.Xdag - (u * w.transpose() + w * u.transpose()) / u2 +
             (uw / (u2 * u2)) * u * u.transpose();
  out.Xdag = 0.5 * (out.Xdag + out.Xdag.transpose()).eval();
  out.projector = state.projector + u * u.transpose() / u2;
  out.projector = 0.5 * (out.projector + out.projector.transpose()).eval();
  out.rank = state.rank - 1;
  return out;
}

PseudoInverseState columnPinv(const CovarianceInstance& inst,
                              const std::vector<int>& S) {
  Matrix X = Matrix::Zero(inst.d, inst.d);
  for (int j : S) X.noalias() += inst.V.col(j) * inst.V.col(j).transpose();
  return pinv(SymMatrix(X), defaultRankTolerance(inst.d));
}

}  // namespace mesp
