#include "mesp/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mesp/sampling.hpp"

namespace mesp {

namespace {

constexpr int kRefreshInterval = 64;

double starveTolerance(const CovarianceInstance& inst) {
  return 1e-12 * (1.0 + inst.V.colwise().squaredNorm().maxCoeff());
}

bool contains(const std::vector<int>& S, int i) {
  return std::binary_search(S.begin(), S.end(), i);
}

}  // namespace

SearchState makeSearchState(const CovarianceInstance& inst,
                            const std::vector<int>& S) {
  SearchState st;
  st.S = S;
  std::sort(st.S.begin(), st.S.end());
  st.pinv = columnPinv(inst, st.S);
  if (st.pinv.rank != static_cast<int>(st.S.size())) {
    throw MespError(ErrorCode::DependentColumns,
                    "selected columns are linearly dependent");
  }
  st.logDet = gramLogDet(inst, st.S);
  return st;
}

SearchState greedyInit(const CovarianceInstance& inst, int s) {
  if (s < 1 || s > inst.d) {
    throw MespError(ErrorCode::BadCardinality, "size must lie in [1, rank]");
  }
  const double tol = starveTolerance(inst);
  SearchState st;
  st.pinv.X = Matrix::Zero(inst.d, inst.d);
  st.pinv.Xdag = Matrix::Zero(inst.d, inst.d);
  st.pinv.projector = Matrix::Identity(inst.d, inst.d);
  st.pinv.rank = 0;
  for (int round = 0; round < s; ++round) {
    Matrix PV = st.pinv.projector * inst.V;
    Vector scores = (inst.V.cwiseProduct(PV)).colwise().sum().transpose();
    int bestJ = -1;
    double bestScore = tol;
    for (int j = 0; j < inst.n; ++j) {
      if (contains(st.S, j)) continue;
      if (scores(j) > bestScore) {
        bestScore = scores(j);
        bestJ = j;
      }
    }
    if (bestJ < 0) {
      throw MespError(ErrorCode::RankStarved,
                      "no column increases the rank");
    }
    st.logDet += std::log(bestScore);
    st.pinv = pinvUpdate(st.pinv, inst.V.col(bestJ));
    st.S.insert(std::upper_bound(st.S.begin(), st.S.end(), bestJ), bestJ);
  }
  return st;
}

std::pair<SearchState, LocalSearchTrace> localSearch(
    const CovarianceInstance& inst, SearchState state, double theta) {
  if (theta < 0.0) {
    throw MespError(ErrorCode::BadCardinality,
                    "swap threshold must be nonnegative");
  }
  LocalSearchTrace trace;
  bool improved = true;
  while (improved) {
    improved = false;
    ++trace.passes;
    const std::vector<int> snapshot = state.S;
    for (int i : snapshot) {
      const Vector vi = inst.V.col(i);
      PseudoInverseState down = pinvDowndate(state.pinv, vi);
      Matrix PV = down.projector * inst.V;
      Vector scores = (inst.V.cwiseProduct(PV)).colwise().sum().transpose();
      const double scoreOut = scores(i);
      int bestJ = -1;
      double bestScore = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < inst.n; ++j) {
        if (contains(state.S, j)) continue;
        if (scores(j) > bestScore) {
          bestScore = scores(j);
          bestJ = j;
        }
      }
      if (bestJ < 0 || bestScore <= (1.0 + theta) * scoreOut) continue;

      state.pinv = pinvUpdate(down, inst.V.col(bestJ));
      state.logDet += std::log(bestScore) - std::log(scoreOut);
      state.S.erase(std::lower_bound(state.S.begin(), state.S.end(), i));
      state.S.insert(
          std::upper_bound(state.S.begin(), state.S.end(), bestJ), bestJ);
      ++state.swapCount;
      if (state.swapCount % kRefreshInterval == 0) {
        state.pinv = columnPinv(inst, state.S);
        state.logDet = gramLogDet(inst, state.S);
      }
      trace.swaps.push_back({i, bestJ, state.logDet});
      improved = true;
    }
  }
  return {std::move(state), std::move(trace)};
}

DualCertificate dualCertificateFromLocal(const CovarianceInstance& inst,
                                         const SearchState& state,
                                         double theta) {
  const int n = inst.n;
  const int s = static_cast<int>(state.S.size());
  PseudoInverseState ps = columnPinv(inst, state.S);
  if (ps.rank != s) {
    throw MespError(ErrorCode::DependentColumns,
                    "selected columns are linearly dependent");
  }

  const Matrix XdagV = ps.Xdag * inst.V;
  const Matrix PV = ps.projector * inst.V;
  const Vector p = (inst.V.cwiseProduct(PV)).colwise().sum().transpose();

  for (int i : state.S) {
    const double a2 = XdagV.col(i).squaredNorm();
    for (int j = 0; j < n; ++j) {
      if (contains(state.S, j)) continue;
      const double cross = inst.V.col(j).dot(XdagV.col(i));
      if (a2 * p(j) + cross * cross > 1.0 + theta + 1e-7) {
        throw MespError(ErrorCode::NotLocallyOptimal,
                        "a swap still improves the determinant");
      }
    }
  }

  const double trDag = ps.Xdag.trace();

  auto buildCertificate = [&](const Matrix& A) {
    Vector g = (inst.V.cwiseProduct((A * inst.V).eval())).colwise().sum().transpose();
    std::vector<double> sorted(g.data(), g.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double h = 0.0;
    for (int i = 0; i < s; ++i) h += sorted[static_cast<size_t>(i)];
    const double tStar = h / s;
    DualCertificate cert;
    cert.Lambda = A / tStar;
    cert.nu = sorted[static_cast<size_t>(s) - 1] / tStar;
    cert.mu = ((g / tStar).array() - cert.nu).cwiseMax(0.0).matrix();
    const Vector lambda = eig(SymMatrix(cert.Lambda)).eigenvalues;
    cert.boundValue = -detBottom(lambda, s) + s * cert.nu + cert.mu.sum() - s;
    cert.kind = CertificateKind::LD;
    return cert;
  };

  DualCertificate best =
      buildCertificate(trDag * ps.projector + ps.Xdag);

  bool orthogonal = true;
  for (int i : state.S) {
    const double ni = inst.V.col(i).norm();
    for (int j = 0; j < n && orthogonal; ++j) {
      if (contains(state.S, j)) continue;
      if (std::abs(inst.V.col(i).dot(inst.V.col(j))) >
          1e-10 * std::max(1.0, ni * inst.V.col(j).norm())) {
        orthogonal = false;
      }
    }
    if (!orthogonal) break;
  }
  if (orthogonal) {
    const Vector lambdaX = eig(SymMatrix(ps.X)).eigenvalues;
    const double lambdaS = lambdaX(s - 1);
    if (lambdaS > 0.0) {
      DualCertificate alt =
          buildCertificate((1.0 / lambdaS) * ps.projector + ps.Xdag);
      if (alt.boundValue < best.boundValue) best = alt;
    }
  }
  return best;
}

}  // namespace mesp
