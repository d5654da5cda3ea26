#pragma once

#include <string>

#include "mesp/linalg.hpp"

namespace mesp {

/// Reads a square matrix from disk. format is "auto", "dense", or "mm";
/// "auto" treats .mtx and .mm files as MatrixMarket coordinate data and
/// everything else as dense rows (whitespace or comma separated).
Matrix readMatrixFile(const std::string& path, const std::string& format = "auto");

/// Validates near-symmetry (relative tolerance 1e-8) and symmetrizes.
/// Throws ParseError when the asymmetry is larger.
SymMatrix toSymmetricChecked(const Matrix& A);

}  // namespace mesp
