#pragma once

#include "bandsurf/types.hpp"

namespace bandsurf {

/// Number of singular values above rel_tol * max(sigma).
std::size_t numeric_rank(const Vector& sigma, double rel_tol);

/// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix via its
/// eigendecomposition. Eigenvalues at or below rel_cutoff * lambda_max are
/// dropped; the rest are inverted as 1/(lambda + ridge).
CMatrix hermitian_pinv(const CMatrix& h, double rel_cutoff, double ridge = 0.0);

/// (H + shift I)^{-1/2} for Hermitian H with H + shift I positive definite.
CMatrix hermitian_inv_sqrt(const CMatrix& h, double shift);

/// Ascending eigenvalues of a Hermitian matrix.
Vector hermitian_eigenvalues(const CMatrix& h);

} // namespace bandsurf
