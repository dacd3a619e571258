#include "bandsurf/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "bandsurf/errors.hpp"

namespace bandsurf {

std::size_t numeric_rank(const Vector& sigma, double rel_tol) {
    if (sigma.size() == 0) return 0;
    const double cut = rel_tol * sigma.maxCoeff();
    std::size_t r = 0;
    for (double s : sigma) r += s > cut ? 1 : 0;
    return r;
}

CMatrix hermitian_pinv(const CMatrix& h, double rel_cutoff, double ridge) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
    if (eig.info() != Eigen::Success) {
        throw DegenerateSystem("Hermitian eigendecomposition failed");
    }
    const Vector& lam = eig.eigenvalues();
    const double lmax = lam.size() ? std::max(lam.maxCoeff(), 0.0) : 0.0;
    const double cut = rel_cutoff * lmax;
    Vector inv = Vector::Zero(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam[i] > cut) inv[i] = 1.0 / (lam[i] + ridge);
    }
    const CMatrix& v = eig.eigenvectors();
    return v * inv.asDiagonal() * v.adjoint();
}

CMatrix hermitian_inv_sqrt(const CMatrix& h, double shift) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
    if (eig.info() != Eigen::Success) {
        throw DegenerateSystem("Hermitian eigendecomposition failed");
    }
    Vector d = eig.eigenvalues().array() + shift;
    if (d.minCoeff() <= 0.0) {
        throw DegenerateSystem("matrix is not positive definite after shift");
    }
    d = d.array().rsqrt();
    const CMatrix& v = eig.eigenvectors();
    CMatrix out = v * d.asDiagonal() * v.adjoint();
    // Symmetrize away rounding so the result is exactly Hermitian.
    return 0.5 * (out + out.adjoint());
}

Vector hermitian_eigenvalues(const CMatrix& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw DegenerateSystem("Hermitian eigendecomposition failed");
    }
    return eig.eigenvalues();
}

} // namespace bandsurf
