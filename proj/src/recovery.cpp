#include "bandsurf/recovery.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "bandsurf/errors.hpp"
#include "bandsurf/lifting.hpp"
#include "bandsurf/linalg.hpp"

namespace bandsurf {

NullSpaceBasis nullspace(const PointCloud& cloud, const SupportSet& gamma, double tol) {
    if (cloud.empty()) throw EmptyCloud();
    const FeatureMatrix phi = feature_matrix(cloud, gamma);
    const Eigen::Index m = phi.data.rows();
    const Eigen::Index n = phi.data.cols();

    // c^T Phi = 0  <=>  Phi^T c = 0: the right null space of Phi^T.
    CMatrix system = phi.data.transpose();
    if (n > m) {
        Eigen::HouseholderQR<CMatrix> qr(system);
        system = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    }
    Eigen::BDCSVD<CMatrix> svd(system, Eigen::ComputeFullV);
    Vector sigma = svd.singularValues();
    const std::size_t rank = numeric_rank(sigma, tol);
    CMatrix null = svd.matrixV().rightCols(m - static_cast<Eigen::Index>(rank));
    return NullSpaceBasis{gamma, std::move(null), std::move(sigma), tol, rank};
}

TrigPolynomial recover_minimal(const PointCloud& cloud, const SupportSet& lambda, double tol) {
    const NullSpaceBasis basis = nullspace(cloud, lambda, tol);
    if (basis.dim() == 0) throw NoAnnihilator();
    if (basis.dim() > 1) throw AmbiguousRecovery(basis.dim());
    return TrigPolynomial(lambda, canonical_phase(basis.vectors.col(0)));
}

CVector canonical_phase(CVector c) {
    const double norm = c.norm();
    if (!(norm > 0.0)) throw std::invalid_argument("cannot normalize a zero coefficient vector");
    c /= norm;
    // conjugate pairs tie in modulus, so take the first index near the max
    const double top = c.cwiseAbs().maxCoeff();
    Eigen::Index arg = 0;
    while (std::abs(c[arg]) < top * (1.0 - 1e-12)) ++arg;
    const Complex pivot = c[arg];
    c *= std::conj(pivot) / std::abs(pivot);
    c[arg] = Complex(std::abs(c[arg]), 0.0);
    return c;
}

SosSurface::SosSurface(NullSpaceBasis basis) : basis_(std::move(basis)) {}

CVector SosSurface::components(const Eigen::Ref<const Vector>& x) const {
    return basis_.vectors.transpose() * lift(x, basis_.support);
}

double SosSurface::operator()(const Eigen::Ref<const Vector>& x) const { return components(x).squaredNorm(); }

SosSurface recover_sos(const PointCloud& cloud, const SupportSet& gamma, double tol) {
    NullSpaceBasis basis = nullspace(cloud, gamma, tol);
    if (basis.dim() == 0) throw NoAnnihilator();
    return SosSurface(std::move(basis));
}

TrigPolynomial sos_as_polynomial(const SosSurface& sos) {
    const SupportSet& gamma = sos.basis().support;
    SupportSet out = minkowski_sum(gamma, negate(gamma));
    // sum_i |n_i^T Phi|^2 = sum_{k,l} (N N^H)_{kl} exp(j 2 pi (k - l)^T x)
    const CMatrix& nv = sos.basis().vectors;
    const CMatrix outer = nv * nv.adjoint();
    CVector c = CVector::Zero(static_cast<Eigen::Index>(out.size()));
    Freq diff(gamma.dims());
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        for (std::size_t l = 0; l < gamma.size(); ++l) {
            for (std::size_t d = 0; d < diff.size(); ++d) diff[d] = gamma[k][d] - gamma[l][d];
            c[out.index_of(diff)] += outer(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
        }
    }
    return TrigPolynomial(std::move(out), std::move(c));
}

CMatrix shifted_coefficients(const TrigPolynomial& poly, const SupportSet& gamma) {
    const auto shifts = shift_complement(gamma, poly.support());
    const SupportSet& lambda = poly.support();
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(gamma.size()), static_cast<Eigen::Index>(shifts.size()));
    Freq moved(gamma.dims());
    for (std::size_t s = 0; s < shifts.size(); ++s) {
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            for (std::size_t d = 0; d < moved.size(); ++d) moved[d] = lambda[i][d] + shifts[s][d];
            out(gamma.index_of(moved), static_cast<Eigen::Index>(s)) = poly.coeffs()[static_cast<Eigen::Index>(i)];
        }
    }
    return out;
}

double projection_residual(const NullSpaceBasis& basis, const CVector& v) {
    const CVector r = v - basis.vectors * (basis.vectors.adjoint() * v);
    return r.norm() / v.norm();
}

TrialOutcome evaluate_recovery(const PointCloud& samples, const PointCloud& heldout, const SupportSet& gamma,
                               std::size_t expected_null_dim, double tol, double residual_tol) {
    TrialOutcome out;
    if (samples.empty()) {
        out.null_dim = gamma.size();
        out.heldout_residual = std::numeric_limits<double>::infinity();
        return out;
    }
    SosSurface sos(nullspace(samples, gamma, tol));
    out.null_dim = sos.basis().dim();
    if (out.null_dim == 0) {
        out.heldout_residual = std::numeric_limits<double>::infinity();
        return out;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < heldout.size(); ++i) {
        worst = std::max(worst, std::sqrt(sos(heldout.point(i)) / static_cast<double>(out.null_dim)));
    }
    out.heldout_residual = worst;
    out.success = out.null_dim == expected_null_dim && worst <= residual_tol;
    return out;
}

} // namespace bandsurf
