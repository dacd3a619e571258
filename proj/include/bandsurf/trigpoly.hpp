#pragma once

#include <cstdint>

#include "bandsurf/point_cloud.hpp"
#include "bandsurf/support.hpp"
#include "bandsurf/types.hpp"

namespace bandsurf {

/// psi(x) = sum_k c_k exp(j 2 pi k^T x) over a finite support.
class TrigPolynomial {
public:
    TrigPolynomial(SupportSet support, CVector coeffs);

    const SupportSet& support() const { return support_; }
    const CVector& coeffs() const { return coeffs_; }
    std::size_t dims() const { return support_.dims(); }

    Complex operator()(const Eigen::Ref<const Vector>& x) const;

    /// Conjugate-symmetric coefficients on a symmetric support, up to tol*||c||.
    bool is_real_valued(double tol = 1e-12) const;

    static TrigPolynomial constant(std::size_t dims, Complex value);

private:
    SupportSet support_;
    CVector coeffs_;
};

Complex evaluate(const TrigPolynomial& poly, const Eigen::Ref<const Vector>& x);

/// Product polynomial on the Minkowski sum of the supports (discrete convolution).
TrigPolynomial multiply(const TrigPolynomial& p1, const TrigPolynomial& p2);

/// Complex Gaussian coefficients, symmetrized to c_{-k} = conj(c_k), unit norm.
/// Deterministic in `seed`. Throws std::invalid_argument on an asymmetric support.
TrigPolynomial random_real_poly(const SupportSet& support, std::uint64_t seed);

struct ZeroSetSampler {
    std::size_t max_line_draws = 10000;
    double residual_tol = 1e-12;
};

/// True if psi changes sign on a regular grid of `per_axis`^n cells.
bool has_sign_change(const TrigPolynomial& poly, int per_axis = 16);

/// N points on the zero set of a real-valued polynomial, found by random
/// line scans followed by bisection. Every returned point satisfies
/// |psi(x)| <= residual_tol. Throws NoZeroSetFound when the draw budget is
/// exhausted before N points are collected.
PointCloud sample_zero_set(const TrigPolynomial& poly, std::size_t count, std::uint64_t seed,
                           const ZeroSetSampler& opts = {});

/// Draws random_real_poly(support, seed'), for seed' derived from `seed`,
/// until the zero set is nonempty on a coarse grid.
TrigPolynomial random_real_poly_with_zero_set(const SupportSet& support, std::uint64_t seed);

} // namespace bandsurf
