#pragma once

#include <optional>
#include <vector>

#include "bandsurf/lifting.hpp"
#include "bandsurf/point_cloud.hpp"

namespace bandsurf {

/// Kernel low-rank IRLS settings. gamma0 defaults to 0.01 * lambda_max(K(Y)).
struct IrlsConfig {
    double lambda = 1.0;
    std::size_t iterations = 3;
    double eta = 1.5;
    std::optional<double> gamma0;
    std::size_t inner = 20;
    double step = 1e-3;
    KernelConfig kernel;

    void validate() const;
};

struct IterationMetrics {
    std::size_t iteration = 0;
    double objective = 0.0;         ///< ||X - Y||^2 + 2 lambda * surrogate
    double surrogate = 0.0;         ///< sum_i sqrt(sigma_i(K) + gamma)
    double mean_displacement = 0.0; ///< mean periodic distance ||x_i - y_i||
    double gamma = 0.0;
    std::size_t accepted_steps = 0;
};

struct DenoiseResult {
    PointCloud cloud;
    double gamma0 = 0.0;
    double initial_objective = 0.0;
    std::vector<IterationMetrics> log;
};

/// Smoothed nuclear norm of the lifted cloud: sum_i sqrt(sigma_i(K(X)) + gamma),
/// where sigma_i are the Gram eigenvalues (squared singular values of Phi(X)).
double nuclear_norm_surrogate(const PointCloud& cloud, const Kernel& kernel, double gamma);
double nuclear_norm_surrogate(const PointCloud& cloud, const KernelConfig& config, double gamma);

/// trace[K(X) P] for Hermitian P.
double trace_kp(const Matrix& points, const Kernel& kernel, const CMatrix& p);

/// Gradient of trace[K(X) P] with respect to the point coordinates (n x N):
/// d/dx_i = sum_j 2 Re[P_ji * sum_k (-j 2 pi k) exp(j 2 pi k^T (x_j - x_i))].
Matrix trace_kp_gradient(const Matrix& points, const Kernel& kernel, const CMatrix& p);

/// Squared periodic (minimum-image) distance between two clouds.
double periodic_sq_distance(const Matrix& x, const Matrix& y);

/// Minimizes ||X - Y||^2 + lambda ||Phi(X)||_* by alternating
/// P = [K(X) + gamma I]^{-1/2} (gamma shrinking by eta each round) with
/// backtracking gradient steps on ||X - Y||^2 + lambda trace[K(X) P].
/// Points stay wrapped to [0,1)^n.
DenoiseResult denoise(const PointCloud& noisy, const IrlsConfig& config);

} // namespace bandsurf
