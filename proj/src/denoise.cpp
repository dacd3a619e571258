#include "bandsurf/denoise.hpp"

#include <cmath>
#include <stdexcept>

#include "bandsurf/errors.hpp"
#include "bandsurf/linalg.hpp"

namespace bandsurf {

void IrlsConfig::validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("IRLS lambda must be positive");
    if (!(eta > 1.0)) throw std::invalid_argument("IRLS eta must exceed 1");
    if (gamma0 && !(*gamma0 > 0.0)) throw std::invalid_argument("IRLS gamma0 must be positive");
    if (iterations < 1) throw std::invalid_argument("IRLS needs at least one iteration");
    if (inner < 1) throw std::invalid_argument("IRLS needs at least one inner step");
    if (!(step > 0.0)) throw std::invalid_argument("IRLS step must be positive");
}

namespace {

double surrogate_from_eigs(const Vector& eigs, double gamma) {
    double acc = 0.0;
    for (double s : eigs) acc += std::sqrt(std::max(s, 0.0) + gamma);
    return acc;
}

PointCloud wrapped(const PointCloud& cloud) {
    Matrix pts = cloud.points().unaryExpr([](double v) { return wrap_unit(v); });
    return PointCloud(std::move(pts), cloud.labels());
}

double mean_displacement(const Matrix& x, const Matrix& y) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
        double d2 = 0.0;
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
            double d = x(r, i) - y(r, i);
            d -= std::round(d);
            d2 += d * d;
        }
        acc += std::sqrt(d2);
    }
    return x.cols() ? acc / static_cast<double>(x.cols()) : 0.0;
}

} // namespace

double nuclear_norm_surrogate(const PointCloud& cloud, const Kernel& kernel, double gamma) {
    return surrogate_from_eigs(hermitian_eigenvalues(kernel_gram(cloud, kernel).data), gamma);
}

double nuclear_norm_surrogate(const PointCloud& cloud, const KernelConfig& config, double gamma) {
    return nuclear_norm_surrogate(cloud, Kernel(config, cloud.dims()), gamma);
}

double trace_kp(const Matrix& points, const Kernel& kernel, const CMatrix& p) {
    const Eigen::Index n = points.cols();
    const double m = static_cast<double>(kernel.support().size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        acc += m * p(i, i).real();
        for (Eigen::Index j = i + 1; j < n; ++j) {
            // K_ij P_ji + K_ji P_ij = 2 Re[K_ij P_ji] for Hermitian K and P.
            acc += 2.0 * (kernel(points.col(i), points.col(j)) * p(j, i)).real();
        }
    }
    return acc;
}

Matrix trace_kp_gradient(const Matrix& points, const Kernel& kernel, const CMatrix& p) {
    const Eigen::Index n = points.cols();
    Matrix grad = Matrix::Zero(points.rows(), n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const CVector g = kernel.grad_x(points.col(i), points.col(j));
            grad.col(i) += 2.0 * (p(j, i) * g).real();
        }
    }
    return grad;
}

double periodic_sq_distance(const Matrix& x, const Matrix& y) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double d = x.data()[i] - y.data()[i];
        d -= std::round(d);
        acc += d * d;
    }
    return acc;
}

DenoiseResult denoise(const PointCloud& noisy, const IrlsConfig& config) {
    config.validate();
    if (noisy.empty()) throw EmptyCloud();
    const Kernel kernel(config.kernel, noisy.dims());
    if (!kernel.support().is_symmetric()) {
        throw std::invalid_argument("denoising requires a kernel support symmetric about the origin");
    }
    const PointCloud y_cloud = wrapped(noisy);
    const Matrix& y = y_cloud.points();
    Matrix x = y;
    const auto n = static_cast<Eigen::Index>(noisy.size());

    CMatrix k = kernel_gram(y_cloud, kernel).data;
    Vector eigs = hermitian_eigenvalues(k);
    DenoiseResult result{y_cloud, 0.0, 0.0, {}};
    double gamma = config.gamma0.value_or(0.01 * eigs.maxCoeff());
    result.gamma0 = gamma;
    result.initial_objective = 2.0 * config.lambda * surrogate_from_eigs(eigs, gamma);
    CMatrix p = hermitian_inv_sqrt(k, gamma);

    auto cost = [&](const Matrix& pts) {
        return periodic_sq_distance(pts, y) + config.lambda * trace_kp(pts, kernel, p);
    };

    for (std::size_t it = 1; it <= config.iterations; ++it) {
        double c = cost(x);
        if (!std::isfinite(c)) throw NonFiniteObjective("IRLS objective is not finite");
        double step = config.step;
        std::size_t accepted = 0;
        for (std::size_t s = 0; s < config.inner; ++s) {
            Matrix diff(x.rows(), n);
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                double d = x.data()[i] - y.data()[i];
                diff.data()[i] = d - std::round(d);
            }
            const Matrix grad = 2.0 * diff + config.lambda * trace_kp_gradient(x, kernel, p);
            bool moved = false;
            for (int halvings = 0; halvings < 40; ++halvings) {
                Matrix trial = (x - step * grad).unaryExpr([](double v) { return wrap_unit(v); });
                const double ct = cost(trial);
                if (std::isfinite(ct) && ct < c) {
                    x = std::move(trial);
                    c = ct;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
            ++accepted;
            step *= 2.0;
        }

        const PointCloud xc(x);
        k = kernel_gram(xc, kernel).data;
        eigs = hermitian_eigenvalues(k);
        gamma /= config.eta;
        IterationMetrics m;
        m.iteration = it;
        m.gamma = gamma;
        m.surrogate = surrogate_from_eigs(eigs, gamma);
        m.objective = periodic_sq_distance(x, y) + 2.0 * config.lambda * m.surrogate;
        m.mean_displacement = mean_displacement(x, y);
        m.accepted_steps = accepted;
        if (!std::isfinite(m.objective)) throw NonFiniteObjective("IRLS objective is not finite");
        result.log.push_back(m);
        if (it < config.iterations) p = hermitian_inv_sqrt(k, gamma);
    }
    result.cloud = PointCloud(std::move(x), noisy.labels());
    return result;
}

} // namespace bandsurf
