#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bandsurf/point_cloud.hpp"
#include "bandsurf/support.hpp"
#include "bandsurf/types.hpp"

namespace bandsurf {

/// Kernel / lifting support description: a rectangle [lo, hi] or an
/// l_q ball of radius d. Ball configs may leave `dims` unset, in which case
/// the dimension is taken from the data they are applied to.
struct KernelConfig {
    enum class Kind { Rect, Ball };

    Kind kind = Kind::Rect;
    std::vector<int> lo, hi;
    int radius = 0;
    Norm q = Norm::Inf;
    std::optional<std::size_t> dims;

    static KernelConfig rect(std::vector<int> lo, std::vector<int> hi);
    /// Centered rectangle with odd side lengths, e.g. {3, 3}.
    static KernelConfig centered(const std::vector<int>& sizes);
    static KernelConfig ball(int d, Norm q, std::optional<std::size_t> dims = std::nullopt);

    /// Dimension this config fixes, if any.
    std::optional<std::size_t> fixed_dims() const;
    SupportSet support(std::size_t n) const;
};

/// Shift-invariant kernel kappa(x, y) = Phi(x)^H Phi(y) = sum_k exp(j 2 pi k^T (y - x)).
/// Rectangular supports use the separable product of 1-D Dirichlet sums.
class Kernel {
public:
    Kernel(const KernelConfig& config, std::size_t dims);
    explicit Kernel(SupportSet support);

    const SupportSet& support() const { return support_; }
    std::size_t dims() const { return support_.dims(); }
    bool separable() const { return !lo_.empty(); }

    Complex operator()(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const;

    /// d kappa(x, y) / d x = sum_k (-j 2 pi k) exp(j 2 pi k^T (y - x)).
    CVector grad_x(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const;

private:
    SupportSet support_;
    std::vector<int> lo_, hi_;
};

struct FeatureMatrix {
    SupportSet support;
    CMatrix data; ///< |Gamma| x N, column i = Phi(x_i)
};

struct KernelGram {
    CMatrix data;              ///< N x N Hermitian
    std::size_t support_size;  ///< |Gamma|, also the diagonal value
};

/// exp(j 2 pi k^T x) for k in canonical order.
CVector lift(const Eigen::Ref<const Vector>& x, const SupportSet& gamma);

FeatureMatrix feature_matrix(const PointCloud& cloud, const SupportSet& gamma);

Complex kernel(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y, const SupportSet& gamma);

struct GramOptions {
    /// Form Phi^H Phi explicitly when |Gamma| is at most this size; 0 always
    /// uses the kernel function.
    std::size_t materialize_up_to = 0;
};

KernelGram kernel_gram(const PointCloud& cloud, const Kernel& kernel, const GramOptions& opts = {});
KernelGram kernel_gram(const PointCloud& cloud, const KernelConfig& config, const GramOptions& opts = {});

/// Cross-kernel vector (kappa(a_i, x))_i.
CVector kernel_column(const PointCloud& anchors, const Kernel& kernel, const Eigen::Ref<const Vector>& x);

/// Dirichlet kernel over the l_q ball: sum_{||k||_q <= d} exp(j 2 pi k^T x). Real by symmetry.
double dirichlet_q(const Eigen::Ref<const Vector>& x, int d, Norm q);

/// Tabulated radial approximation g(r^2) of the circular (q = 2) Dirichlet
/// kernel, obtained by averaging over directions at each radius.
class RadialProfile {
public:
    struct Options {
        std::size_t directions = 64;
        std::size_t resolution = 512;  ///< number of table intervals over [0, n/4]
        std::uint64_t seed = 0;        ///< direction draws for n >= 3
    };

    RadialProfile(std::size_t dims, int d, Options opts);
    RadialProfile(std::size_t dims, int d) : RadialProfile(dims, d, Options{}) {}

    std::size_t dims() const { return dims_; }
    double max_r2() const { return max_r2_; }

    /// g(r^2); piecewise-linear in r^2 inside the table, direct angular
    /// average outside it.
    double operator()(double r2) const;

    /// g applied to the minimum-image squared distance between x and y.
    double approx_kernel(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const;

    /// Activation form: for unit-norm x, y, ||x - y||^2 = 2 - 2<x, y>, so
    /// activation(<x, y>) = g(2 - 2 <x, y>).
    double activation(double inner) const { return (*this)(2.0 - 2.0 * inner); }

private:
    double angular_average(double r) const;

    std::size_t dims_;
    int d_;
    std::vector<Freq> ball_;
    Matrix directions_;
    double max_r2_;
    double step_;
    std::vector<double> table_;
};

/// Max and mean of |kappa(x, y) - g(||x - y||^2)| / |Gamma| over random pairs.
struct RadialDeviation {
    double max_rel = 0.0;
    double mean_rel = 0.0;
};
RadialDeviation radial_deviation(const RadialProfile& g, int d, std::size_t pairs, std::uint64_t seed);

} // namespace bandsurf
