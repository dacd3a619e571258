#include "bandsurf/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bandsurf/errors.hpp"
#include "bandsurf/rng.hpp"

namespace bandsurf {

namespace {

Complex phase(double t) {
    t -= std::round(t);
    return std::polar(1.0, kTwoPi * t);
}

void check_dims(std::size_t expected, Eigen::Index got) {
    if (static_cast<std::size_t>(got) != expected) {
        throw DimensionMismatch(expected, static_cast<std::size_t>(got));
    }
}

} // namespace

KernelConfig KernelConfig::rect(std::vector<int> lo, std::vector<int> hi) {
    if (lo.size() != hi.size()) throw DimensionMismatch(lo.size(), hi.size());
    KernelConfig c;
    c.kind = Kind::Rect;
    c.lo = std::move(lo);
    c.hi = std::move(hi);
    c.dims = c.lo.size();
    return c;
}

KernelConfig KernelConfig::centered(const std::vector<int>& sizes) {
    std::vector<int> lo, hi;
    for (int s : sizes) {
        if (s < 1 || s % 2 == 0) throw std::invalid_argument("centered sizes must be positive odd integers");
        lo.push_back(-(s / 2));
        hi.push_back(s / 2);
    }
    return rect(std::move(lo), std::move(hi));
}

KernelConfig KernelConfig::ball(int d, Norm q, std::optional<std::size_t> dims) {
    if (d < 0) throw std::invalid_argument("ball radius must be nonnegative");
    KernelConfig c;
    c.kind = Kind::Ball;
    c.radius = d;
    c.q = q;
    c.dims = dims;
    return c;
}

std::optional<std::size_t> KernelConfig::fixed_dims() const {
    if (kind == Kind::Rect) return lo.size();
    return dims;
}

SupportSet KernelConfig::support(std::size_t n) const {
    if (auto fixed = fixed_dims(); fixed && *fixed != n) {
        throw DimensionMismatch(*fixed, n);
    }
    if (kind == Kind::Rect) return rect_support(lo, hi);
    return lq_ball_support(n, radius, q);
}

Kernel::Kernel(const KernelConfig& config, std::size_t dims) : Kernel(config.support(dims)) {}

Kernel::Kernel(SupportSet support) : support_(std::move(support)) {
    const std::size_t n = support_.dims();
    std::vector<int> lo(n, 0), hi(n, 0);
    for (std::size_t d = 0; d < n; ++d) {
        lo[d] = hi[d] = support_[0][d];
    }
    for (const auto& k : support_) {
        for (std::size_t d = 0; d < n; ++d) {
            lo[d] = std::min(lo[d], k[d]);
            hi[d] = std::max(hi[d], k[d]);
        }
    }
    std::size_t box = 1;
    for (std::size_t d = 0; d < n; ++d) box *= static_cast<std::size_t>(hi[d] - lo[d] + 1);
    if (box == support_.size()) {
        lo_ = std::move(lo);
        hi_ = std::move(hi);
    }
}

Complex Kernel::operator()(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const {
    check_dims(dims(), x.size());
    check_dims(dims(), y.size());
    if (separable()) {
        Complex prod = 1.0;
        for (std::size_t d = 0; d < dims(); ++d) {
            const double delta = y[static_cast<Eigen::Index>(d)] - x[static_cast<Eigen::Index>(d)];
            Complex s = 0.0;
            for (int k = lo_[d]; k <= hi_[d]; ++k) s += phase(k * delta);
            prod *= s;
        }
        return prod;
    }
    const Vector delta = y - x;
    Complex acc = 0.0;
    for (const auto& k : support_) {
        double t = 0.0;
        for (std::size_t d = 0; d < k.size(); ++d) t += k[d] * delta[static_cast<Eigen::Index>(d)];
        acc += phase(t);
    }
    return acc;
}

CVector Kernel::grad_x(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const {
    check_dims(dims(), x.size());
    check_dims(dims(), y.size());
    const auto n = static_cast<Eigen::Index>(dims());
    const Complex minus_j2pi(0.0, -kTwoPi);
    CVector g = CVector::Zero(n);
    if (separable()) {
        CVector value(n), deriv(n);
        for (Eigen::Index d = 0; d < n; ++d) {
            const double delta = y[d] - x[d];
            Complex s = 0.0, ds = 0.0;
            for (int k = lo_[static_cast<std::size_t>(d)]; k <= hi_[static_cast<std::size_t>(d)]; ++k) {
                const Complex e = phase(k * delta);
                s += e;
                ds += minus_j2pi * static_cast<double>(k) * e;
            }
            value[d] = s;
            deriv[d] = ds;
        }
        for (Eigen::Index d = 0; d < n; ++d) {
            Complex prod = deriv[d];
            for (Eigen::Index e = 0; e < n; ++e) {
                if (e != d) prod *= value[e];
            }
            g[d] = prod;
        }
        return g;
    }
    const Vector delta = y - x;
    for (const auto& k : support_) {
        double t = 0.0;
        for (Eigen::Index d = 0; d < n; ++d) t += k[static_cast<std::size_t>(d)] * delta[d];
        const Complex e = phase(t);
        for (Eigen::Index d = 0; d < n; ++d) g[d] += minus_j2pi * static_cast<double>(k[static_cast<std::size_t>(d)]) * e;
    }
    return g;
}

CVector lift(const Eigen::Ref<const Vector>& x, const SupportSet& gamma) {
    check_dims(gamma.dims(), x.size());
    CVector phi(static_cast<Eigen::Index>(gamma.size()));
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        const auto& k = gamma[i];
        double t = 0.0;
        for (std::size_t d = 0; d < k.size(); ++d) t += k[d] * x[static_cast<Eigen::Index>(d)];
        phi[static_cast<Eigen::Index>(i)] = phase(t);
    }
    return phi;
}

FeatureMatrix feature_matrix(const PointCloud& cloud, const SupportSet& gamma) {
    if (cloud.empty()) throw EmptyCloud();
    check_dims(gamma.dims(), static_cast<Eigen::Index>(cloud.dims()));
    CMatrix data(static_cast<Eigen::Index>(gamma.size()), static_cast<Eigen::Index>(cloud.size()));
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        data.col(static_cast<Eigen::Index>(i)) = lift(cloud.point(i), gamma);
    }
    return FeatureMatrix{gamma, std::move(data)};
}

Complex kernel(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y, const SupportSet& gamma) {
    return Kernel(gamma)(x, y);
}

KernelGram kernel_gram(const PointCloud& cloud, const Kernel& kernel, const GramOptions& opts) {
    if (cloud.empty()) throw EmptyCloud();
    check_dims(kernel.dims(), static_cast<Eigen::Index>(cloud.dims()));
    const auto n = static_cast<Eigen::Index>(cloud.size());
    const std::size_t m = kernel.support().size();
    CMatrix k(n, n);
    if (m <= opts.materialize_up_to) {
        const CMatrix phi = feature_matrix(cloud, kernel.support()).data;
        k.noalias() = phi.adjoint() * phi;
        for (Eigen::Index i = 0; i < n; ++i) {
            k(i, i) = static_cast<double>(m);
            for (Eigen::Index j = i + 1; j < n; ++j) k(j, i) = std::conj(k(i, j));
        }
        return KernelGram{std::move(k), m};
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = static_cast<double>(m);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const Complex v = kernel(cloud.point(static_cast<std::size_t>(i)), cloud.point(static_cast<std::size_t>(j)));
            k(i, j) = v;
            k(j, i) = std::conj(v);
        }
    }
    return KernelGram{std::move(k), m};
}

KernelGram kernel_gram(const PointCloud& cloud, const KernelConfig& config, const GramOptions& opts) {
    return kernel_gram(cloud, Kernel(config, cloud.dims()), opts);
}

CVector kernel_column(const PointCloud& anchors, const Kernel& kernel, const Eigen::Ref<const Vector>& x) {
    CVector col(static_cast<Eigen::Index>(anchors.size()));
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        col[static_cast<Eigen::Index>(i)] = kernel(anchors.point(i), x);
    }
    return col;
}

namespace {

double cos_sum(const std::vector<Freq>& ball, const Eigen::Ref<const Vector>& x) {
    double acc = 0.0;
    for (const auto& k : ball) {
        double t = 0.0;
        for (std::size_t i = 0; i < k.size(); ++i) t += k[i] * x[static_cast<Eigen::Index>(i)];
        t -= std::round(t);
        acc += std::cos(kTwoPi * t);
    }
    return acc;
}

} // namespace

double dirichlet_q(const Eigen::Ref<const Vector>& x, int d, Norm q) {
    return cos_sum(lq_ball_support(static_cast<std::size_t>(x.size()), d, q).freqs(), x);
}

RadialProfile::RadialProfile(std::size_t dims, int d, Options opts)
    : dims_(dims), d_(d), max_r2_(0.25 * static_cast<double>(dims)) {
    if (dims == 0) throw std::invalid_argument("radial profile dimension must be positive");
    if (d < 0) throw std::invalid_argument("ball radius must be nonnegative");
    ball_ = lq_ball_support(dims, d, Norm::L2).freqs();
    if (opts.directions == 0 || opts.resolution == 0) {
        throw std::invalid_argument("radial profile needs at least one direction and one interval");
    }
    const auto n = static_cast<Eigen::Index>(dims);
    const auto m = static_cast<Eigen::Index>(opts.directions);
    directions_.resize(n, m);
    if (dims == 1) {
        for (Eigen::Index j = 0; j < m; ++j) directions_(0, j) = j % 2 == 0 ? 1.0 : -1.0;
    } else if (dims == 2) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
            directions_(0, j) = std::cos(theta);
            directions_(1, j) = std::sin(theta);
        }
    } else {
        Rng rng(opts.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Eigen::Index j = 0; j < m; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) directions_(i, j) = normal(rng);
            directions_.col(j).normalize();
        }
    }
    step_ = max_r2_ / static_cast<double>(opts.resolution);
    table_.resize(opts.resolution + 1);
    for (std::size_t i = 0; i <= opts.resolution; ++i) {
        table_[i] = angular_average(std::sqrt(step_ * static_cast<double>(i)));
    }
}

double RadialProfile::angular_average(double r) const {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < directions_.cols(); ++j) {
        acc += cos_sum(ball_, r * directions_.col(j));
    }
    return acc / static_cast<double>(directions_.cols());
}

double RadialProfile::operator()(double r2) const {
    if (r2 < 0.0) throw std::invalid_argument("squared radius must be nonnegative");
    if (r2 > max_r2_) return angular_average(std::sqrt(r2));
    const double pos = r2 / step_;
    const auto i = std::min(static_cast<std::size_t>(pos), table_.size() - 2);
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * table_[i] + w * table_[i + 1];
}

double RadialProfile::approx_kernel(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const {
    check_dims(dims_, x.size());
    check_dims(dims_, y.size());
    double r2 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double delta = y[i] - x[i];
        delta -= std::round(delta);
        r2 += delta * delta;
    }
    return (*this)(r2);
}

RadialDeviation radial_deviation(const RadialProfile& g, int d, std::size_t pairs, std::uint64_t seed) {
    const auto n = static_cast<Eigen::Index>(g.dims());
    const double size = static_cast<double>(lq_ball_support(g.dims(), d, Norm::L2).size());
    Rng rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    RadialDeviation out;
    Vector x(n), y(n);
    for (std::size_t p = 0; p < pairs; ++p) {
        for (Eigen::Index i = 0; i < n; ++i) {
            x[i] = uniform(rng);
            y[i] = uniform(rng);
        }
        const double rel = std::abs(dirichlet_q(y - x, d, Norm::L2) - g.approx_kernel(x, y)) / size;
        out.max_rel = std::max(out.max_rel, rel);
        out.mean_rel += rel;
    }
    if (pairs) out.mean_rel /= static_cast<double>(pairs);
    return out;
}

} // namespace bandsurf
