#include <doctest.h>

#include "bandsurf/denoise.hpp"
#include "bandsurf/errors.hpp"
#include "bandsurf/linalg.hpp"
#include "helpers.hpp"

using namespace bandsurf;
using bandsurf::testing::square;

namespace {

PointCloud add_noise(const PointCloud& clean, double sigma, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, sigma);
    Matrix pts = clean.points().unaryExpr([&](double v) { return wrap_unit(v + normal(rng)); });
    return PointCloud(std::move(pts));
}

double mean_abs(const TrigPolynomial& p, const PointCloud& c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) acc += std::abs(p(c.point(i)));
    return acc / static_cast<double>(c.size());
}

} // namespace

TEST_CASE("config validation") {
    IrlsConfig cfg;
    cfg.kernel = KernelConfig::centered({3, 3});
    CHECK_NOTHROW(cfg.validate());
    auto bad = cfg;
    bad.lambda = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.eta = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.gamma0 = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.iterations = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(denoise(PointCloud(2), cfg), EmptyCloud);
    bad = cfg;
    bad.kernel = KernelConfig::rect({0, 0}, {1, 1});
    Rng rng(1);
    CHECK_THROWS_AS(denoise(PointCloud(testing::uniform_points(rng, 2, 4)), bad), std::invalid_argument);
}

TEST_CASE("trace gradient matches central differences") {
    Rng rng(2);
    std::uniform_int_distribution<int> side(1, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const int a = 2 * side(rng) + 1, b = 2 * side(rng) + 1;  // up to 7x7 = 49
        const Kernel k(KernelConfig::centered({a, b}), 2);
        const auto n = std::uniform_int_distribution<std::size_t>(2, 10)(rng);
        const Matrix x = testing::uniform_points(rng, 2, n);
        const CMatrix p = hermitian_inv_sqrt(kernel_gram(PointCloud(x), k).data, 0.5);
        const Matrix grad = trace_kp_gradient(x, k, p);
        const double scale = grad.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            Matrix xp = x, xm = x;
            xp.data()[i] += 1e-6;
            xm.data()[i] -= 1e-6;
            const double fd = (trace_kp(xp, k, p) - trace_kp(xm, k, p)) / 2e-6;
            CHECK(std::abs(fd - grad.data()[i]) <= 1e-4 * std::max(std::abs(fd), scale));
        }
    }
}

TEST_CASE("weight matrix is Hermitian positive definite with bounded spectrum") {
    Rng rng(3);
    const Kernel k(KernelConfig::centered({5, 5}), 2);
    const CMatrix gram = kernel_gram(PointCloud(testing::uniform_points(rng, 2, 30)), k).data;
    const double gamma = 0.3;
    const CMatrix p = hermitian_inv_sqrt(gram, gamma);
    CHECK(p == p.adjoint());
    const Vector eig = hermitian_eigenvalues(p);
    const double kmax = hermitian_eigenvalues(gram).maxCoeff();
    CHECK(eig.minCoeff() >= (1.0 - 1e-12) / std::sqrt(kmax + gamma));
}

TEST_CASE("nuclear norm surrogate") {
    const KernelConfig cfg = KernelConfig::centered({7, 7});
    PointCloud one(Matrix::Constant(2, 1, 0.3));
    CHECK(nuclear_norm_surrogate(one, cfg, 0.2) == doctest::Approx(std::sqrt(49.2)).epsilon(1e-12));

    Rng rng(4);
    const PointCloud random(testing::uniform_points(rng, 2, 20));
    const double big = 1e8;
    const double s = nuclear_norm_surrogate(random, cfg, big);
    CHECK(std::abs(s - 20.0 * std::sqrt(big)) <= 20.0 * 49.0 / std::sqrt(big));

    // rank deficiency of on-surface lifts: 3x3 curve, Gamma = 7x7, r = 49 - 25 = 24
    const auto p = random_real_poly_with_zero_set(square(3), 5);
    for (std::size_t n : {30, 60}) {
        const auto on = sample_zero_set(p, n, 6);
        const PointCloud off(testing::uniform_points(rng, 2, n));
        CHECK(nuclear_norm_surrogate(on, cfg, 1e-6) < nuclear_norm_surrogate(off, cfg, 1e-6));
    }
}

TEST_CASE("clean samples are a fixed point for small lambda") {
    const auto p = testing::circle_curve();
    const auto clean = sample_zero_set(p, 40, 1);
    IrlsConfig cfg;
    cfg.kernel = KernelConfig::centered({3, 3});
    cfg.lambda = 1e-9;
    cfg.iterations = 2;
    const auto out = denoise(clean, cfg);
    CHECK(out.log.back().mean_displacement <= 1e-6);
}

TEST_CASE("objective decreases and noise shrinks") {
    const auto p = testing::circle_curve();
    const auto clean = sample_zero_set(p, 200, 2);
    const auto noisy = add_noise(clean, 0.01, 3);
    IrlsConfig cfg;
    cfg.kernel = KernelConfig::centered({9, 9});
    cfg.lambda = 5e-4;
    cfg.iterations = 6;
    const auto out = denoise(noisy, cfg);
    REQUIRE(out.log.size() == 6);
    double prev = out.initial_objective;
    for (const auto& m : out.log) {
        CHECK(m.objective <= prev * (1.0 + 1e-12));
        prev = m.objective;
    }
    const double before = mean_abs(p, noisy), after = mean_abs(p, out.cloud);
    MESSAGE("mean |psi|: noisy " << before << " denoised " << after);
    CHECK(after * 2.0 <= before);
}

TEST_CASE("denoising is translation equivariant") {
    const auto p = testing::circle_curve();
    const auto noisy = add_noise(sample_zero_set(p, 40, 4), 0.01, 5);
    IrlsConfig cfg;
    cfg.kernel = KernelConfig::centered({5, 5});
    cfg.lambda = 0.05;
    cfg.iterations = 2;
    cfg.inner = 5;
    const auto a = denoise(noisy, cfg);
    const Eigen::Vector2d t(0.37, 0.81);
    const Matrix shifted = (noisy.points().colwise() + t).unaryExpr([](double v) { return wrap_unit(v); });
    const auto b = denoise(PointCloud(shifted), cfg);
    const Matrix back = (a.cloud.points().colwise() + t).unaryExpr([](double v) { return wrap_unit(v); });
    CHECK(periodic_sq_distance(back, b.cloud.points()) <= 1e-16);
}
