#pragma once

#include <cmath>
#include <cstdint>

#include "bandsurf/rng.hpp"
#include "bandsurf/support.hpp"
#include "bandsurf/trigpoly.hpp"

namespace bandsurf::testing {

inline SupportSet square(int side) {
    const int sizes[] = {side, side};
    return centered_rect(sizes);
}

inline SupportSet cube(int side) {
    const int sizes[] = {side, side, side};
    return centered_rect(sizes);
}

/// psi = -(cos 2 pi x1 + cos 2 pi x2) - 1: a closed curve around (0.5, 0.5)
/// that stays away from the cell boundary.
inline TrigPolynomial circle_curve() {
    const SupportSet sq = square(3);
    CVector c = CVector::Zero(9);
    c[sq.index_of({0, 0})] = -1.0;
    for (const Freq& k : {Freq{-1, 0}, Freq{1, 0}, Freq{0, -1}, Freq{0, 1}}) c[sq.index_of(k)] = -0.5;
    return TrigPolynomial(sq, c / c.norm());
}

inline Vector uniform_point(Rng& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector x(static_cast<Eigen::Index>(n));
    for (auto& v : x) v = u(rng);
    return x;
}

inline Matrix uniform_points(Rng& rng, std::size_t n, std::size_t count) {
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(count));
    for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) = uniform_point(rng, n);
    return m;
}

/// Maximum |psi| over the points of a cloud.
inline double max_residual(const TrigPolynomial& p, const PointCloud& cloud) {
    double worst = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) worst = std::max(worst, std::abs(p(cloud.point(i))));
    return worst;
}

/// Maximum |psi| over a regular grid, as a scale for "far from the curve".
inline double grid_max_abs(const TrigPolynomial& p, int per_axis = 64) {
    double m = 0.0;
    Vector x(static_cast<Eigen::Index>(p.dims()));
    std::vector<int> idx(p.dims(), 0);
    while (true) {
        for (std::size_t d = 0; d < p.dims(); ++d) x[static_cast<Eigen::Index>(d)] = static_cast<double>(idx[d]) / per_axis;
        m = std::max(m, std::abs(p(x)));
        std::size_t d = 0;
        while (d < p.dims() && ++idx[d] == per_axis) idx[d++] = 0;
        if (d == p.dims()) break;
    }
    return m;
}

} // namespace bandsurf::testing
