#include "bandsurf/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bandsurf/errors.hpp"
#include "bandsurf/rng.hpp"

namespace bandsurf {

namespace {

// exp(j 2 pi k^T x) with the phase reduced mod 1 before scaling.
Complex unit_exp(const Freq& k, const Eigen::Ref<const Vector>& x) {
    double t = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) t += k[i] * x[static_cast<Eigen::Index>(i)];
    t -= std::round(t);
    return std::polar(1.0, kTwoPi * t);
}

} // namespace

TrigPolynomial::TrigPolynomial(SupportSet support, CVector coeffs)
    : support_(std::move(support)), coeffs_(std::move(coeffs)) {
    if (static_cast<std::size_t>(coeffs_.size()) != support_.size()) {
        throw DimensionMismatch(support_.size(), static_cast<std::size_t>(coeffs_.size()));
    }
}

TrigPolynomial TrigPolynomial::constant(std::size_t dims, Complex value) {
    CVector c(1);
    c[0] = value;
    return TrigPolynomial(SupportSet(dims, {Freq(dims, 0)}), c);
}

Complex TrigPolynomial::operator()(const Eigen::Ref<const Vector>& x) const {
    if (static_cast<std::size_t>(x.size()) != dims()) {
        throw DimensionMismatch(dims(), static_cast<std::size_t>(x.size()));
    }
    Complex acc = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
        acc += coeffs_[static_cast<Eigen::Index>(i)] * unit_exp(support_[i], x);
    }
    return acc;
}

bool TrigPolynomial::is_real_valued(double tol) const {
    if (!support_.is_symmetric()) return false;
    const double scale = tol * std::max(coeffs_.norm(), 1e-300);
    Freq neg(dims());
    for (std::size_t i = 0; i < support_.size(); ++i) {
        const auto& k = support_[i];
        for (std::size_t d = 0; d < k.size(); ++d) neg[d] = -k[d];
        const auto j = support_.index_of(neg);
        if (std::abs(coeffs_[static_cast<Eigen::Index>(j)] - std::conj(coeffs_[static_cast<Eigen::Index>(i)])) > scale) {
            return false;
        }
    }
    return true;
}

Complex evaluate(const TrigPolynomial& poly, const Eigen::Ref<const Vector>& x) { return poly(x); }

TrigPolynomial multiply(const TrigPolynomial& p1, const TrigPolynomial& p2) {
    SupportSet sum = minkowski_sum(p1.support(), p2.support());
    CVector c = CVector::Zero(static_cast<Eigen::Index>(sum.size()));
    Freq s(sum.dims());
    for (std::size_t i = 0; i < p1.support().size(); ++i) {
        const auto& k = p1.support()[i];
        for (std::size_t j = 0; j < p2.support().size(); ++j) {
            const auto& l = p2.support()[j];
            for (std::size_t d = 0; d < s.size(); ++d) s[d] = k[d] + l[d];
            c[sum.index_of(s)] += p1.coeffs()[static_cast<Eigen::Index>(i)] * p2.coeffs()[static_cast<Eigen::Index>(j)];
        }
    }
    return TrigPolynomial(std::move(sum), std::move(c));
}

TrigPolynomial random_real_poly(const SupportSet& support, std::uint64_t seed) {
    if (!support.is_symmetric()) {
        throw std::invalid_argument("random_real_poly requires a support symmetric about the origin");
    }
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto m = static_cast<Eigen::Index>(support.size());
    CVector c(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        c[i] = Complex(re, im);
    }
    Freq neg(support.dims());
    for (std::size_t i = 0; i < support.size(); ++i) {
        const auto& k = support[i];
        for (std::size_t d = 0; d < k.size(); ++d) neg[d] = -k[d];
        if (k == neg) {
            c[static_cast<Eigen::Index>(i)] = c[static_cast<Eigen::Index>(i)].real();
        } else if (neg < k) {
            // k is the "positive" member of its pair; its partner mirrors it.
            c[support.index_of(neg)] = std::conj(c[static_cast<Eigen::Index>(i)]);
        }
    }
    c /= c.norm();
    return TrigPolynomial(support, std::move(c));
}

bool has_sign_change(const TrigPolynomial& poly, int per_axis) {
    const std::size_t n = poly.dims();
    std::vector<int> idx(n, 0);
    Vector x(static_cast<Eigen::Index>(n));
    bool seen_pos = false, seen_neg = false;
    while (true) {
        for (std::size_t d = 0; d < n; ++d) x[static_cast<Eigen::Index>(d)] = (idx[d] + 0.5) / per_axis;
        const double v = poly(x).real();
        seen_pos = seen_pos || v > 0;
        seen_neg = seen_neg || v < 0;
        if (seen_pos && seen_neg) return true;
        std::size_t d = 0;
        while (d < n && ++idx[d] == per_axis) idx[d++] = 0;
        if (d == n) break;
    }
    return false;
}

TrigPolynomial random_real_poly_with_zero_set(const SupportSet& support, std::uint64_t seed) {
    for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
        auto poly = random_real_poly(support, mix_seed(seed, attempt));
        if (has_sign_change(poly)) return poly;
    }
    throw NoZeroSetFound("no random polynomial with a nonempty zero set after 1000 draws");
}

PointCloud sample_zero_set(const TrigPolynomial& poly, std::size_t count, std::uint64_t seed,
                           const ZeroSetSampler& opts) {
    const std::size_t n = poly.dims();
    const auto ni = static_cast<Eigen::Index>(n);
    PointCloud cloud(n);
    if (count == 0) return cloud;

    Rng rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    const int maxfreq = std::max(1, poly.support().max_abs_freq());
    const int steps = 8 * maxfreq;
    Vector p(ni), u(ni), x(ni);

    auto point_at = [&](double t) {
        for (Eigen::Index d = 0; d < ni; ++d) x[d] = wrap_unit(p[d] + t * u[d]);
        return x;
    };
    auto value_at = [&](double t) { return poly(point_at(t)).real(); };

    Matrix pts(ni, static_cast<Eigen::Index>(count));
    std::size_t found = 0;
    std::size_t failures = 0;
    std::vector<std::pair<double, double>> brackets;
    while (found < count) {
        if (failures >= opts.max_line_draws) {
            throw NoZeroSetFound("no zero crossing found after " + std::to_string(failures) +
                                 " consecutive line draws");
        }
        for (Eigen::Index d = 0; d < ni; ++d) p[d] = uniform(rng);
        for (Eigen::Index d = 0; d < ni; ++d) u[d] = normal(rng);
        u.normalize();

        brackets.clear();
        double prev_t = 0.0, prev_v = value_at(0.0);
        for (int s = 1; s <= steps; ++s) {
            const double t = static_cast<double>(s) / steps;
            const double v = value_at(t);
            if ((prev_v < 0) != (v < 0) || v == 0.0) brackets.emplace_back(prev_t, t);
            prev_t = t;
            prev_v = v;
        }
        if (brackets.empty()) {
            ++failures;
            continue;
        }
        auto [a, b] = brackets[std::uniform_int_distribution<std::size_t>(0, brackets.size() - 1)(rng)];
        double fa = value_at(a);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            const double fm = value_at(mid);
            if (fm == 0.0) {
                a = b = mid;
                break;
            }
            if ((fm < 0) == (fa < 0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        const double va = std::abs(poly(point_at(a))), vb = std::abs(poly(point_at(b)));
        const double t = va <= vb ? a : b;
        point_at(t);
        if (std::abs(poly(x)) > opts.residual_tol) {
            ++failures;
            continue;
        }
        pts.col(static_cast<Eigen::Index>(found++)) = x;
        failures = 0;
    }
    return PointCloud(std::move(pts));
}

} // namespace bandsurf
