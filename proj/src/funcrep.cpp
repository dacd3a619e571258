#include "bandsurf/funcrep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bandsurf/errors.hpp"
#include "bandsurf/linalg.hpp"
#include "bandsurf/rng.hpp"

namespace bandsurf {

namespace {

/// sigma / (sigma^2 + ridge) for kept singular values, 0 for the rest.
Vector damped_inverse(const Vector& sigma, double cutoff, double ridge) {
    Vector inv = Vector::Zero(sigma.size());
    if (sigma.size() == 0) return inv;
    const double cut = cutoff * sigma[0];
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma[i] > cut && sigma[i] > 0.0) inv[i] = sigma[i] / (sigma[i] * sigma[i] + ridge);
    }
    return inv;
}

} // namespace

AnchorModel::AnchorModel(PointCloud anchors, KernelConfig kernel, CMatrix outputs, double cutoff, double ridge,
                         AlphaSolver solver)
    : anchors_(std::move(anchors)),
      config_(std::move(kernel)),
      kernel_(config_, anchors_.dims()),
      outputs_(std::move(outputs)),
      cutoff_(cutoff),
      ridge_(ridge),
      solver_(solver) {
    if (anchors_.empty()) throw EmptyCloud();
    if (outputs_.cols() != static_cast<Eigen::Index>(anchors_.size())) {
        throw DimensionMismatch(anchors_.size(), static_cast<std::size_t>(outputs_.cols()));
    }
    if (!(cutoff_ >= 0.0) || !(ridge_ >= 0.0)) {
        throw std::invalid_argument("pseudo-inverse cutoff and ridge must be nonnegative");
    }
    gram_ = kernel_gram(anchors_, kernel_).data;
    gram_pinv_ = hermitian_pinv(gram_, cutoff_, ridge_);
    if (solver_ == AlphaSolver::Kernel) {
        sigma_ = hermitian_eigenvalues(gram_).reverse().cwiseMax(0.0).cwiseSqrt();
        return;
    }
    const CMatrix phi = feature_matrix(anchors_, kernel_.support()).data;
    Eigen::BDCSVD<CMatrix> svd(phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
    sigma_ = svd.singularValues();
    const Vector inv = damped_inverse(sigma_, cutoff_, ridge_);
    coef_map_ = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

AnchorModel AnchorModel::with_outputs(CMatrix outputs) const {
    return AnchorModel(anchors_, config_, std::move(outputs), cutoff_, ridge_, solver_);
}

CVector alpha(const Eigen::Ref<const Vector>& x, const AnchorModel& model) {
    if (static_cast<std::size_t>(x.size()) != model.anchors().dims()) {
        throw DimensionMismatch(model.anchors().dims(), static_cast<std::size_t>(x.size()));
    }
    if (model.solver() == AlphaSolver::Features) return model.coefficient_map() * lift(x, model.kernel().support());
    return model.gram_pinv() * kernel_column(model.anchors(), model.kernel(), x);
}

CVector eval(const AnchorModel& model, const Eigen::Ref<const Vector>& x) {
    if (model.output_dims() == 0) return CVector(0);
    return model.outputs() * alpha(x, model);
}

CMatrix eval_batch(const AnchorModel& model, const Matrix& points) {
    CMatrix out(model.outputs().rows(), points.cols());
    for (Eigen::Index q = 0; q < points.cols(); ++q) out.col(q) = eval(model, points.col(q));
    return out;
}

AnchorModel fit_outputs(const Matrix& inputs, const CMatrix& targets, const PointCloud& anchors,
                        const KernelConfig& kernel, double cutoff, double ridge, AlphaSolver solver) {
    if (inputs.cols() == 0) throw std::invalid_argument("fit_outputs needs at least one training pair");
    if (targets.cols() != inputs.cols()) {
        throw DimensionMismatch(static_cast<std::size_t>(inputs.cols()), static_cast<std::size_t>(targets.cols()));
    }
    if (static_cast<std::size_t>(inputs.rows()) != anchors.dims()) {
        throw DimensionMismatch(anchors.dims(), static_cast<std::size_t>(inputs.rows()));
    }
    const auto n = static_cast<Eigen::Index>(anchors.size());
    AnchorModel model(anchors, kernel, CMatrix::Zero(targets.rows(), n), cutoff, ridge, solver);
    CMatrix z(n, inputs.cols());
    for (Eigen::Index p = 0; p < inputs.cols(); ++p) z.col(p) = alpha(inputs.col(p), model);
    const double top = z.cwiseAbs().maxCoeff();
    if (!std::isfinite(top) || top <= 0.0) {
        throw DegenerateSystem("training coefficients Z are zero or non-finite");
    }
    if (solver == AlphaSolver::Kernel) {
        CMatrix f = targets * z.adjoint() * hermitian_pinv(z * z.adjoint(), cutoff, ridge);
        return model.with_outputs(std::move(f));
    }
    // Y Z^H (Z Z^H + ridge)^+ = Y V diag(s / (s^2 + ridge)) U^H for Z = U S V^H
    Eigen::BDCSVD<CMatrix> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector inv = damped_inverse(svd.singularValues(), cutoff, ridge);
    if (inv.isZero(0.0)) throw DegenerateSystem("training coefficients Z have no usable singular values");
    CMatrix f = ((targets * svd.matrixV()) * inv.asDiagonal()) * svd.matrixU().adjoint();
    if (!f.allFinite()) throw DegenerateSystem("learned outputs are non-finite");
    return model.with_outputs(std::move(f));
}

PointCloud select_anchors(const PointCloud& candidates, std::size_t count, AnchorStrategy strategy,
                          const KernelConfig& kernel, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("need at least one anchor");
    if (candidates.size() < count) {
        throw InsufficientCandidates("need " + std::to_string(count) + " anchors but only " +
                                     std::to_string(candidates.size()) + " candidates are available");
    }
    const std::size_t pool = candidates.size();
    std::vector<std::size_t> chosen;
    if (strategy == AnchorStrategy::Random) {
        std::vector<std::size_t> order(pool);
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
        chosen.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
    } else {
        const Kernel k(kernel, candidates.dims());
        const auto p = static_cast<Eigen::Index>(pool);
        Vector residual = Vector::Constant(p, static_cast<double>(k.support().size()));
        CMatrix chol = CMatrix::Zero(p, static_cast<Eigen::Index>(count));
        std::vector<bool> used(pool, false);
        for (std::size_t j = 0; j < count; ++j) {
            Eigen::Index best = -1;
            for (Eigen::Index c = 0; c < p; ++c) {
                if (!used[static_cast<std::size_t>(c)] && (best < 0 || residual[c] > residual[best])) best = c;
            }
            used[static_cast<std::size_t>(best)] = true;
            chosen.push_back(static_cast<std::size_t>(best));
            const double pivot = std::sqrt(std::max(residual[best], 0.0));
            const auto jj = static_cast<Eigen::Index>(j);
            for (Eigen::Index c = 0; c < p; ++c) {
                if (used[static_cast<std::size_t>(c)] && c != best) continue;
                Complex v = k(candidates.point(static_cast<std::size_t>(c)), candidates.point(static_cast<std::size_t>(best)));
                for (Eigen::Index l = 0; l < jj; ++l) v -= chol(c, l) * std::conj(chol(best, l));
                chol(c, jj) = pivot > 0.0 ? v / pivot : Complex(0.0);
                residual[c] -= std::norm(chol(c, jj));
            }
        }
    }
    Matrix pts(static_cast<Eigen::Index>(candidates.dims()), static_cast<Eigen::Index>(count));
    std::vector<int> labels;
    for (std::size_t j = 0; j < count; ++j) {
        pts.col(static_cast<Eigen::Index>(j)) = candidates.point(chosen[j]);
        if (candidates.has_labels()) labels.push_back(candidates.labels()[chosen[j]]);
    }
    return PointCloud(std::move(pts), std::move(labels));
}

PointCloud select_anchors(const TrigPolynomial& surface, std::size_t count, AnchorStrategy strategy,
                          const KernelConfig& kernel, std::uint64_t seed, std::size_t pool_factor) {
    if (count < 1) throw std::invalid_argument("need at least one anchor");
    if (strategy == AnchorStrategy::Random) {
        return sample_zero_set(surface, count, seed);
    }
    const PointCloud pool = sample_zero_set(surface, std::max<std::size_t>(pool_factor, 1) * count, mix_seed(seed, 1));
    return select_anchors(pool, count, strategy, kernel, seed);
}

AnchorModel make_autoencoder(const PointCloud& anchors, const KernelConfig& kernel, double cutoff, double ridge,
                             AlphaSolver solver) {
    return AnchorModel(anchors, kernel, anchors.points().cast<Complex>(), cutoff, ridge, solver);
}

double projection_error(const AnchorModel& autoencoder, const Eigen::Ref<const Vector>& x) {
    if (static_cast<std::size_t>(autoencoder.outputs().rows()) != static_cast<std::size_t>(x.size())) {
        throw DimensionMismatch(static_cast<std::size_t>(autoencoder.outputs().rows()), static_cast<std::size_t>(x.size()));
    }
    return (x.cast<Complex>() - eval(autoencoder, x)).squaredNorm();
}

double condition_number(const CMatrix& gram) {
    const Vector eigs = hermitian_eigenvalues(gram);
    const double lo = eigs.minCoeff(), hi = eigs.maxCoeff();
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

double anchor_condition_number(const PointCloud& anchors, const KernelConfig& kernel) {
    const Kernel k(kernel, anchors.dims());
    const Vector sigma = Eigen::BDCSVD<CMatrix>(feature_matrix(anchors, k.support()).data).singularValues();
    const double lo = sigma[sigma.size() - 1], hi = sigma[0];
    if (lo <= 0.0 || static_cast<std::size_t>(sigma.size()) < anchors.size()) return std::numeric_limits<double>::infinity();
    return (hi / lo) * (hi / lo);
}

} // namespace bandsurf
