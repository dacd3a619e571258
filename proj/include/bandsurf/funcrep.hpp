#pragma once

#include <cstdint>

#include "bandsurf/lifting.hpp"
#include "bandsurf/point_cloud.hpp"
#include "bandsurf/trigpoly.hpp"

namespace bandsurf {

inline constexpr double kDefaultPinvCutoff = 1e-10;

/// How alpha(x) = K(A)^+ k_A(x) is computed.
/// Features: thin SVD of the explicit anchor lift Phi(A), alpha = Phi(A)^+ Phi(x);
///   the cutoff applies to singular values of Phi(A). Needs |Gamma| x N storage
///   but never squares the condition number.
/// Kernel: eigendecomposition of K(A) = Phi(A)^H Phi(A) and the kernel column
///   k_A(x); the cutoff applies to eigenvalues of K(A). Loses about half the
///   digits once cond(Phi(A)) passes 1e5 or so.
enum class AlphaSolver { Features, Kernel };

/// f(x) = F K(A)^+ k_A(x): a band-limited function known at on-surface
/// anchors A, extended to any point of the surface through the kernel.
class AnchorModel {
public:
    AnchorModel(PointCloud anchors, KernelConfig kernel, CMatrix outputs, double cutoff = kDefaultPinvCutoff,
                double ridge = 0.0, AlphaSolver solver = AlphaSolver::Features);

    const PointCloud& anchors() const { return anchors_; }
    const KernelConfig& kernel_config() const { return config_; }
    const Kernel& kernel() const { return kernel_; }
    const CMatrix& outputs() const { return outputs_; }
    const CMatrix& gram() const { return gram_; }
    /// Eigendecomposition pseudo-inverse of K(A) with the relative cutoff on
    /// eigenvalues; alpha uses it only under the Kernel solver.
    const CMatrix& gram_pinv() const { return gram_pinv_; }
    double cutoff() const { return cutoff_; }
    double ridge() const { return ridge_; }
    AlphaSolver solver() const { return solver_; }
    /// N x |Gamma| map with alpha(x) = coefficient_map() * Phi(x) (Features solver only).
    const CMatrix& coefficient_map() const { return coef_map_; }
    /// Singular values of Phi(A) (Features) or square roots of the eigenvalues of K(A) (Kernel), descending.
    const Vector& anchor_sigma() const { return sigma_; }
    std::size_t output_dims() const { return static_cast<std::size_t>(outputs_.rows()); }

    /// Same anchors and kernel, different output matrix.
    AnchorModel with_outputs(CMatrix outputs) const;

private:
    PointCloud anchors_;
    KernelConfig config_;
    Kernel kernel_;
    CMatrix outputs_;
    double cutoff_;
    double ridge_;
    AlphaSolver solver_;
    CMatrix gram_;
    CMatrix gram_pinv_;
    CMatrix coef_map_;
    Vector sigma_;
};

/// alpha(x) = K(A)^+ k_A(x).
CVector alpha(const Eigen::Ref<const Vector>& x, const AnchorModel& model);

/// F alpha(x), length M.
CVector eval(const AnchorModel& model, const Eigen::Ref<const Vector>& x);

/// eval at every column of `points`; result is M x Q.
CMatrix eval_batch(const AnchorModel& model, const Matrix& points);

/// Least-squares output matrix from training pairs: Z = [alpha(x_p)],
/// F = Y Z^H (Z Z^H + ridge)^+. `targets` is M x P, one column per training
/// point. The Features solver evaluates this as Y times the (ridged)
/// pseudo-inverse of Z from its SVD; the Kernel solver forms Z Z^H.
AnchorModel fit_outputs(const Matrix& inputs, const CMatrix& targets, const PointCloud& anchors,
                        const KernelConfig& kernel, double cutoff = kDefaultPinvCutoff, double ridge = 0.0,
                        AlphaSolver solver = AlphaSolver::Features);

enum class AnchorStrategy { Random, GreedyConditioning };

/// Picks `count` anchors from a candidate cloud. Random takes a uniform
/// subset; greedy-conditioning does pivoted Cholesky on the candidate Gram,
/// each step adding the candidate with the largest Schur-complement residual.
PointCloud select_anchors(const PointCloud& candidates, std::size_t count, AnchorStrategy strategy,
                          const KernelConfig& kernel, std::uint64_t seed);

/// Same, drawing candidates from the zero set of `surface` (a pool of
/// pool_factor * count points for the greedy strategy, `count` for random).
PointCloud select_anchors(const TrigPolynomial& surface, std::size_t count, AnchorStrategy strategy,
                          const KernelConfig& kernel, std::uint64_t seed, std::size_t pool_factor = 20);

/// Anchor autoencoder: outputs are the anchor coordinates themselves.
AnchorModel make_autoencoder(const PointCloud& anchors, const KernelConfig& kernel,
                             double cutoff = kDefaultPinvCutoff, double ridge = 0.0,
                             AlphaSolver solver = AlphaSolver::Features);

/// E(x) = ||x - F K(A)^+ k_A(x)||^2 for an autoencoder model.
double projection_error(const AnchorModel& autoencoder, const Eigen::Ref<const Vector>& x);

/// 2-norm condition number of a Hermitian PSD Gram (inf when singular).
double condition_number(const CMatrix& gram);

/// cond(K(A)) computed as cond(Phi(A))^2 from the explicit lift, which stays
/// finite well past the point where the eigenvalues of K(A) hit rounding.
double anchor_condition_number(const PointCloud& anchors, const KernelConfig& kernel);

} // namespace bandsurf
