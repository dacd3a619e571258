#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bandsurf/point_cloud.hpp"
#include "bandsurf/support.hpp"
#include "bandsurf/trigpoly.hpp"
#include "bandsurf/types.hpp"

namespace bandsurf {

inline constexpr double kDefaultNullTol = 1e-9;

/// Orthonormal basis {n_i} of the left null space of Phi_Gamma(X), i.e. all
/// n with n^T Phi_Gamma(X) = 0 up to the singular-value cut.
struct NullSpaceBasis {
    SupportSet support;
    CMatrix vectors;  ///< |Gamma| x dim, orthonormal columns
    Vector sigma;     ///< singular values of Phi_Gamma(X), descending
    double tol;       ///< relative cut used: sigma <= tol * sigma_max counts as zero
    std::size_t rank;

    std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
};

/// Left null space of the feature matrix of `cloud`. When N > |Gamma| the
/// N x |Gamma| system is first reduced to |Gamma| x |Gamma| by a QR step.
NullSpaceBasis nullspace(const PointCloud& cloud, const SupportSet& gamma, double tol = kDefaultNullTol);

/// Unique (up to scale) annihilating polynomial on the minimal support.
/// Coefficients are put in canonical_phase form. Throws AmbiguousRecovery / NoAnnihilator when the null space is
/// not one-dimensional.
TrigPolynomial recover_minimal(const PointCloud& cloud, const SupportSet& lambda, double tol = kDefaultNullTol);

/// Unit-norm copy of c whose first coefficient of maximal modulus (within
/// 1e-12 relative) is real positive.
CVector canonical_phase(CVector c);

/// gamma(x) = sum_i |n_i^T Phi_Gamma(x)|^2 over a null-space basis.
class SosSurface {
public:
    explicit SosSurface(NullSpaceBasis basis);

    const NullSpaceBasis& basis() const { return basis_; }
    double operator()(const Eigen::Ref<const Vector>& x) const;

    /// Values of the individual null-space polynomials mu_i(x) = n_i^T Phi(x).
    CVector components(const Eigen::Ref<const Vector>& x) const;

private:
    NullSpaceBasis basis_;
};

SosSurface recover_sos(const PointCloud& cloud, const SupportSet& gamma, double tol = kDefaultNullTol);

/// gamma as an explicit trigonometric polynomial on Gamma + (-Gamma).
TrigPolynomial sos_as_polynomial(const SosSurface& sos);

/// Shifted copies c_{k - k0} of a coefficient vector, one per k0 in
/// shift_complement(gamma, lambda), laid out in gamma's canonical order.
CMatrix shifted_coefficients(const TrigPolynomial& poly, const SupportSet& gamma);

/// ||(I - N N^H) v|| / ||v|| for the orthonormal null basis N.
double projection_residual(const NullSpaceBasis& basis, const CVector& v);

// -- phase-transition experiments ------------------------------------------

struct PhaseConfig {
    /// Supports of the irreducible factors; one entry for a single surface.
    std::vector<SupportSet> factors;
    /// Lifting support; defaults to the product support (minimal lifting).
    std::optional<SupportSet> gamma;
    std::size_t trials = 100;
    /// Total sample counts (single-factor experiments).
    std::vector<std::size_t> sample_counts;
    /// Per-factor sample counts (multi-factor experiments), one row each.
    std::vector<std::vector<std::size_t>> component_counts;
    std::uint64_t seed = 0;
    double tol = kDefaultNullTol;
    double residual_tol = 1e-8;
    std::size_t heldout_per_factor = 200;
    std::size_t threads = 0;  ///< 0 = hardware concurrency
};

struct PhaseRow {
    std::size_t total = 0;
    std::vector<std::size_t> per_component;
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::size_t expected_null_dim = 0;
    /// null_dim_counts[d] = number of trials whose null space had dimension d.
    std::vector<std::size_t> null_dim_counts;

    double fraction() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
};

struct TrialOutcome {
    std::size_t null_dim = 0;
    double heldout_residual = 0.0;
    bool success = false;
};

/// Scores one recovery attempt: null dimension must equal `expected_null_dim`
/// and every held-out surface point must satisfy sqrt(gamma(x) / dim) <=
/// residual_tol. An empty sample set counts as a failure with a full null space.
TrialOutcome evaluate_recovery(const PointCloud& samples, const PointCloud& heldout, const SupportSet& gamma,
                               std::size_t expected_null_dim, double tol, double residual_tol);

std::vector<PhaseRow> phase_transition(const PhaseConfig& config);

} // namespace bandsurf
