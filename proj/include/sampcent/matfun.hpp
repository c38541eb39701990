#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "sampcent/graph.hpp"
#include "sampcent/krylov.hpp"
#include "sampcent/sample_set.hpp"
#include "sampcent/scalar_function.hpp"

namespace sampcent {

enum class MatfunMethod { krylov_spectral, direct_core, lanczos };

std::string_view to_string(MatfunMethod method) noexcept;

struct MatfunTolerances {
    double breakdown_tol = 1e-12;
    /// Eigenvalues with |lambda| <= zero_eig_tol * max(1, rho) count as zero.
    double zero_eig_tol = 1e-10;
    /// Eigenvector condition above which the spectral route is abandoned.
    double cond_threshold = default_cond_threshold;
    /// Reciprocal condition of the W_J factorization below which the spectral route is abandoned.
    double solve_rcond = 1e-8;
    /// Relative size of discarded imaginary residues.
    double imag_tol = 1e-8;
    /// Katz admissibility: gamma * rho_hat must not exceed this.
    double katz_safety = 0.95;
    /// Largest l for the dense l x l core.
    Index dense_core_cap = 8000;
    /// Largest |R| * l for the symmetric dense core (R = off-mask rows touching J).
    Index symmetric_core_cap = 50'000'000;
};

struct MatfunOptions {
    std::uint64_t seed = 0;
    MatfunTolerances tol;
    /// Mask pattern; by default arrow for undirected graphs and columns otherwise.
    std::optional<MaskPattern> pattern;
    /// When false, a case the Krylov route cannot handle raises NumericalError
    /// instead of switching to the dense core.
    bool allow_fallback = true;
};

/// Diagonal and row sums of f(A_mask).
struct MatfunResult {
    Eigen::VectorXd diag;
    Eigen::VectorXd rowsum;
    MatfunMethod method = MatfunMethod::krylov_spectral;
    MaskPattern pattern = MaskPattern::columns;
    ScalarFunction f;
    Index ell = 0;
    std::uint64_t seed = 0;
    double spectral_radius_estimate = 0.0;
    double condition_estimate = 1.0;
    Index krylov_steps = 0;
    Index first_breakdown_step = 0;
    Index restarts = 0;
    /// Empty unless the Krylov route was abandoned for the dense core.
    std::string fallback_reason;
};

/// Krylov evaluation of diag(f(A_mask)) and f(A_mask) 1.
///
/// Column pattern: Arnoldi on A_mask, spectral factorization of H and the
/// structured solve with W_J = rows J of V S. Falls back to
/// direct_core_evaluation when the decomposition is not invariant, S is
/// ill-conditioned, A_11 is singular or W_J is near singular.
/// Arrow pattern: Lanczos and f(B) = V f(T) V^T, with the dense symmetric core as fallback.
MatfunResult evaluate_masked_function(const SparseGraph& g, const SampleSet& mask,
                                      const ScalarFunction& f, const MatfunOptions& options = {});

/// Exact evaluation through the l x l core.
///
/// Column pattern: f(A_mask) = [f(A11) 0; A21 g(A11) 0] with g(t) = f(t)/t.
/// Arrow pattern: the nonzero block of the arrow matrix is compressed to
/// [[A11, R^T], [R, 0]] by a QR factorization of the off-mask rows.
MatfunResult direct_core_evaluation(const SparseGraph& g, const SampleSet& mask,
                                    const ScalarFunction& f, const MatfunOptions& options = {});

/// diag and row sums of f(A^T) from sampled rows of A.
MatfunResult transpose_measures(const SparseGraph& g, const SampleSet& rows,
                                const ScalarFunction& f, const MatfunOptions& options = {});

/// The n x l block f(A_mask)(:, J), columns in selection order (column pattern only).
Eigen::MatrixXd masked_function_columns(const SparseGraph& g, const SampleSet& mask,
                                        const ScalarFunction& f,
                                        const MatfunOptions& options = {});

/// rho_hat of the masked operator.
double masked_spectral_radius(const SparseGraph& g, const SampleSet& mask,
                              const MatfunOptions& options = {});

/// A(J, J) as a dense matrix, rows and columns in selection order.
Eigen::MatrixXd leading_block(const SparseGraph& g, const SampleSet& mask);

} // namespace sampcent
