#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sampcent/graph.hpp"
#include "sampcent/sample_set.hpp"

namespace sampcent {

/// Which entries of A survive the mask.
///   columns: a_ij kept iff j in J (nonsymmetric case, trailing columns vanish).
///   arrow:   a_ij kept iff i in J or j in J (symmetric case, sampled rows and columns).
enum class MaskPattern { columns, arrow };

std::string_view to_string(MaskPattern pattern) noexcept;

/// The masked adjacency matrix applied in original index space.
class MaskedOperator {
public:
    MaskedOperator(const SparseGraph& g, const SampleSet& mask, MaskPattern pattern);

    Index dimension() const noexcept { return g_->order(); }
    MaskPattern pattern() const noexcept { return pattern_; }
    bool contains(Index j) const { return in_mask_[static_cast<std::size_t>(j)] != 0; }

    /// y = A_mask x. Mask columns are visited in ascending order, then (arrow
    /// only) the off-mask part of each sampled row, so results are reproducible.
    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;

    /// Dense copy, for tests and small oracles.
    Eigen::MatrixXd to_dense() const;

private:
    const SparseGraph* g_;
    MaskPattern pattern_;
    std::vector<Index> sorted_;
    std::vector<char> in_mask_;
};

struct KrylovOptions {
    std::uint64_t seed = 0;
    /// Upper bound on the basis size; 0 selects the structural bound
    /// (l+1 for the column mask, 2l+1 for the arrow mask, capped at n).
    Index max_steps = 0;
    /// Breakdown when the new direction has norm <= breakdown_tol * ||A_mask||_est.
    double breakdown_tol = 1e-12;
    /// Also a breakdown when the new direction is within this factor of the
    /// rounding error the basis carries.
    double noise_margin = 100.0;
    /// A breakdown is accepted only when the accumulated invariance error
    /// stays below inv_tol * max(1, ||A_mask||_est).
    double inv_tol = 1e-8;
    /// After a breakdown, check with a random probe whether range(A_mask) lies
    /// in the basis and, if not, continue from the uncovered direction.
    bool complete = true;
    double probe_tol = 1e-10;
    int max_redraws = 8;
    /// Test override for the start vector (normalized before use).
    std::optional<Eigen::VectorXd> start;
};

/// A_mask V = V H (+ residual when no breakdown occurred).
struct KrylovDecomposition {
    Eigen::MatrixXd basis;        ///< n x m, orthonormal columns
    Eigen::MatrixXd small_matrix; ///< m x m upper Hessenberg (Arnoldi) or symmetric tridiagonal (Lanczos)
    bool symmetric = false;
    Index steps = 0;
    /// The last step broke down and the invariant relation holds within inv_tol.
    bool breakdown = false;
    /// A probe confirmed range(A_mask) is inside span(basis).
    bool complete = false;
    /// Step at which the first breakdown happened (0 if none).
    Index first_breakdown_step = 0;
    /// Continuations started after a breakdown that left part of the range uncovered.
    Index restarts = 0;
    /// Start vectors discarded because they stagnated immediately.
    Index redraws = 0;
    /// At breakdown, the norm of all dropped subdiagonals (the invariance error);
    /// otherwise the last subdiagonal.
    double residual_norm = 0.0;
    double norm_estimate = 0.0;
    /// Breakdown tolerance actually applied. Runs that reach the structural
    /// bound without a breakdown are repeated with a looser tolerance.
    double breakdown_tol_used = 0.0;
};

/// Arnoldi with full reorthogonalization (two Gram-Schmidt sweeps) on the
/// column-masked operator. Requires mask.kind == column.
KrylovDecomposition arnoldi(const SparseGraph& g, const SampleSet& mask,
                            const KrylovOptions& options = {});

/// Symmetric Lanczos with full reorthogonalization on the arrow-masked operator.
/// Requires an undirected graph and mask.kind == column.
KrylovDecomposition lanczos(const SparseGraph& g, const SampleSet& mask,
                            const KrylovOptions& options = {});

struct SpectralData {
    Eigen::VectorXcd eigenvalues;  ///< nonincreasing modulus
    Eigen::MatrixXcd eigenvectors; ///< unit 2-norm columns, aligned with eigenvalues
    /// 2-norm condition number of the eigenvector matrix (1 for symmetric input).
    double condition_estimate = 1.0;
    bool symmetric = false;
    bool fallback_flagged = false;
};

inline constexpr double default_cond_threshold = 1e8;

/// Eigenpairs sorted by nonincreasing modulus. Moduli equal to within 1e-12
/// relative are ordered by decreasing real part, then decreasing imaginary part.
SpectralData spectral_factorize(const KrylovDecomposition& d,
                                double cond_threshold = default_cond_threshold);
SpectralData spectral_factorize(const Eigen::MatrixXd& h, bool symmetric,
                                double cond_threshold = default_cond_threshold);

/// Largest eigenvalue modulus of the small matrix.
double estimate_spectral_radius(const SpectralData& sd);

/// ||A_mask V - V H||_F, computed with explicit operator applications.
double invariance_residual(const MaskedOperator& op, const KrylovDecomposition& d);

/// max |V^T V - I|.
double orthogonality_error(const KrylovDecomposition& d);

} // namespace sampcent
