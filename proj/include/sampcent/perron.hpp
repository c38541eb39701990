#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "sampcent/graph.hpp"
#include "sampcent/sample_set.hpp"

namespace sampcent {

struct PerronConfig {
    /// Every entry of the perturbation E equals epsilon.
    double epsilon = 0.0;
    /// Stop when successive normalized iterates differ by at most tol in the 2-norm.
    double tol = 1e-10;
    Index max_iter = 100000;
    std::uint64_t seed = 0;
    /// Start from a seeded random nonnegative vector instead of 1/sqrt(n).
    bool random_start = false;
    /// Repeat the iteration from a seeded random start and warn when the two
    /// limits disagree (dominant eigenvalue not simple).
    bool check_uniqueness = true;
    int max_restarts = 3;
};

struct PerronResult {
    Eigen::VectorXd vector; ///< unit 2-norm, largest entry positive
    double eigenvalue_estimate = 0.0;
    Index iterations = 0;
    bool converged = false;
    /// ||(M + E)^T v - lambda v||_2 at the returned vector.
    double residual = 0.0;
    Index restarts = 0;
    /// False when a second start converged elsewhere.
    bool unique_dominant = true;
    std::string warning;
    Index ell = 0;
    double epsilon = 0.0;
};

/// Power iteration on (M + E)^T with M = sum_p A(:, J_p) A(I_p, :), never formed:
/// t = A(:, J)^T v, w = A(I, :)^T t + epsilon 1 (1^T v). J and I are paired by position.
PerronResult left_perron(const SparseGraph& g, const SampleSet& columns, const SampleSet& rows,
                         const PerronConfig& cfg = {});

/// Power iteration on M = A(:, J) A(:, J)^T for an undirected graph.
PerronResult symmetric_perron(const SparseGraph& g, const SampleSet& columns,
                              const PerronConfig& cfg = {});

/// (M + E)^T v for the pairing used by left_perron.
Eigen::VectorXd implicit_product_transpose(const SparseGraph& g, const SampleSet& columns,
                                           const SampleSet& rows, double epsilon,
                                           const Eigen::VectorXd& v);

} // namespace sampcent
