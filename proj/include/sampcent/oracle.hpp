#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "sampcent/graph.hpp"
#include "sampcent/perron.hpp"
#include "sampcent/scalar_function.hpp"

namespace sampcent {

using DenseMatrix = Eigen::MatrixXd;

inline constexpr Index default_dense_cap = 4000;

/// Dense 0/1 adjacency matrix. Throws ConfigError above `cap`.
DenseMatrix dense_adjacency(const SparseGraph& g, Index cap = default_dense_cap);

/// f(A) by Pade scaling and squaring (exp) or an LU solve of (I - gamma A) X = I (resolvent).
DenseMatrix dense_matfun(const DenseMatrix& a, const ScalarFunction& f,
                         Index cap = default_dense_cap);

struct KrylovFullResult {
    Eigen::VectorXd diag;   ///< diag(V_k f(H_k) V_k^T)
    Eigen::VectorXd rowsum; ///< V_k f(H_k) V_k^T 1
    Index steps = 0;
    bool breakdown = false;
};

/// k Arnoldi steps on the whole of A from a seeded random unit vector, then
/// f(A) ~ V_k f(H_k) V_k^T. Stops early at breakdown.
KrylovFullResult krylov_full_matfun(const SparseGraph& g, Index k, const ScalarFunction& f,
                                    std::uint64_t seed);

/// Left Perron vector of A by power iteration on A^T + I from the uniform
/// vector. The shift leaves the eigenvectors unchanged and makes the dominant
/// eigenvalue strictly dominant in modulus for bipartite and periodic graphs.
PerronResult dense_left_perron(const SparseGraph& g, double tol = 1e-10,
                               Index max_iter = 100000);

} // namespace sampcent
