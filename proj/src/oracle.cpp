#include "sampcent/oracle.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "sampcent/error.hpp"
#include "sampcent/rng.hpp"

namespace sampcent {

DenseMatrix dense_adjacency(const SparseGraph& g, Index cap) {
    if (g.order() > cap) {
        throw ConfigError("graph order " + std::to_string(g.order()) +
                          " exceeds the dense cap " + std::to_string(cap));
    }
    DenseMatrix a = DenseMatrix::Zero(g.order(), g.order());
    for (const auto& [i, j] : g.entries()) {
        a(i, j) = 1.0;
    }
    return a;
}

DenseMatrix dense_matfun(const DenseMatrix& a, const ScalarFunction& f, Index cap) {
    if (a.rows() != a.cols()) {
        throw DimensionError("dense_matfun: matrix must be square");
    }
    const Index n = a.rows();
    if (n > cap) {
        throw ConfigError("matrix order " + std::to_string(n) + " exceeds the dense cap " +
                          std::to_string(cap));
    }
    if (!(f.gamma > 0.0)) {
        throw ConfigError("gamma must be positive");
    }
    const DenseMatrix id = DenseMatrix::Identity(n, n);
    if (n == 0) {
        return id;
    }
    if (f.kind == FunctionKind::exp_minus_one) {
        const DenseMatrix scaled = f.gamma * a;
        return DenseMatrix(scaled.exp()) - id;
    }
    Eigen::EigenSolver<DenseMatrix> es(a, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigensolver failed");
    }
    const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
    if (!(f.gamma * rho < 1.0)) {
        throw NumericalError("resolvent requires gamma * rho(A) < 1");
    }
    Eigen::PartialPivLU<DenseMatrix> lu(id - f.gamma * a);
    if (!(lu.rcond() > 1e-14)) {
        throw NumericalError("I - gamma A is singular");
    }
    return DenseMatrix(lu.solve(id)) - id;
}

KrylovFullResult krylov_full_matfun(const SparseGraph& g, Index k, const ScalarFunction& f,
                                    std::uint64_t seed) {
    const Index n = g.order();
    if (k < 1 || k > n) {
        throw ConfigError("Krylov dimension must lie in [1, n]");
    }
    Rng rng(seed, Stream::krylov_start);
    Eigen::MatrixXd v(n, k);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
    for (Index i = 0; i < n; ++i) {
        v(i, 0) = rng.normal();
    }
    v.col(0).normalize();

    KrylovFullResult out;
    Index m = k;
    double scale = 0.0;
    for (Index j = 0; j < k; ++j) {
        Eigen::VectorXd w = matvec(g, v.col(j));
        scale = std::max(scale, w.norm());
        for (int pass = 0; pass < 2; ++pass) {
            for (Index i = 0; i <= j; ++i) {
                const double c = v.col(i).dot(w);
                h(i, j) += c;
                w -= c * v.col(i);
            }
        }
        if (j + 1 == k) {
            break;
        }
        const double beta = w.norm();
        if (beta <= 1e-12 * scale) {
            m = j + 1;
            out.breakdown = true;
            break;
        }
        h(j + 1, j) = beta;
        v.col(j + 1) = w / beta;
    }
    const Eigen::MatrixXd basis = v.leftCols(m);
    const Eigen::MatrixXd fh = dense_matfun(h.topLeftCorner(m, m), f);
    const Eigen::MatrixXd vf = basis * fh;
    out.steps = m;
    out.diag = vf.cwiseProduct(basis).rowwise().sum();
    out.rowsum = vf * (basis.transpose() * Eigen::VectorXd::Ones(n));
    return out;
}

PerronResult dense_left_perron(const SparseGraph& g, double tol, Index max_iter) {
    const Index n = g.order();
    if (n < 1) {
        throw ConfigError("empty graph");
    }
    PerronResult r;
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    for (Index k = 1; k <= max_iter; ++k) {
        Eigen::VectorXd w = transpose_matvec(g, v) + v;
        w.normalize();
        r.iterations = k;
        const double delta = (w - v).norm();
        v = std::move(w);
        if (delta <= tol) {
            r.converged = true;
            break;
        }
    }
    const Eigen::VectorXd av = transpose_matvec(g, v);
    r.eigenvalue_estimate = v.dot(av);
    r.residual = (av - r.eigenvalue_estimate * v).norm();
    r.vector = std::move(v);
    r.ell = n;
    return r;
}

} // namespace sampcent
