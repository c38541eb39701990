#include "sampcent/perron.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "sampcent/error.hpp"
#include "sampcent/rng.hpp"

namespace sampcent {

namespace {

using Operator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

void check_config(const PerronConfig& cfg) {
    if (!(cfg.epsilon >= 0.0) || !(cfg.tol > 0.0) || cfg.max_iter < 1) {
        throw ConfigError("invalid power iteration settings");
    }
}

void check_indices(const SparseGraph& g, const SampleSet& s) {
    for (const Index j : s.indices) {
        if (j < 0 || j >= g.order()) {
            throw DimensionError("sample index " + std::to_string(j) + " out of range");
        }
    }
}

// Scales to unit norm and makes the largest-magnitude entry positive.
// Returns false if the vector vanished.
bool normalize(Eigen::VectorXd& v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        return false;
    }
    v /= norm;
    Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) {
        v = -v;
    }
    return true;
}

Eigen::VectorXd random_start(Index n, Rng& rng) {
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) {
        v[i] = rng.uniform01();
    }
    return v;
}

PerronResult iterate(Index n, const Operator& op, const PerronConfig& cfg, Eigen::VectorXd v,
                     Rng& rng) {
    PerronResult r;
    r.epsilon = cfg.epsilon;
    int collapses = 0;
    while (!normalize(v)) {
        if (++collapses > cfg.max_restarts) {
            throw NumericalError("rank-deficient product");
        }
        v = random_start(n, rng);
        ++r.restarts;
    }
    Eigen::VectorXd w;
    for (Index k = 1; k <= cfg.max_iter; ++k) {
        w = op(v);
        if (!normalize(w)) {
            if (++collapses > cfg.max_restarts) {
                throw NumericalError("rank-deficient product");
            }
            v = random_start(n, rng);
            normalize(v);
            ++r.restarts;
            continue;
        }
        r.iterations = k;
        const double delta = (w - v).norm();
        v.swap(w);
        if (delta <= cfg.tol) {
            r.converged = true;
            break;
        }
    }
    const Eigen::VectorXd mv = op(v);
    r.eigenvalue_estimate = v.dot(mv);
    r.residual = (mv - r.eigenvalue_estimate * v).norm();
    r.vector = std::move(v);
    return r;
}

PerronResult run(Index n, const Operator& op, const PerronConfig& cfg) {
    check_config(cfg);
    Rng rng(cfg.seed, Stream::perron_start);
    Eigen::VectorXd start = cfg.random_start ? random_start(n, rng)
                                             : Eigen::VectorXd::Constant(n, 1.0);
    PerronResult r = iterate(n, op, cfg, std::move(start), rng);
    if (cfg.check_uniqueness && r.converged) {
        PerronConfig probe_cfg = cfg;
        const PerronResult probe = iterate(n, op, probe_cfg, random_start(n, rng), rng);
        if (!probe.converged || r.vector.dot(probe.vector) < 1.0 - 1e-6) {
            r.unique_dominant = false;
            r.warning = "dominant eigenvalue is not simple; the vector depends on the start";
        }
    }
    return r;
}

} // namespace

Eigen::VectorXd implicit_product_transpose(const SparseGraph& g, const SampleSet& columns,
                                           const SampleSet& rows, double epsilon,
                                           const Eigen::VectorXd& v) {
    if (v.size() != g.order()) {
        throw DimensionError("implicit product: dimension mismatch");
    }
    Eigen::VectorXd w = Eigen::VectorXd::Zero(g.order());
    for (std::size_t p = 0; p < columns.indices.size(); ++p) {
        double t = 0.0;
        for (const Index i : g.column(columns.indices[p])) {
            t += v[i];
        }
        if (t != 0.0) {
            for (const Index j : g.row(rows.indices[p])) {
                w[j] += t;
            }
        }
    }
    if (epsilon > 0.0) {
        w.array() += epsilon * v.sum();
    }
    return w;
}

PerronResult left_perron(const SparseGraph& g, const SampleSet& columns, const SampleSet& rows,
                         const PerronConfig& cfg) {
    if (columns.kind != SampleKind::column || rows.kind != SampleKind::row) {
        throw ConfigError("left_perron needs a column sample and a row sample");
    }
    if (columns.size() != rows.size()) {
        throw ConfigError("column and row samples must have the same size");
    }
    check_indices(g, columns);
    check_indices(g, rows);
    const Operator op = [&](const Eigen::VectorXd& v) {
        return implicit_product_transpose(g, columns, rows, cfg.epsilon, v);
    };
    PerronResult r = run(g.order(), op, cfg);
    r.ell = columns.size();
    return r;
}

PerronResult symmetric_perron(const SparseGraph& g, const SampleSet& columns,
                              const PerronConfig& cfg) {
    if (g.directed()) {
        throw ConfigError("symmetric_perron requires an undirected graph");
    }
    if (columns.kind != SampleKind::column) {
        throw ConfigError("symmetric_perron needs a column sample");
    }
    check_indices(g, columns);
    const Operator op = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(g.order());
        for (const Index j : columns.indices) {
            double t = 0.0;
            for (const Index i : g.column(j)) {
                t += v[i];
            }
            if (t != 0.0) {
                for (const Index i : g.column(j)) {
                    w[i] += t;
                }
            }
        }
        if (cfg.epsilon > 0.0) {
            w.array() += cfg.epsilon * v.sum();
        }
        return w;
    };
    PerronResult r = run(g.order(), op, cfg);
    r.ell = columns.size();
    return r;
}

} // namespace sampcent
