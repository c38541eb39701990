#include "sampcent/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "sampcent/dense_expm.hpp"
#include "sampcent/error.hpp"

namespace sampcent {

std::string_view to_string(MatfunMethod method) noexcept {
    switch (method) {
    case MatfunMethod::krylov_spectral:
        return "krylov_spectral";
    case MatfunMethod::direct_core:
        return "direct_core";
    case MatfunMethod::lanczos:
        return "lanczos";
    }
    return "unknown";
}

namespace {

using Complex = std::complex<double>;

MaskPattern pick_pattern(const SparseGraph& g, const MatfunOptions& options) {
    if (options.pattern) {
        return *options.pattern;
    }
    return g.directed() ? MaskPattern::columns : MaskPattern::arrow;
}

void check_inputs(const SparseGraph& g, const SampleSet& mask, const ScalarFunction& f) {
    if (mask.kind != SampleKind::column) {
        throw ConfigError("matrix functions need a column sample");
    }
    if (!(f.gamma > 0.0) || !std::isfinite(f.gamma)) {
        throw ConfigError("gamma must be positive and finite");
    }
    std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
    for (const Index j : mask.indices) {
        if (j < 0 || j >= g.order()) {
            throw DimensionError("mask index " + std::to_string(j) + " out of range");
        }
        if (seen[static_cast<std::size_t>(j)]++ != 0) {
            throw ConfigError("mask index " + std::to_string(j) + " repeated");
        }
    }
}

void check_katz(const ScalarFunction& f, double rho, const MatfunTolerances& tol) {
    if (f.kind != FunctionKind::resolvent_minus_one) {
        return;
    }
    if (f.gamma * rho > tol.katz_safety) {
        std::ostringstream msg;
        msg << "resolvent parameter too large: gamma * rho_hat = " << f.gamma * rho
            << " exceeds " << tol.katz_safety;
        throw NumericalError(msg.str());
    }
}

MatfunResult blank_result(const SparseGraph& g, const SampleSet& mask, const ScalarFunction& f,
                          const MatfunOptions& options, MaskPattern pattern) {
    MatfunResult r;
    r.diag = Eigen::VectorXd::Zero(g.order());
    r.rowsum = Eigen::VectorXd::Zero(g.order());
    r.pattern = pattern;
    r.f = f;
    r.ell = mask.size();
    r.seed = options.seed;
    return r;
}

double spectral_radius_of(const Eigen::MatrixXd& a) {
    if (a.rows() == 0) {
        return 0.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigensolver failed on the leading block");
    }
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

struct Core {
    Eigen::MatrixXd g_core; ///< g(A11)
    double rho = 0.0;
};

Core dense_core(const Eigen::MatrixXd& a11, const ScalarFunction& f, const MatfunTolerances& tol) {
    const Index l = a11.rows();
    Core core;
    core.rho = spectral_radius_of(a11);
    check_katz(f, core.rho, tol);
    if (f.kind == FunctionKind::exp_minus_one) {
        core.g_core = f.gamma * exp_and_phi1(f.gamma * a11).phi1;
    } else {
        const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(l, l) - f.gamma * a11;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
        if (l > 0 && !(lu.rcond() > 1e-14)) {
            throw NumericalError("resolvent pole: I - gamma A11 is singular");
        }
        core.g_core = f.gamma * lu.solve(Eigen::MatrixXd::Identity(l, l));
    }
    if (!core.g_core.allFinite()) {
        throw NumericalError("non-finite values in the dense core");
    }
    return core;
}

// f(A_mask)(:, J) = A(:, J) g(A11).
Eigen::MatrixXd core_columns(const SparseGraph& g, const SampleSet& mask,
                             const Eigen::MatrixXd& g_core) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.order(), mask.size());
    for (Index p = 0; p < mask.size(); ++p) {
        for (const Index i : g.column(mask.indices[static_cast<std::size_t>(p)])) {
            out.row(i) += g_core.row(p);
        }
    }
    return out;
}

MatfunResult column_direct(const SparseGraph& g, const SampleSet& mask, const ScalarFunction& f,
                           const MatfunOptions& options) {
    const Index l = mask.size();
    if (l > options.tol.dense_core_cap) {
        throw ConfigError("sample size " + std::to_string(l) + " exceeds the dense core cap " +
                          std::to_string(options.tol.dense_core_cap));
    }
    MatfunResult r = blank_result(g, mask, f, options, MaskPattern::columns);
    r.method = MatfunMethod::direct_core;
    const Eigen::MatrixXd a11 = leading_block(g, mask);
    const Core core = dense_core(a11, f, options.tol);
    r.spectral_radius_estimate = core.rho;

    const Eigen::VectorXd h = core.g_core.rowwise().sum();
    for (Index p = 0; p < l; ++p) {
        const Index j = mask.indices[static_cast<std::size_t>(p)];
        for (const Index i : g.column(j)) {
            r.rowsum[i] += h[p];
        }
        r.diag[j] = a11.row(p).dot(core.g_core.col(p));
    }
    return r;
}

MatfunResult arrow_direct(const SparseGraph& g, const SampleSet& mask, const ScalarFunction& f,
                          const MatfunOptions& options) {
    if (g.directed()) {
        throw ConfigError("the arrow mask requires an undirected graph");
    }
    const Index l = mask.size();
    const Index n = g.order();
    std::vector<Index> pos(static_cast<std::size_t>(n), -1);
    for (Index p = 0; p < l; ++p) {
        pos[static_cast<std::size_t>(mask.indices[static_cast<std::size_t>(p)])] = p;
    }
    std::vector<Index> rows;
    for (Index i = 0; i < n; ++i) {
        if (pos[static_cast<std::size_t>(i)] >= 0) {
            continue;
        }
        for (const Index j : g.row(i)) {
            if (pos[static_cast<std::size_t>(j)] >= 0) {
                rows.push_back(i);
                break;
            }
        }
    }
    const Index r_count = static_cast<Index>(rows.size());
    if (l > options.tol.dense_core_cap || r_count * l > options.tol.symmetric_core_cap) {
        throw ConfigError("sample too large for the dense symmetric core");
    }

    MatfunResult res = blank_result(g, mask, f, options, MaskPattern::arrow);
    res.method = MatfunMethod::direct_core;

    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(r_count, l);
    for (Index a = 0; a < r_count; ++a) {
        for (const Index j : g.row(rows[static_cast<std::size_t>(a)])) {
            const Index q = pos[static_cast<std::size_t>(j)];
            if (q >= 0) {
                d(a, q) = 1.0;
            }
        }
    }
    Eigen::MatrixXd q2(r_count, 0);
    Eigen::MatrixXd rm(0, l);
    if (r_count > 0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d);
        const Index k = qr.rank();
        q2 = qr.householderQ() * Eigen::MatrixXd::Identity(r_count, k);
        const Eigen::MatrixXd upper =
            qr.matrixR().topRows(k).template triangularView<Eigen::Upper>();
        rm = upper * qr.colsPermutation().transpose();
    }
    const Index k = rm.rows();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(l + k, l + k);
    c.topLeftCorner(l, l) = leading_block(g, mask);
    c.block(0, l, l, k) = rm.transpose();
    c.block(l, 0, k, l) = rm;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
    if (es.info() != Eigen::Success) {
        throw NumericalError("symmetric eigensolver failed on the compressed core");
    }
    const Eigen::VectorXd lambda = es.eigenvalues();
    res.spectral_radius_estimate = lambda.size() > 0 ? lambda.cwiseAbs().maxCoeff() : 0.0;
    check_katz(f, res.spectral_radius_estimate, options.tol);
    Eigen::VectorXd fl(lambda.size());
    for (Index t = 0; t < lambda.size(); ++t) {
        fl[t] = f(lambda[t]);
    }

    // U = blockdiag(I, Q2) Z restricted to the rows J and R.
    const Eigen::MatrixXd& z = es.eigenvectors();
    Eigen::MatrixXd u(l + r_count, l + k);
    u.topRows(l) = z.topRows(l);
    u.bottomRows(r_count) = q2 * z.bottomRows(k);
    const Eigen::VectorXd weights = fl.cwiseProduct(u.colwise().sum().transpose());
    const Eigen::VectorXd diag = u.cwiseAbs2() * fl;
    const Eigen::VectorXd rowsum = u * weights;
    for (Index p = 0; p < l; ++p) {
        const Index i = mask.indices[static_cast<std::size_t>(p)];
        res.diag[i] = diag[p];
        res.rowsum[i] = rowsum[p];
    }
    for (Index a = 0; a < r_count; ++a) {
        const Index i = rows[static_cast<std::size_t>(a)];
        res.diag[i] = diag[l + a];
        res.rowsum[i] = rowsum[l + a];
    }
    return res;
}

struct SpectralRoute {
    KrylovDecomposition krylov;
    SpectralData spectral;
    double rho = 0.0;
    Eigen::MatrixXcd w;      ///< V S(:, 1:l)
    Eigen::MatrixXcd w_inv;  ///< W_J^{-1}
    Eigen::VectorXcd f_vals; ///< f(lambda_1..l)
    std::string reason;      ///< nonempty when the route is unusable
};

SpectralRoute column_spectral(const SparseGraph& g, const SampleSet& mask,
                              const ScalarFunction& f, const MatfunOptions& options) {
    SpectralRoute route;
    const Index l = mask.size();
    KrylovOptions ko;
    ko.seed = options.seed;
    ko.breakdown_tol = options.tol.breakdown_tol;
    route.krylov = arnoldi(g, mask, ko);
    if (!route.krylov.breakdown || !route.krylov.complete) {
        route.reason = "no invariant Krylov subspace within the step cap";
        return route;
    }
    route.spectral = spectral_factorize(route.krylov, options.tol.cond_threshold);
    route.rho = estimate_spectral_radius(route.spectral);
    check_katz(f, route.rho, options.tol);
    if (route.spectral.fallback_flagged) {
        route.reason = "ill-conditioned eigenvector matrix";
        return route;
    }
    const double zero_tol = options.tol.zero_eig_tol * std::max(1.0, route.rho);
    Index nonzero = 0;
    for (Index k = 0; k < route.spectral.eigenvalues.size(); ++k) {
        if (std::abs(route.spectral.eigenvalues[k]) > zero_tol) {
            ++nonzero;
        }
    }
    if (nonzero != l) {
        route.reason = "leading block is singular (" + std::to_string(nonzero) + " of " +
                       std::to_string(l) + " eigenvalues nonzero)";
        return route;
    }
    route.w = route.krylov.basis.cast<Complex>() * route.spectral.eigenvectors.leftCols(l);
    Eigen::MatrixXcd w_j(l, l);
    for (Index p = 0; p < l; ++p) {
        w_j.row(p) = route.w.row(mask.indices[static_cast<std::size_t>(p)]);
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(w_j);
    if (!(lu.rcond() >= options.tol.solve_rcond)) {
        route.reason = "W_J is near singular";
        return route;
    }
    route.w_inv = lu.solve(Eigen::MatrixXcd::Identity(l, l));
    route.f_vals.resize(l);
    for (Index k = 0; k < l; ++k) {
        route.f_vals[k] = f(route.spectral.eigenvalues[k]);
    }
    return route;
}

Eigen::VectorXd real_part_checked(const Eigen::VectorXcd& v, double imag_tol, const char* what) {
    const Eigen::VectorXd re = v.real();
    const double scale = std::max(re.size() > 0 ? re.cwiseAbs().maxCoeff() : 0.0, 1e-6);
    const double im = v.size() > 0 ? v.imag().cwiseAbs().maxCoeff() : 0.0;
    if (im > imag_tol * scale) {
        std::ostringstream msg;
        msg << "imaginary residue " << im << " in " << what << " exceeds tolerance";
        throw NumericalError(msg.str());
    }
    return re;
}

MatfunResult column_evaluate(const SparseGraph& g, const SampleSet& mask,
                             const ScalarFunction& f, const MatfunOptions& options) {
    const SpectralRoute route = column_spectral(g, mask, f, options);
    if (!route.reason.empty()) {
        if (!options.allow_fallback) {
            throw NumericalError("spectral route unusable: " + route.reason);
        }
        MatfunResult r = column_direct(g, mask, f, options);
        r.krylov_steps = route.krylov.steps;
        r.first_breakdown_step = route.krylov.first_breakdown_step;
        r.restarts = route.krylov.restarts;
        r.condition_estimate = route.spectral.condition_estimate;
        r.fallback_reason = route.reason;
        return r;
    }
    const Index l = mask.size();
    MatfunResult r = blank_result(g, mask, f, options, MaskPattern::columns);
    r.method = MatfunMethod::krylov_spectral;
    r.spectral_radius_estimate = route.rho;
    r.condition_estimate = route.spectral.condition_estimate;
    r.krylov_steps = route.krylov.steps;
    r.first_breakdown_step = route.krylov.first_breakdown_step;
    r.restarts = route.krylov.restarts;

    Eigen::VectorXcd diag_j(l);
    for (Index p = 0; p < l; ++p) {
        const Index i = mask.indices[static_cast<std::size_t>(p)];
        Complex s = 0.0;
        for (Index k = 0; k < l; ++k) {
            s += route.w(i, k) * route.f_vals[k] * route.w_inv(k, p);
        }
        diag_j[p] = s;
    }
    const Eigen::VectorXcd coeff =
        route.f_vals.cwiseProduct(route.w_inv * Eigen::VectorXcd::Ones(l));
    const Eigen::VectorXcd rowsum = route.w * coeff;

    const Eigen::VectorXd dj = real_part_checked(diag_j, options.tol.imag_tol, "diagonal");
    r.rowsum = real_part_checked(rowsum, options.tol.imag_tol, "row sums");
    for (Index p = 0; p < l; ++p) {
        r.diag[mask.indices[static_cast<std::size_t>(p)]] = dj[p];
    }
    return r;
}

MatfunResult arrow_evaluate(const SparseGraph& g, const SampleSet& mask, const ScalarFunction& f,
                            const MatfunOptions& options) {
    KrylovOptions ko;
    ko.seed = options.seed;
    ko.breakdown_tol = options.tol.breakdown_tol;
    const KrylovDecomposition d = lanczos(g, mask, ko);
    if (!d.breakdown || !d.complete) {
        const std::string reason = "no invariant Krylov subspace within the step cap";
        if (!options.allow_fallback) {
            throw NumericalError("Lanczos route unusable: " + reason);
        }
        MatfunResult r = arrow_direct(g, mask, f, options);
        r.krylov_steps = d.steps;
        r.first_breakdown_step = d.first_breakdown_step;
        r.restarts = d.restarts;
        r.fallback_reason = reason;
        return r;
    }
    const SpectralData sd = spectral_factorize(d);
    MatfunResult r = blank_result(g, mask, f, options, MaskPattern::arrow);
    r.method = MatfunMethod::lanczos;
    r.spectral_radius_estimate = estimate_spectral_radius(sd);
    check_katz(f, r.spectral_radius_estimate, options.tol);
    r.krylov_steps = d.steps;
    r.first_breakdown_step = d.first_breakdown_step;
    r.restarts = d.restarts;

    const Eigen::MatrixXd u = d.basis * sd.eigenvectors.real();
    Eigen::VectorXd fl(d.steps);
    for (Index k = 0; k < d.steps; ++k) {
        fl[k] = f(sd.eigenvalues[k].real());
    }
    r.diag = u.cwiseAbs2() * fl;
    r.rowsum = u * fl.cwiseProduct(u.colwise().sum().transpose());
    return r;
}

} // namespace

Eigen::MatrixXd leading_block(const SparseGraph& g, const SampleSet& mask) {
    const Index l = mask.size();
    std::vector<Index> pos(static_cast<std::size_t>(g.order()), -1);
    for (Index p = 0; p < l; ++p) {
        pos[static_cast<std::size_t>(mask.indices[static_cast<std::size_t>(p)])] = p;
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(l, l);
    for (Index q = 0; q < l; ++q) {
        for (const Index i : g.column(mask.indices[static_cast<std::size_t>(q)])) {
            const Index p = pos[static_cast<std::size_t>(i)];
            if (p >= 0) {
                a(p, q) = 1.0;
            }
        }
    }
    return a;
}

MatfunResult evaluate_masked_function(const SparseGraph& g, const SampleSet& mask,
                                      const ScalarFunction& f, const MatfunOptions& options) {
    check_inputs(g, mask, f);
    if (pick_pattern(g, options) == MaskPattern::arrow) {
        return arrow_evaluate(g, mask, f, options);
    }
    return column_evaluate(g, mask, f, options);
}

MatfunResult direct_core_evaluation(const SparseGraph& g, const SampleSet& mask,
                                    const ScalarFunction& f, const MatfunOptions& options) {
    check_inputs(g, mask, f);
    if (pick_pattern(g, options) == MaskPattern::arrow) {
        return arrow_direct(g, mask, f, options);
    }
    return column_direct(g, mask, f, options);
}

MatfunResult transpose_measures(const SparseGraph& g, const SampleSet& rows,
                                const ScalarFunction& f, const MatfunOptions& options) {
    if (rows.kind != SampleKind::row) {
        throw ConfigError("transpose_measures needs a row sample");
    }
    SampleSet as_columns = rows;
    as_columns.kind = SampleKind::column;
    return evaluate_masked_function(transpose(g), as_columns, f, options);
}

Eigen::MatrixXd masked_function_columns(const SparseGraph& g, const SampleSet& mask,
                                        const ScalarFunction& f, const MatfunOptions& options) {
    check_inputs(g, mask, f);
    const SpectralRoute route = column_spectral(g, mask, f, options);
    if (route.reason.empty()) {
        const Eigen::MatrixXcd cols =
            route.w * route.f_vals.asDiagonal() * route.w_inv;
        Eigen::MatrixXd out(cols.rows(), cols.cols());
        for (Index q = 0; q < cols.cols(); ++q) {
            out.col(q) = real_part_checked(cols.col(q), options.tol.imag_tol, "columns");
        }
        return out;
    }
    if (!options.allow_fallback) {
        throw NumericalError("spectral route unusable: " + route.reason);
    }
    const Core core = dense_core(leading_block(g, mask), f, options.tol);
    return core_columns(g, mask, core.g_core);
}

double masked_spectral_radius(const SparseGraph& g, const SampleSet& mask,
                              const MatfunOptions& options) {
    if (pick_pattern(g, options) == MaskPattern::arrow) {
        KrylovOptions ko;
        ko.seed = options.seed;
        ko.breakdown_tol = options.tol.breakdown_tol;
        return estimate_spectral_radius(spectral_factorize(lanczos(g, mask, ko)));
    }
    return spectral_radius_of(leading_block(g, mask));
}

} // namespace sampcent
