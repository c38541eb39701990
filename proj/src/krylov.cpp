#include "sampcent/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "sampcent/error.hpp"
#include "sampcent/rng.hpp"

namespace sampcent {

std::string_view to_string(MaskPattern pattern) noexcept {
    return pattern == MaskPattern::columns ? "columns" : "arrow";
}

MaskedOperator::MaskedOperator(const SparseGraph& g, const SampleSet& mask,
                               MaskPattern pattern)
    : g_(&g), pattern_(pattern), sorted_(mask.indices),
      in_mask_(static_cast<std::size_t>(g.order()), 0) {
    if (mask.kind != SampleKind::column) {
        throw ConfigError("masked operator needs a column sample");
    }
    if (pattern == MaskPattern::arrow && g.directed()) {
        throw ConfigError("the arrow mask requires an undirected graph");
    }
    std::sort(sorted_.begin(), sorted_.end());
    for (const Index j : sorted_) {
        if (j < 0 || j >= g.order()) {
            throw DimensionError("mask index " + std::to_string(j) + " out of range");
        }
        auto& flag = in_mask_[static_cast<std::size_t>(j)];
        if (flag != 0) {
            throw ConfigError("mask index " + std::to_string(j) + " repeated");
        }
        flag = 1;
    }
}

void MaskedOperator::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    if (x.size() != g_->order()) {
        throw DimensionError("masked operator: dimension mismatch");
    }
    y.setZero(g_->order());
    for (const Index j : sorted_) {
        const double xj = x[j];
        for (const Index i : g_->column(j)) {
            y[i] += xj;
        }
    }
    if (pattern_ == MaskPattern::arrow) {
        for (const Index i : sorted_) {
            double s = 0.0;
            for (const Index j : g_->row(i)) {
                if (!contains(j)) {
                    s += x[j];
                }
            }
            y[i] += s;
        }
    }
}

Eigen::VectorXd MaskedOperator::operator()(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y;
    apply(x, y);
    return y;
}

Eigen::MatrixXd MaskedOperator::to_dense() const {
    const auto n = g_->order();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (const Index j : g_->row(i)) {
            if (contains(j) || (pattern_ == MaskPattern::arrow && contains(i))) {
                a(i, j) = 1.0;
            }
        }
    }
    return a;
}

namespace {

Eigen::VectorXd random_unit(Index n, Rng& rng) {
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) {
        v[i] = rng.normal();
    }
    return v / v.norm();
}

// Two classical Gram-Schmidt sweeps against the first m basis columns;
// the accumulated coefficients are returned.
Eigen::VectorXd orthogonalize(const Eigen::MatrixXd& basis, Index m, Eigen::VectorXd& w) {
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(m);
    for (int pass = 0; pass < 2; ++pass) {
        for (Index j = 0; j < m; ++j) {
            const double c = basis.col(j).dot(w);
            w -= c * basis.col(j);
            coeffs[j] += c;
        }
    }
    return coeffs;
}

KrylovDecomposition run_krylov(const MaskedOperator& op, Index cap, bool symmetric,
                               const KrylovOptions& options) {
    const Index n = op.dimension();
    cap = std::clamp<Index>(cap, 1, n);
    KrylovDecomposition d;
    d.symmetric = symmetric;

    Rng start_rng(options.seed, Stream::krylov_start);
    Rng probe_rng(options.seed, Stream::krylov_probe);

    Eigen::VectorXd v;
    Eigen::VectorXd w;
    if (options.start) {
        if (options.start->size() != n || options.start->norm() == 0.0) {
            throw DimensionError("Krylov start vector has the wrong size or is zero");
        }
        v = *options.start / options.start->norm();
    } else {
        // A start vector annihilated by the operator gives a one-dimensional
        // space with no information; redraw unless the operator is zero.
        bool operator_zero = false;
        for (int attempt = 0;; ++attempt) {
            v = random_unit(n, start_rng);
            op.apply(v, w);
            if (w.norm() > 0.0) {
                break;
            }
            op.apply(random_unit(n, probe_rng), w);
            if (w.norm() == 0.0) {
                operator_zero = true;
                break;
            }
            if (attempt + 1 >= options.max_redraws) {
                throw NumericalError("Krylov start vector stagnated after " +
                                     std::to_string(options.max_redraws) + " redraws");
            }
            ++d.redraws;
        }
        (void)operator_zero;
    }

    Eigen::MatrixXd basis(n, cap);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(cap, cap);
    basis.col(0) = v;
    Index m = 1;
    double scale = 0.0;
    double beta_prev = 0.0;
    // Relative rounding error carried by the basis. Dividing by a small
    // subdiagonal amplifies it, so the breakdown test compares against this
    // floor too.
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double noise = eps;
    // Subdiagonals dropped at breakdowns; together they are the invariance error.
    double dropped_sq = 0.0;

    for (Index k = 0;; ++k) {
        op.apply(basis.col(k), w);
        const double image = w.norm();
        scale = std::max(scale, image);
        if (symmetric) {
            if (k > 0 && beta_prev != 0.0) {
                w -= beta_prev * basis.col(k - 1);
            }
            const double alpha = basis.col(k).dot(w);
            w -= alpha * basis.col(k);
            orthogonalize(basis, m, w);
            h(k, k) = alpha;
        } else {
            const Eigen::VectorXd coeffs = orthogonalize(basis, m, w);
            h.col(k).head(m) = coeffs;
        }
        const double beta = w.norm();
        const double floor = image * (eps + noise);

        if (beta <= std::max(options.breakdown_tol * scale, options.noise_margin * floor)) {
            if (d.first_breakdown_step == 0) {
                d.first_breakdown_step = m;
            }
            d.breakdown = true;
            dropped_sq += beta * beta;
            d.residual_norm = std::sqrt(dropped_sq);
            d.complete = true;
            if (options.complete && scale > 0.0) {
                Eigen::VectorXd z(n);
                for (Index i = 0; i < n; ++i) {
                    z[i] = probe_rng.normal();
                }
                Eigen::VectorXd p = op(z);
                const double pn = p.norm();
                orthogonalize(basis, m, p);
                const double rest = p.norm();
                const double probe_floor = options.noise_margin * pn * (eps + noise);
                if (rest > std::max(options.probe_tol * pn, probe_floor)) {
                    d.complete = false;
                    if (m < cap) {
                        noise = std::max(noise, eps * pn / rest);
                        basis.col(m) = p / rest;
                        ++m;
                        ++d.restarts;
                        beta_prev = 0.0;
                        d.breakdown = false;
                        continue;
                    }
                }
            }
            break;
        }
        if (m == cap) {
            d.residual_norm = beta;
            break;
        }
        h(m, k) = beta;
        if (symmetric) {
            h(k, m) = beta;
        }
        basis.col(m) = w / beta;
        noise = std::max(noise, eps * image / beta);
        beta_prev = beta;
        ++m;
    }

    d.steps = m;
    d.breakdown_tol_used = options.breakdown_tol;
    d.basis = basis.leftCols(m);
    d.small_matrix = h.topLeftCorner(m, m);
    d.norm_estimate = scale;
    // Dropped subdiagonals above rounding level: measure the relation itself.
    if (d.breakdown && d.residual_norm > 1e-12 * std::max(1.0, scale)) {
        d.residual_norm = invariance_residual(op, d);
    }
    if (d.breakdown && d.residual_norm > options.inv_tol * std::max(1.0, scale)) {
        d.breakdown = false;
    }
    return d;
}

// The Krylov space of A_mask plus the start vector cannot exceed the
// structural bound. A run that ends without an accepted breakdown, or with
// part of the range uncovered, took a rounding direction for a genuine one;
// retry with a looser tolerance and keep the first run that succeeds.
KrylovDecomposition run_structural(const MaskedOperator& op, Index bound, bool symmetric,
                                   const KrylovOptions& options) {
    const auto ok = [&](const KrylovDecomposition& r) {
        return r.breakdown && (r.complete || !options.complete);
    };
    KrylovOptions o = options;
    KrylovDecomposition first = run_krylov(op, bound, symmetric, o);
    for (int retry = 0; retry < 2 && !ok(first); ++retry) {
        o.breakdown_tol *= 100.0;
        o.noise_margin *= 100.0;
        KrylovDecomposition d = run_krylov(op, bound, symmetric, o);
        if (ok(d)) {
            return d;
        }
    }
    return first;
}

} // namespace

KrylovDecomposition arnoldi(const SparseGraph& g, const SampleSet& mask,
                            const KrylovOptions& options) {
    const MaskedOperator op(g, mask, MaskPattern::columns);
    if (options.max_steps > 0) {
        return run_krylov(op, options.max_steps, false, options);
    }
    return run_structural(op, mask.size() + 1, false, options);
}

KrylovDecomposition lanczos(const SparseGraph& g, const SampleSet& mask,
                            const KrylovOptions& options) {
    const MaskedOperator op(g, mask, MaskPattern::arrow);
    if (options.max_steps > 0) {
        return run_krylov(op, options.max_steps, true, options);
    }
    return run_structural(op, 2 * mask.size() + 1, true, options);
}

namespace {

double condition_number(const Eigen::MatrixXcd& s) {
    if (s.cols() == 0) {
        return 1.0;
    }
    Eigen::VectorXd sv;
    if (s.cols() <= 64) {
        sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(s).singularValues();
    } else {
        sv = Eigen::BDCSVD<Eigen::MatrixXcd>(s).singularValues();
    }
    const double smax = sv.maxCoeff();
    const double smin = sv.minCoeff();
    if (!(smin > 0.0) || !std::isfinite(smax)) {
        return std::numeric_limits<double>::infinity();
    }
    return smax / smin;
}

constexpr double zero_rank_tol = 1e-13;

// Eigenpairs of a general matrix with exact zeros for its numerical null
// space. With range(h) spanned by U, h is similar to [[U^T h U, *], [0, 0]],
// so the zero block is split off and the rest solved recursively. A
// defective zero eigenvalue otherwise comes back at about sqrt(eps) size.
// Null vectors fill the zero columns; a defective zero repeats a direction,
// which leaves the eigenvector matrix singular.
void deflated_eigen(const Eigen::MatrixXd& h, double tol, Eigen::VectorXcd& values,
                    Eigen::MatrixXcd& vectors) {
    const Index m = h.rows();
    values.resize(m);
    vectors.resize(m, m);
    if (m == 0) {
        return;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    Index r = 0;
    while (r < m && sv[r] > tol) {
        ++r;
    }
    if (r == m) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(h);
        if (es.info() != Eigen::Success) {
            throw NumericalError("eigensolver failed");
        }
        values = es.eigenvalues();
        vectors = es.eigenvectors();
        return;
    }
    const Eigen::MatrixXd u = svd.matrixU().leftCols(r);
    Eigen::VectorXcd inner_values;
    Eigen::MatrixXcd inner_vectors;
    deflated_eigen(u.transpose() * h * u, tol, inner_values, inner_vectors);
    values.head(r) = inner_values;
    vectors.leftCols(r) = u.cast<std::complex<double>>() * inner_vectors;
    values.tail(m - r).setZero();
    vectors.rightCols(m - r) = svd.matrixV().rightCols(m - r).cast<std::complex<double>>();
}

} // namespace

SpectralData spectral_factorize(const Eigen::MatrixXd& h, bool symmetric,
                                double cond_threshold) {
    if (h.rows() != h.cols()) {
        throw DimensionError("spectral_factorize: matrix must be square");
    }
    const Index m = h.rows();
    Eigen::VectorXcd values(m);
    Eigen::MatrixXcd vectors(m, m);
    if (symmetric) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        if (es.info() != Eigen::Success) {
            throw NumericalError("symmetric eigensolver failed");
        }
        values = es.eigenvalues().cast<std::complex<double>>();
        vectors = es.eigenvectors().cast<std::complex<double>>();
    } else {
        const double hnorm = m > 0 ? h.norm() : 0.0;
        deflated_eigen(h, zero_rank_tol * hnorm, values, vectors);
    }

    std::vector<Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return std::abs(values[a]) > std::abs(values[b]);
    });
    const double top = m > 0 ? std::abs(values[order.front()]) : 0.0;
    const double tie = 1e-12 * std::max(1.0, top);
    for (std::size_t start = 0; start < order.size();) {
        std::size_t end = start + 1;
        const double lead = std::abs(values[order[start]]);
        while (end < order.size() && lead - std::abs(values[order[end]]) <= tie) {
            ++end;
        }
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end), [&](Index a, Index b) {
                             if (values[a].real() != values[b].real()) {
                                 return values[a].real() > values[b].real();
                             }
                             return values[a].imag() > values[b].imag();
                         });
        start = end;
    }

    SpectralData sd;
    sd.symmetric = symmetric;
    sd.eigenvalues.resize(m);
    sd.eigenvectors.resize(m, m);
    for (Index k = 0; k < m; ++k) {
        const Index src = order[static_cast<std::size_t>(k)];
        sd.eigenvalues[k] = values[src];
        const double norm = vectors.col(src).norm();
        sd.eigenvectors.col(k) = norm > 0.0 ? Eigen::VectorXcd(vectors.col(src) / norm)
                                            : Eigen::VectorXcd(vectors.col(src));
    }
    sd.condition_estimate = symmetric ? 1.0 : condition_number(sd.eigenvectors);
    sd.fallback_flagged = !(sd.condition_estimate <= cond_threshold);
    return sd;
}

SpectralData spectral_factorize(const KrylovDecomposition& d, double cond_threshold) {
    return spectral_factorize(d.small_matrix, d.symmetric, cond_threshold);
}

double estimate_spectral_radius(const SpectralData& sd) {
    if (sd.eigenvalues.size() == 0) {
        throw Error("estimate_spectral_radius: no eigenvalues");
    }
    return std::abs(sd.eigenvalues[0]);
}

double invariance_residual(const MaskedOperator& op, const KrylovDecomposition& d) {
    double sum = 0.0;
    Eigen::VectorXd y;
    for (Index k = 0; k < d.steps; ++k) {
        op.apply(d.basis.col(k), y);
        sum += (y - d.basis * d.small_matrix.col(k)).squaredNorm();
    }
    return std::sqrt(sum);
}

double orthogonality_error(const KrylovDecomposition& d) {
    const Eigen::MatrixXd gram = d.basis.transpose() * d.basis;
    return (gram - Eigen::MatrixXd::Identity(d.steps, d.steps)).cwiseAbs().maxCoeff();
}

} // namespace sampcent
