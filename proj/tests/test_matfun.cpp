#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"

#include "sampcent/error.hpp"
#include "sampcent/generators.hpp"
#include "sampcent/matfun.hpp"
#include "sampcent/sampling.hpp"

using namespace sampcent;

namespace {

SampleSet mask_of(std::vector<Index> j, Index n, SampleKind kind = SampleKind::column) {
    SampleSet s;
    s.indices = std::move(j);
    s.n = n;
    s.kind = kind;
    return s;
}

SampleSet full_mask(Index n) {
    std::vector<Index> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), Index{0});
    return mask_of(all, n);
}

SparseGraph one_edge() { return SparseGraph::from_edges(2, std::vector<Edge>{{0, 1}}, true); }

SparseGraph two_cycle() { return SparseGraph::from_edges(2, std::vector<Edge>{{0, 1}}, false); }

// Directed graph with edges only from lower to higher ids.
SparseGraph random_dag(Index n, double p, std::uint64_t seed) {
    const SparseGraph g = oracle::bernoulli_digraph(n, p, seed);
    std::vector<Edge> forward;
    for (const auto& [i, j] : g.entries()) {
        if (i < j) {
            forward.emplace_back(i, j);
        }
    }
    if (forward.empty()) {
        forward.emplace_back(0, 1);
    }
    return SparseGraph::from_edges(n, forward, true);
}

Eigen::VectorXd row_sums(const Eigen::MatrixXd& m) { return m.rowwise().sum(); }

const double cosh1m1 = std::cosh(1.0) - 1.0;
const double e_m1 = std::exp(1.0) - 1.0;

} // namespace

TEST_CASE("2-cycle exponential") {
    const SparseGraph g = two_cycle();
    for (const auto pattern : {MaskPattern::arrow, MaskPattern::columns}) {
        MatfunOptions opts;
        opts.pattern = pattern;
        const MatfunResult r =
            evaluate_masked_function(g, full_mask(2), ScalarFunction::exp_minus_one(1.0), opts);
        CHECK(r.pattern == pattern);
        for (Index i = 0; i < 2; ++i) {
            CHECK(r.diag[i] == doctest::Approx(cosh1m1).epsilon(1e-12));
            CHECK(r.rowsum[i] == doctest::Approx(e_m1).epsilon(1e-12));
        }
    }
    const MatfunResult def = evaluate_masked_function(g, full_mask(2), ScalarFunction::exp_minus_one(1.0));
    CHECK(def.method == MatfunMethod::lanczos);
    CHECK(def.spectral_radius_estimate == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nilpotent column mask") {
    const SparseGraph g = one_edge();
    const SampleSet j = mask_of({1}, 2);
    const MatfunResult r = evaluate_masked_function(g, j, ScalarFunction::exp_minus_one(1.0));
    CHECK(r.method == MatfunMethod::direct_core);
    CHECK_FALSE(r.fallback_reason.empty());
    CHECK(r.diag == Eigen::Vector2d(0.0, 0.0));
    CHECK(r.rowsum == Eigen::Vector2d(1.0, 0.0));

    const MatfunResult d = direct_core_evaluation(g, j, ScalarFunction::exp_minus_one(1.0));
    CHECK(d.diag == Eigen::Vector2d(0.0, 0.0));
    CHECK(d.rowsum == Eigen::Vector2d(1.0, 0.0));

    MatfunOptions strict;
    strict.allow_fallback = false;
    CHECK_THROWS_AS(evaluate_masked_function(g, j, ScalarFunction::exp_minus_one(1.0), strict),
                    NumericalError);
}

TEST_CASE("2-cycle resolvent") {
    for (const auto pattern : {MaskPattern::arrow, MaskPattern::columns}) {
        MatfunOptions opts;
        opts.pattern = pattern;
        const MatfunResult r = evaluate_masked_function(two_cycle(), full_mask(2),
                                                        ScalarFunction::resolvent_minus_one(0.5), opts);
        for (Index i = 0; i < 2; ++i) {
            CHECK(r.diag[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
            CHECK(r.rowsum[i] == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("small parameter limit of the direct core") {
    const double gamma = 1e-8;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const SparseGraph g = oracle::bernoulli_digraph(40, 0.1, seed);
        const Eigen::MatrixXd a = oracle::dense(g);
        const SampleSet j = sample_columns(g, 12, seed, SamplingStrategy::guided);
        const MatfunResult r = direct_core_evaluation(g, j, ScalarFunction::exp_minus_one(gamma));
        for (Index i = 0; i < 40; ++i) {
            double into_j = 0.0;
            for (const Index c : j.indices) {
                into_j += a(i, c);
            }
            CHECK(std::abs(r.diag[i]) <= 1e-15);
            CHECK(std::abs(r.rowsum[i] - gamma * into_j) <= 1e-7 * gamma * std::max(into_j, 1.0));
        }
    }
}

TEST_CASE("direct core agrees with the spectral route") {
    int spectral = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SparseGraph g = oracle::bernoulli_digraph(40, 0.35, seed);
        const SampleSet j = sample_columns(g, 15, seed, SamplingStrategy::guided);
        for (const auto f : {ScalarFunction::exp_minus_one(1.0), ScalarFunction::exp_minus_one(0.3)}) {
            MatfunOptions opts;
            opts.seed = seed;
            const MatfunResult k = evaluate_masked_function(g, j, f, opts);
            const MatfunResult d = direct_core_evaluation(g, j, f, opts);
            CHECK(d.method == MatfunMethod::direct_core);
            if (k.method != MatfunMethod::krylov_spectral) {
                continue;
            }
            ++spectral;
            CHECK(oracle::max_rel_error(k.diag, d.diag) <= 1e-8);
            CHECK(oracle::max_rel_error(k.rowsum, d.rowsum) <= 1e-8);
        }
    }
    // Singular leading blocks legitimately take the dense route.
    CHECK(spectral >= 10);
}

TEST_CASE("row-sampled measures") {
    const SparseGraph u = preferential_attachment(60, 2, 4);
    const SampleSet cols = sample_columns(u, 10, 4, SamplingStrategy::guided);
    SampleSet rows = cols;
    rows.kind = SampleKind::row;
    const ScalarFunction f = ScalarFunction::exp_minus_one(0.5);
    const MatfunResult a = transpose_measures(u, rows, f);
    const MatfunResult b = evaluate_masked_function(u, cols, f);
    CHECK(a.diag == b.diag);
    CHECK(a.rowsum == b.rowsum);

    const MatfunResult e = transpose_measures(one_edge(), mask_of({0}, 2, SampleKind::row),
                                              ScalarFunction::exp_minus_one(1.0));
    CHECK(e.rowsum == Eigen::Vector2d(0.0, 1.0));

    const SparseGraph d = oracle::bernoulli_digraph(40, 0.15, 9);
    const MatfunResult t =
        transpose_measures(d, mask_of(full_mask(40).indices, 40, SampleKind::row), f);
    const MatfunResult s = evaluate_masked_function(d, full_mask(40), f);
    CHECK(oracle::max_rel_error(t.diag, s.diag) <= 1e-8);
    const Eigen::MatrixXd at = oracle::dense(d).transpose();
    CHECK(oracle::max_rel_error(t.rowsum, row_sums(oracle::exp_series(at, 0.5, 80))) <= 1e-8);

    CHECK_THROWS_AS(transpose_measures(d, full_mask(40), f), ConfigError);
}

TEST_CASE("full sampling matches the dense series") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SparseGraph g = erdos_renyi(60, 0.1, true, seed);
        const Eigen::MatrixXd a = oracle::dense(g);
        const Eigen::MatrixXd ref = oracle::exp_series(a, 1.0, 120);
        MatfunOptions opts;
        opts.seed = seed;
        const MatfunResult r =
            evaluate_masked_function(g, full_mask(60), ScalarFunction::exp_minus_one(1.0), opts);
        CHECK(oracle::max_rel_error(r.diag, ref.diagonal()) <= 1e-6);
        CHECK(oracle::max_rel_error(r.rowsum, row_sums(ref)) <= 1e-6);

        const double rho = oracle::spectral_radius(a);
        const double gamma = 0.5 / rho;
        const Eigen::MatrixXd res = oracle::resolvent_minus_one(a, gamma);
        const MatfunResult k = evaluate_masked_function(
            g, full_mask(60), ScalarFunction::resolvent_minus_one(gamma), opts);
        CHECK(oracle::max_rel_error(k.diag, res.diagonal()) <= 1e-6);
        CHECK(oracle::max_rel_error(k.rowsum, row_sums(res)) <= 1e-6);
    }
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const SparseGraph u = preferential_attachment(80, 3, seed);
        const Eigen::MatrixXd ref = oracle::sym_exp_minus_one(oracle::dense(u), 1.0);
        const MatfunResult r =
            evaluate_masked_function(u, full_mask(80), ScalarFunction::exp_minus_one(1.0));
        CHECK(oracle::max_rel_error(r.diag, ref.diagonal()) <= 1e-6);
        CHECK(oracle::max_rel_error(r.rowsum, row_sums(ref)) <= 1e-6);
    }
}

TEST_CASE("method equivalence on random instances") {
    int compared = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Index n = 20 + static_cast<Index>(seed % 4) * 10;
        const SparseGraph g = oracle::bernoulli_digraph(n, 0.3 + 0.02 * static_cast<double>(seed % 5), seed);
        const Index ell = std::min<Index>(5 + static_cast<Index>(seed % 10), g.nonzero_column_count());
        const SampleSet j = sample_columns(g, ell, seed, SamplingStrategy::guided);
        MatfunOptions opts;
        opts.seed = seed;
        const ScalarFunction f = ScalarFunction::exp_minus_one(1.0);
        const MatfunResult k = evaluate_masked_function(g, j, f, opts);
        if (k.method != MatfunMethod::krylov_spectral || k.condition_estimate > 1e6) {
            continue;
        }
        ++compared;
        const MatfunResult d = direct_core_evaluation(g, j, f, opts);
        CHECK(oracle::max_rel_error(k.diag, d.diag) <= 1e-8);
        CHECK(oracle::max_rel_error(k.rowsum, d.rowsum) <= 1e-8);
    }
    CHECK(compared >= 10);
}

TEST_CASE("resolvent identity on the sampled columns") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SparseGraph g = oracle::bernoulli_digraph(50, 0.12, seed);
        const SampleSet j = sample_columns(g, 20, seed, SamplingStrategy::guided);
        const Eigen::MatrixXd am = oracle::column_masked(oracle::dense(g), j.indices);
        const double gamma = 0.5 / std::max(1.0, oracle::spectral_radius(am));
        MatfunOptions opts;
        opts.seed = seed;
        const Eigen::MatrixXd cols =
            masked_function_columns(g, j, ScalarFunction::resolvent_minus_one(gamma), opts);
        Eigen::MatrixXd unit = Eigen::MatrixXd::Zero(50, 20);
        for (Index p = 0; p < 20; ++p) {
            unit(j.indices[static_cast<std::size_t>(p)], p) = 1.0;
        }
        const Eigen::MatrixXd lhs = (Eigen::MatrixXd::Identity(50, 50) - gamma * am) * (cols + unit);
        for (Index p = 0; p < 20; ++p) {
            CHECK((lhs.col(p) - unit.col(p)).norm() <= 1e-8);
        }
    }
}

TEST_CASE("nilpotent termination on DAGs") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Index n = 30;
        const SparseGraph g = random_dag(n, 0.2, seed);
        const SampleSet j = sample_columns(g, std::min<Index>(12, g.nonzero_column_count()), seed,
                                           SamplingStrategy::guided);
        const Eigen::MatrixXd am = oracle::column_masked(oracle::dense(g), j.indices);
        const Eigen::MatrixXd ref = oracle::exp_series(am, 1.0, static_cast<int>(n - 1));
        const MatfunResult r = evaluate_masked_function(g, j, ScalarFunction::exp_minus_one(1.0));
        CHECK(oracle::max_rel_error(r.diag, ref.diagonal()) <= 1e-12);
        CHECK(oracle::max_rel_error(r.rowsum, row_sums(ref)) <= 1e-12);
    }
}

TEST_CASE("column pattern: diagonal vanishes outside the mask") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SparseGraph g = erdos_renyi(70, 0.08, true, seed);
        const SampleSet j = sample_columns(g, 25, seed, SamplingStrategy::guided);
        const MatfunResult r = evaluate_masked_function(g, j, ScalarFunction::exp_minus_one(1.0));
        std::vector<char> in(70, 0);
        for (const Index c : j.indices) {
            in[static_cast<std::size_t>(c)] = 1;
        }
        for (Index i = 0; i < 70; ++i) {
            if (in[static_cast<std::size_t>(i)] == 0) {
                CHECK(r.diag[i] == 0.0);
            }
        }
        const Eigen::MatrixXd am = oracle::column_masked(oracle::dense(g), j.indices);
        const Eigen::MatrixXd ref = oracle::exp_series(am, 1.0, 120);
        CHECK(oracle::max_rel_error(r.diag, ref.diagonal()) <= 1e-8);
        CHECK(oracle::max_rel_error(r.rowsum, row_sums(ref)) <= 1e-8);
    }
}

TEST_CASE("resolvent admissibility") {
    CHECK_NOTHROW(evaluate_masked_function(two_cycle(), full_mask(2),
                                           ScalarFunction::resolvent_minus_one(0.9)));
    CHECK_THROWS_AS(evaluate_masked_function(two_cycle(), full_mask(2),
                                             ScalarFunction::resolvent_minus_one(1.0)),
                    NumericalError);
    MatfunOptions cols;
    cols.pattern = MaskPattern::columns;
    CHECK_THROWS_AS(evaluate_masked_function(cycle_graph(3), full_mask(3),
                                             ScalarFunction::resolvent_minus_one(0.5), cols),
                    NumericalError);
    CHECK_THROWS_AS(direct_core_evaluation(cycle_graph(3), full_mask(3),
                                           ScalarFunction::resolvent_minus_one(0.5)),
                    NumericalError);
}

TEST_CASE("arrow mask against the dense symmetric oracle") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SparseGraph u = preferential_attachment(100, 3, seed);
        const SampleSet j = sample_columns(u, 5 + static_cast<Index>(seed), seed,
                                           SamplingStrategy::guided);
        const Eigen::MatrixXd am = oracle::arrow_masked(oracle::dense(u), j.indices);
        const Eigen::MatrixXd ref = oracle::sym_exp_minus_one(am, 1.0);
        MatfunOptions opts;
        opts.seed = seed;
        const ScalarFunction f = ScalarFunction::exp_minus_one(1.0);
        const MatfunResult l = evaluate_masked_function(u, j, f, opts);
        const MatfunResult d = direct_core_evaluation(u, j, f, opts);
        CHECK(l.method == MatfunMethod::lanczos);
        CHECK(l.pattern == MaskPattern::arrow);
        CHECK(d.method == MatfunMethod::direct_core);
        CHECK(oracle::max_rel_error(l.diag, ref.diagonal()) <= 1e-8);
        CHECK(oracle::max_rel_error(l.rowsum, row_sums(ref)) <= 1e-8);
        CHECK(oracle::max_rel_error(d.diag, ref.diagonal()) <= 1e-8);
        CHECK(oracle::max_rel_error(d.rowsum, row_sums(ref)) <= 1e-8);
        CHECK(masked_spectral_radius(u, j, opts) ==
              doctest::Approx(oracle::spectral_radius(am)).epsilon(1e-10));
    }
}

TEST_CASE("spectral radius of the masked operator") {
    CHECK(masked_spectral_radius(two_cycle(), full_mask(2)) == doctest::Approx(1.0));
    CHECK(masked_spectral_radius(star_graph(3), full_mask(4)) == doctest::Approx(std::sqrt(3.0)));
    CHECK(masked_spectral_radius(cycle_graph(3), full_mask(3)) == doctest::Approx(2.0));
    const SparseGraph d = oracle::bernoulli_digraph(30, 0.2, 3);
    const SampleSet j = sample_columns(d, 10, 3, SamplingStrategy::guided);
    CHECK(masked_spectral_radius(d, j) ==
          doctest::Approx(oracle::spectral_radius(leading_block(d, j))).epsilon(1e-10));
}

TEST_CASE("input errors") {
    const SparseGraph d = oracle::bernoulli_digraph(20, 0.2, 1);
    const ScalarFunction f = ScalarFunction::exp_minus_one(1.0);
    CHECK_THROWS_AS(evaluate_masked_function(d, mask_of({1}, 20, SampleKind::row), f), ConfigError);
    CHECK_THROWS_AS(evaluate_masked_function(d, mask_of({1, 1}, 20), f), ConfigError);
    CHECK_THROWS_AS(evaluate_masked_function(d, mask_of({20}, 20), f), DimensionError);
    CHECK_THROWS_AS(evaluate_masked_function(d, mask_of({1}, 20), ScalarFunction::exp_minus_one(0.0)),
                    ConfigError);
    MatfunOptions arrow;
    arrow.pattern = MaskPattern::arrow;
    CHECK_THROWS_AS(evaluate_masked_function(d, mask_of({1}, 20), f, arrow), ConfigError);
    MatfunOptions tiny;
    tiny.tol.dense_core_cap = 2;
    CHECK_THROWS_AS(direct_core_evaluation(d, mask_of({1, 2, 3}, 20), f, tiny), ConfigError);
}

TEST_CASE("results are reproducible") {
    const SparseGraph g = erdos_renyi(80, 0.08, true, 5);
    const SampleSet j = sample_columns(g, 30, 5, SamplingStrategy::guided);
    MatfunOptions opts;
    opts.seed = 11;
    const MatfunResult a = evaluate_masked_function(g, j, ScalarFunction::exp_minus_one(1.0), opts);
    const MatfunResult b = evaluate_masked_function(g, j, ScalarFunction::exp_minus_one(1.0), opts);
    CHECK(a.diag == b.diag);
    CHECK(a.rowsum == b.rowsum);
    CHECK(a.method == b.method);
    CHECK(a.ell == 30);
    CHECK(a.seed == 11);
}
