#include "sampcent/serialize.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "sampcent/error.hpp"

namespace sampcent {

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

namespace {

// JSON has no infinities; they are written as strings.
Json number(double x) {
    if (std::isfinite(x)) {
        return x;
    }
    return format_double(x);
}

Json function_json(const ScalarFunction& f) {
    return Json{{"kind", std::string(to_string(f.kind))}, {"gamma", f.gamma}};
}

} // namespace

Json to_json(const SampleSet& s) {
    return Json{{"kind", std::string(to_string(s.kind))},
                {"strategy", std::string(to_string(s.strategy))},
                {"seed", s.seed},
                {"n", s.n},
                {"indices", s.indices},
                {"uniform_fallbacks", s.uniform_fallbacks},
                {"rejected_draws", s.rejected_draws}};
}

SampleSet sample_set_from_json(const Json& j) {
    try {
        SampleSet s;
        s.kind = parse_sample_kind(j.at("kind").get<std::string>());
        s.strategy = parse_strategy(j.at("strategy").get<std::string>());
        s.seed = j.at("seed").get<std::uint64_t>();
        s.n = j.at("n").get<Index>();
        s.indices = j.at("indices").get<std::vector<Index>>();
        s.uniform_fallbacks = j.value("uniform_fallbacks", Index{0});
        s.rejected_draws = j.value("rejected_draws", Index{0});
        return s;
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("malformed sample record: ") + e.what());
    }
}

Json to_json(const MatfunResult& r, const SparseGraph& g) {
    Json nodes = Json::array();
    for (Index i = 0; i < r.diag.size(); ++i) {
        nodes.push_back(
            Json{{"node", i}, {"label", g.label(i)}, {"diag", r.diag[i]}, {"rowsum", r.rowsum[i]}});
    }
    return Json{{"method", std::string(to_string(r.method))},
                {"pattern", std::string(to_string(r.pattern))},
                {"function", function_json(r.f)},
                {"ell", r.ell},
                {"seed", r.seed},
                {"spectral_radius_estimate", number(r.spectral_radius_estimate)},
                {"gamma_times_rho", number(r.f.gamma * r.spectral_radius_estimate)},
                {"condition_estimate", number(r.condition_estimate)},
                {"krylov_steps", r.krylov_steps},
                {"first_breakdown_step", r.first_breakdown_step},
                {"restarts", r.restarts},
                {"fallback_reason", r.fallback_reason},
                {"nodes", std::move(nodes)}};
}

Json to_json(const PerronResult& r, const SparseGraph& g) {
    Json nodes = Json::array();
    for (Index i = 0; i < r.vector.size(); ++i) {
        nodes.push_back(Json{{"node", i}, {"label", g.label(i)}, {"score", r.vector[i]}});
    }
    return Json{{"ell", r.ell},
                {"epsilon", r.epsilon},
                {"iterations", r.iterations},
                {"converged", r.converged},
                {"eigenvalue_estimate", number(r.eigenvalue_estimate)},
                {"residual", number(r.residual)},
                {"restarts", r.restarts},
                {"unique_dominant", r.unique_dominant},
                {"warning", r.warning},
                {"nodes", std::move(nodes)}};
}

Json to_json(const Ranking& r, const SparseGraph& g) {
    Json entries = Json::array();
    for (std::size_t p = 0; p < r.ordered_nodes.size(); ++p) {
        const Index i = r.ordered_nodes[p];
        entries.push_back(Json{{"node", i}, {"label", g.label(i)}, {"score", number(r.scores[p])}});
    }
    return Json{{"k", r.k}, {"tie_break", "ascending node id"}, {"top", std::move(entries)}};
}

Json to_json(const RankingReport& r, const SparseGraph& g) {
    Json candidates = Json::array();
    for (const auto& c : r.candidates) {
        candidates.push_back(Json{{"label", c.label},
                                  {"overlap", c.overlap},
                                  {"exact", c.exact},
                                  {"ranking", to_json(c.ranking, g)}});
    }
    return Json{{"k", r.k}, {"reference", to_json(r.reference, g)}, {"candidates", candidates}};
}

void write_csv(std::ostream& out, const MatfunResult& r, const SparseGraph& g) {
    out << "node,label,diag,rowsum\n";
    for (Index i = 0; i < r.diag.size(); ++i) {
        out << i << ',' << g.label(i) << ',' << format_double(r.diag[i]) << ','
            << format_double(r.rowsum[i]) << '\n';
    }
}

void write_csv(std::ostream& out, const PerronResult& r, const SparseGraph& g) {
    out << "node,label,score\n";
    for (Index i = 0; i < r.vector.size(); ++i) {
        out << i << ',' << g.label(i) << ',' << format_double(r.vector[i]) << '\n';
    }
}

void write_csv(std::ostream& out, const RankingReport& r, const SparseGraph& g) {
    out << "rank,reference";
    for (const auto& c : r.candidates) {
        out << ',' << c.label;
    }
    out << '\n';
    for (Index p = 0; p < r.k; ++p) {
        const auto at = [&](const Ranking& rk) -> std::string {
            if (p >= static_cast<Index>(rk.ordered_nodes.size())) {
                return "";
            }
            return std::to_string(g.label(rk.ordered_nodes[static_cast<std::size_t>(p)]));
        };
        out << p + 1 << ',' << at(r.reference);
        for (const auto& c : r.candidates) {
            out << ',' << at(c.ranking);
        }
        out << '\n';
    }
    out << "overlap," << r.k;
    for (const auto& c : r.candidates) {
        out << ',' << c.overlap;
    }
    out << "\nexact," << r.k;
    for (const auto& c : r.candidates) {
        out << ',' << c.exact;
    }
    out << '\n';
}

} // namespace sampcent
