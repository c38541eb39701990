#include "sampcent/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "sampcent/error.hpp"
#include "sampcent/generators.hpp"
#include "sampcent/matfun.hpp"
#include "sampcent/oracle.hpp"
#include "sampcent/perron.hpp"
#include "sampcent/sampling.hpp"

namespace sampcent {

std::string_view to_string(Measure m) noexcept {
    switch (m) {
    case Measure::subgraph:
        return "subgraph";
    case Measure::communicability:
        return "communicability";
    case Measure::katz:
        return "katz";
    case Measure::perron:
        return "perron";
    }
    return "unknown";
}

Measure parse_measure(std::string_view text) {
    if (text == "subgraph") {
        return Measure::subgraph;
    }
    if (text == "communicability") {
        return Measure::communicability;
    }
    if (text == "katz") {
        return Measure::katz;
    }
    if (text == "perron" || text == "eigenvector") {
        return Measure::perron;
    }
    throw ConfigError("unknown measure '" + std::string(text) + "'");
}

namespace {

Index parse_index(std::string_view text) {
    Index value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

} // namespace

std::vector<Index> parse_ell_list(std::string_view text) {
    std::vector<Index> out;
    const auto range = text.find("..");
    if (range != std::string_view::npos) {
        const Index first = parse_index(text.substr(0, range));
        std::string_view rest = text.substr(range + 2);
        Index step = first;
        const auto colon = rest.find(':');
        if (colon != std::string_view::npos) {
            step = parse_index(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        const Index last = parse_index(rest);
        if (step < 1 || first > last) {
            throw ConfigError("empty sample size range '" + std::string(text) + "'");
        }
        for (Index l = first; l <= last; l += step) {
            out.push_back(l);
        }
    } else {
        while (true) {
            const auto comma = text.find(',');
            out.push_back(parse_index(text.substr(0, comma)));
            if (comma == std::string_view::npos) {
                break;
            }
            text = text.substr(comma + 1);
        }
    }
    for (const Index l : out) {
        if (l < 1) {
            throw ConfigError("sample sizes must be at least 1");
        }
    }
    return out;
}

std::vector<SamplingStrategy> parse_strategies(std::string_view text) {
    if (text == "both") {
        return {SamplingStrategy::guided, SamplingStrategy::random};
    }
    return {parse_strategy(text)};
}

Json config_echo(const ExperimentConfig& c) {
    Json echo;
    if (c.input) {
        echo["input"] = c.input->string();
        echo["format"] = c.format == GraphFormat::edge_list ? "edgelist" : "mtx";
        echo["directed"] = c.directed;
    }
    if (c.generator) {
        echo["generate"] = *c.generator;
    }
    echo["measure"] = std::string(to_string(c.measure));
    echo["ell"] = c.ell_list;
    Json strategies = Json::array();
    for (const auto s : c.strategies) {
        strategies.push_back(std::string(to_string(s)));
    }
    echo["strategies"] = strategies;
    echo["gamma"] = c.gamma ? Json(*c.gamma) : Json(nullptr);
    echo["epsilon"] = c.epsilon;
    echo["seeds"] = c.seeds;
    echo["trials"] = c.trials;
    echo["k"] = c.k;
    echo["dense_cap"] = c.dense_cap;
    echo["krylov_k"] = c.krylov_k;
    return echo;
}

SparseGraph load_graph(const ExperimentConfig& c) {
    if (c.input.has_value() == c.generator.has_value()) {
        throw ConfigError("give exactly one of an input file and a generator spec");
    }
    if (c.input) {
        return read_graph_file(*c.input, c.format, c.directed);
    }
    return generate(*c.generator);
}

namespace {

struct Reference {
    Eigen::VectorXd scores;
    std::string source;
};

ScalarFunction measure_function(const ExperimentConfig& c) {
    switch (c.measure) {
    case Measure::katz:
        if (!c.gamma) {
            throw ConfigError("the katz measure needs an explicit --gamma");
        }
        return ScalarFunction::resolvent_minus_one(*c.gamma);
    case Measure::subgraph:
    case Measure::communicability:
    case Measure::perron:
        break;
    }
    return ScalarFunction::exp_minus_one(c.gamma.value_or(1.0));
}

Reference reference_scores(const SparseGraph& g, const ExperimentConfig& c,
                           const ScalarFunction& f) {
    Reference ref;
    if (c.measure == Measure::perron) {
        const PerronResult p = dense_left_perron(g);
        ref.scores = p.vector;
        ref.source = p.converged ? "power_iteration" : "power_iteration(unconverged)";
        return ref;
    }
    const bool diag = c.measure == Measure::subgraph;
    if (g.order() <= c.dense_cap) {
        const DenseMatrix fa = dense_matfun(dense_adjacency(g, c.dense_cap), f, c.dense_cap);
        ref.scores = diag ? Eigen::VectorXd(fa.diagonal()) : Eigen::VectorXd(fa.rowwise().sum());
        ref.source = "dense_oracle";
        return ref;
    }
    const Index k = c.krylov_k > 0 ? std::min(c.krylov_k, g.order()) : std::min<Index>(g.order(), 500);
    const KrylovFullResult kr = krylov_full_matfun(g, k, f, c.seeds.front());
    ref.scores = diag ? kr.diag : kr.rowsum;
    ref.source = "krylov_full(k=" + std::to_string(kr.steps) + ")";
    return ref;
}

struct TimingRow {
    std::vector<double> seconds;
};

std::string timing_table(const std::map<std::pair<Index, std::string>, TimingRow>& rows,
                         Json& timing_json) {
    std::ostringstream csv;
    csv << "ell,strategy,runs,mean_s,max_s,min_s\n";
    timing_json = Json::array();
    for (const auto& [key, row] : rows) {
        const auto& s = row.seconds;
        if (s.empty()) {
            continue;
        }
        double sum = 0.0;
        for (const double x : s) {
            sum += x;
        }
        const double mean = sum / static_cast<double>(s.size());
        const double mx = *std::max_element(s.begin(), s.end());
        const double mn = *std::min_element(s.begin(), s.end());
        csv << key.first << ',' << key.second << ',' << s.size() << ',' << format_double(mean)
            << ',' << format_double(mx) << ',' << format_double(mn) << '\n';
        timing_json.push_back(Json{{"ell", key.first},
                                   {"strategy", key.second},
                                   {"runs", s.size()},
                                   {"mean_s", mean},
                                   {"max_s", mx},
                                   {"min_s", mn}});
    }
    return csv.str();
}

} // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& c, std::ostream* log) {
    ExperimentOutcome outcome;
    outcome.report["tool_version"] = std::string(tool_version);
    outcome.report["config_echo"] = config_echo(c);

    Json results = Json::array();
    std::map<std::pair<Index, std::string>, TimingRow> timing;
    std::optional<SparseGraph> graph;
    std::optional<RankingReport> report;
    try {
        if (c.ell_list.empty()) {
            throw ConfigError("no sample sizes given");
        }
        if (c.trials < 1 || c.seeds.empty() || c.k < 1) {
            throw ConfigError("trials, seeds and k must be positive");
        }
        const SelfLoopRemoval cleaned = remove_self_loops(load_graph(c));
        graph = cleaned.graph;
        const SparseGraph& g = *graph;
        outcome.report["graph"] = Json{{"n", g.order()},
                                       {"directed", g.directed()},
                                       {"stored_entries", g.edge_count()},
                                       {"self_loops_removed", cleaned.removed},
                                       {"duplicates_collapsed", g.duplicates()}};
        if (c.k > g.order()) {
            throw ConfigError("report depth exceeds the number of nodes");
        }
        const ScalarFunction f = measure_function(c);
        const Reference ref = reference_scores(g, c, f);
        outcome.report["reference_source"] = ref.source;
        report.emplace();
        report->k = c.k;
        report->reference = rank_nodes(ref.scores, c.k);
        if (log != nullptr) {
            *log << "graph n=" << g.order() << " entries=" << g.edge_count()
                 << " reference=" << ref.source << '\n';
        }

        for (const Index ell : c.ell_list) {
            for (const std::uint64_t base_seed : c.seeds) {
                for (Index t = 0; t < c.trials; ++t) {
                    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(t);
                    for (const SamplingStrategy strategy : c.strategies) {
                        const auto start = std::chrono::steady_clock::now();
                        Json rec{{"ell", ell},
                                 {"strategy", std::string(to_string(strategy))},
                                 {"seed", seed}};
                        const SampleSet cols = sample_columns(g, ell, seed, strategy);
                        rec["uniform_fallbacks"] = cols.uniform_fallbacks;
                        Eigen::VectorXd scores;
                        if (c.measure == Measure::perron) {
                            PerronConfig pc;
                            pc.epsilon = c.epsilon;
                            pc.seed = seed;
                            PerronResult pr;
                            if (g.directed()) {
                                pr = left_perron(g, cols, sample_rows(g, ell, seed, strategy), pc);
                            } else {
                                pr = symmetric_perron(g, cols, pc);
                            }
                            rec["method"] = "power_iteration";
                            rec["iterations"] = pr.iterations;
                            rec["converged"] = pr.converged;
                            rec["eigenvalue_estimate"] = pr.eigenvalue_estimate;
                            rec["warning"] = pr.warning;
                            scores = std::move(pr.vector);
                        } else {
                            MatfunOptions mo;
                            mo.seed = seed;
                            MatfunResult mr = evaluate_masked_function(g, cols, f, mo);
                            rec["method"] = std::string(to_string(mr.method));
                            rec["pattern"] = std::string(to_string(mr.pattern));
                            rec["spectral_radius_estimate"] = mr.spectral_radius_estimate;
                            rec["krylov_steps"] = mr.krylov_steps;
                            rec["fallback_reason"] = mr.fallback_reason;
                            scores = c.measure == Measure::subgraph ? std::move(mr.diag)
                                                                    : std::move(mr.rowsum);
                        }
                        const std::chrono::duration<double> elapsed =
                            std::chrono::steady_clock::now() - start;
                        const std::string label = std::string(to_string(strategy)) + "-l" +
                                                  std::to_string(ell) + "-s" + std::to_string(seed);
                        report->add(label, rank_nodes(scores, c.k));
                        const auto& cand = report->candidates.back();
                        rec["label"] = label;
                        rec["overlap"] = cand.overlap;
                        rec["exact"] = cand.exact;
                        rec["ranking"] = to_json(cand.ranking, g);
                        results.push_back(std::move(rec));
                        timing[{ell, std::string(to_string(strategy))}].seconds.push_back(
                            elapsed.count());
                        if (log != nullptr) {
                            *log << label << " overlap@" << c.k << "=" << cand.overlap
                                 << " exact@" << c.k << "=" << cand.exact << '\n';
                        }
                    }
                }
            }
        }
        outcome.success = true;
    } catch (const std::exception& e) {
        outcome.error = e.what();
        if (log != nullptr) {
            *log << "error: " << e.what() << '\n';
        }
    }

    outcome.report["status"] = outcome.success ? "completed" : "failed";
    if (!outcome.success) {
        outcome.report["error"] = outcome.error;
    }
    if (report && graph) {
        outcome.report["reference"] = to_json(report->reference, *graph);
        std::ostringstream csv;
        write_csv(csv, *report, *graph);
        outcome.ranking_csv = csv.str();
    }
    outcome.report["results"] = std::move(results);
    Json timing_json;
    outcome.timing_csv = timing_table(timing, timing_json);
    outcome.report["timing"] = std::move(timing_json);
    return outcome;
}

void write_outputs(const ExperimentConfig& c, const ExperimentOutcome& outcome) {
    std::filesystem::create_directories(c.out);
    const auto write = [&](const char* name, const std::string& text) {
        std::ofstream out(c.out / name, std::ios::binary);
        if (!out) {
            throw Error("cannot write " + (c.out / name).string());
        }
        out << text;
        if (!outcome.success) {
            // Marker for consumers that only read the CSV files.
            out << "# FAILED: " << outcome.error << '\n';
        }
    };
    if (c.write_json) {
        std::ofstream out(c.out / "report.json", std::ios::binary);
        if (!out) {
            throw Error("cannot write " + (c.out / "report.json").string());
        }
        out << outcome.report.dump(2) << '\n';
    }
    if (c.write_csv) {
        write("ranking.csv", outcome.ranking_csv);
        write("timing.csv", outcome.timing_csv);
    }
}

} // namespace sampcent
