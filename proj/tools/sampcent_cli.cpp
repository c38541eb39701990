// Command-line driver: seeded sampling experiments, single evaluations and
// graph generation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sampcent/error.hpp"
#include "sampcent/experiment.hpp"
#include "sampcent/generators.hpp"
#include "sampcent/matfun.hpp"
#include "sampcent/perron.hpp"
#include "sampcent/sampling.hpp"
#include "sampcent/serialize.hpp"

namespace sc = sampcent;

namespace {

std::uint64_t default_seed() {
    const char* env = std::getenv("SAMPLED_CENTRALITY_SEED");
    if (env == nullptr || *env == '\0') {
        return 0;
    }
    try {
        return std::stoull(env);
    } catch (const std::exception&) {
        throw sc::ConfigError(std::string("SAMPLED_CENTRALITY_SEED is not an integer: ") + env);
    }
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoull(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw sc::ConfigError("bad seed '" + item + "'");
        }
    }
    if (out.empty()) {
        throw sc::ConfigError("no seeds given");
    }
    return out;
}

struct GraphArgs {
    std::string input;
    std::string format = "edgelist";
    bool directed = false;
    std::string generator;

    void attach(CLI::App* cmd) {
        cmd->add_option("--input", input, "Edge-list or Matrix Market file");
        cmd->add_option("--format", format, "edgelist or mtx")->capture_default_str();
        cmd->add_flag("--directed", directed, "Treat edge-list input as directed");
        cmd->add_option("--generate", generator, "Generator spec, e.g. er:n=60,p=0.1,seed=1");
    }

    void fill(sc::ExperimentConfig& c) const {
        if (!input.empty()) {
            c.input = input;
        }
        if (!generator.empty()) {
            c.generator = generator;
        }
        c.format = sc::parse_graph_format(format);
        c.directed = directed;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sampled spectral centrality"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Seeded sampling experiment against a reference ranking");
    GraphArgs run_graph;
    run_graph.attach(run);
    std::string measure = "subgraph";
    std::string ell = "";
    std::string strategy = "guided";
    std::optional<double> gamma;
    double epsilon = 0.0;
    std::optional<std::uint64_t> seed;
    std::string seeds;
    sc::Index trials = 1;
    sc::Index k = sc::default_report_depth;
    sc::Index dense_cap = 4000;
    sc::Index krylov_k = 0;
    std::string out = ".";
    bool json_only = false;
    bool csv_only = false;
    bool quiet = false;
    run->add_option("--measure", measure, "subgraph, communicability, katz or perron")
        ->capture_default_str();
    run->add_option("--ell", ell, "Sample sizes: 200 or 100,200 or 500..3000[:step]")->required();
    run->add_option("--strategy", strategy, "guided, random or both")->capture_default_str();
    run->add_option("--gamma", gamma, "Function parameter (required for katz)");
    run->add_option("--epsilon", epsilon, "Perron perturbation")->capture_default_str();
    run->add_option("--seed", seed, "Seed (default: SAMPLED_CENTRALITY_SEED or 0)");
    run->add_option("--seeds", seeds, "Comma-separated seeds");
    run->add_option("--trials", trials, "Trials per seed")->capture_default_str();
    run->add_option("--k", k, "Report depth")->capture_default_str();
    run->add_option("--dense-cap", dense_cap, "Largest n for the dense oracle")
        ->capture_default_str();
    run->add_option("--krylov-k", krylov_k, "Krylov dimension of the reference above the cap");
    run->add_option("--out", out, "Output directory")->capture_default_str();
    run->add_flag("--json", json_only, "Write only report.json");
    run->add_flag("--csv", csv_only, "Write only the CSV files");
    run->add_flag("--quiet", quiet, "No progress output");

    // score
    auto* score = app.add_subcommand("score", "One sampled evaluation, per-node scores");
    GraphArgs score_graph;
    score_graph.attach(score);
    std::string score_measure = "subgraph";
    sc::Index score_ell = 0;
    std::string score_strategy = "guided";
    std::optional<double> score_gamma;
    double score_epsilon = 0.0;
    std::optional<std::uint64_t> score_seed;
    std::string pattern;
    bool from_rows = false;
    std::string score_out;
    bool score_csv = false;
    score->add_option("--measure", score_measure, "subgraph, communicability, katz or perron")
        ->capture_default_str();
    score->add_option("--ell", score_ell, "Sample size (0: every nonzero column)")
        ->capture_default_str();
    score->add_option("--strategy", score_strategy, "guided or random")->capture_default_str();
    score->add_option("--gamma", score_gamma, "Function parameter (required for katz)");
    score->add_option("--epsilon", score_epsilon, "Perron perturbation")->capture_default_str();
    score->add_option("--seed", score_seed, "Seed (default: SAMPLED_CENTRALITY_SEED or 0)");
    score->add_option("--pattern", pattern, "Mask pattern: columns or arrow");
    score->add_flag("--rows", from_rows, "Sample rows and score A^T (matrix functions only)");
    score->add_option("--out", score_out, "Output file (default: stdout)");
    score->add_flag("--csv", score_csv, "CSV instead of JSON");

    // generate
    auto* gen = app.add_subcommand("generate", "Write a generated graph as an edge list");
    std::string gen_spec;
    std::string gen_out;
    gen->add_option("spec", gen_spec, "Generator spec")->required();
    gen->add_option("--out", gen_out, "Output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            sc::ExperimentConfig c;
            run_graph.fill(c);
            c.measure = sc::parse_measure(measure);
            c.ell_list = sc::parse_ell_list(ell);
            c.strategies = sc::parse_strategies(strategy);
            c.gamma = gamma;
            c.epsilon = epsilon;
            if (!seeds.empty()) {
                c.seeds = parse_seeds(seeds);
            } else {
                c.seeds = {seed.value_or(default_seed())};
            }
            c.trials = trials;
            c.k = k;
            c.dense_cap = dense_cap;
            c.krylov_k = krylov_k;
            c.out = out;
            if (json_only || csv_only) {
                c.write_json = json_only;
                c.write_csv = csv_only;
            }
            const sc::ExperimentOutcome outcome = sc::run_experiment(c, quiet ? nullptr : &std::cerr);
            sc::write_outputs(c, outcome);
            return outcome.success ? 0 : 1;
        }

        if (score->parsed()) {
            sc::ExperimentConfig c;
            score_graph.fill(c);
            const sc::SparseGraph g = sc::remove_self_loops(sc::load_graph(c)).graph;
            const sc::Measure m = sc::parse_measure(score_measure);
            const std::uint64_t s = score_seed.value_or(default_seed());
            const sc::SamplingStrategy strat = sc::parse_strategy(score_strategy);
            const auto sample = [&](bool rows) {
                if (score_ell == 0) {
                    return rows ? sc::all_nonzero_rows(g) : sc::all_nonzero_columns(g);
                }
                return rows ? sc::sample_rows(g, score_ell, s, strat)
                            : sc::sample_columns(g, score_ell, s, strat);
            };
            std::ostringstream text;
            if (m == sc::Measure::perron) {
                sc::PerronConfig pc;
                pc.epsilon = score_epsilon;
                pc.seed = s;
                const sc::PerronResult r = g.directed()
                                               ? sc::left_perron(g, sample(false), sample(true), pc)
                                               : sc::symmetric_perron(g, sample(false), pc);
                if (score_csv) {
                    sc::write_csv(text, r, g);
                } else {
                    text << sc::to_json(r, g).dump(2) << '\n';
                }
            } else {
                if (m == sc::Measure::katz && !score_gamma) {
                    throw sc::ConfigError("the katz measure needs an explicit --gamma");
                }
                const sc::ScalarFunction f =
                    m == sc::Measure::katz ? sc::ScalarFunction::resolvent_minus_one(*score_gamma)
                                           : sc::ScalarFunction::exp_minus_one(score_gamma.value_or(1.0));
                sc::MatfunOptions mo;
                mo.seed = s;
                if (!pattern.empty()) {
                    mo.pattern = pattern == "arrow" ? sc::MaskPattern::arrow
                                 : pattern == "columns"
                                     ? sc::MaskPattern::columns
                                     : throw sc::ConfigError("unknown pattern '" + pattern + "'");
                }
                const sc::MatfunResult r = from_rows
                                               ? sc::transpose_measures(g, sample(true), f, mo)
                                               : sc::evaluate_masked_function(g, sample(false), f, mo);
                if (score_csv) {
                    sc::write_csv(text, r, g);
                } else {
                    text << sc::to_json(r, g).dump(2) << '\n';
                }
            }
            if (score_out.empty()) {
                std::cout << text.str();
            } else {
                std::ofstream f(score_out, std::ios::binary);
                if (!f) {
                    throw sc::Error("cannot write " + score_out);
                }
                f << text.str();
            }
            return 0;
        }

        if (gen->parsed()) {
            const sc::SparseGraph g = sc::generate(gen_spec);
            if (gen_out.empty()) {
                sc::write_edge_list(std::cout, g);
            } else {
                std::ofstream f(gen_out, std::ios::binary);
                if (!f) {
                    throw sc::Error("cannot write " + gen_out);
                }
                sc::write_edge_list(f, g);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
