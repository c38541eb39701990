#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sampcent/graph.hpp"
#include "sampcent/ranking.hpp"
#include "sampcent/sample_set.hpp"
#include "sampcent/serialize.hpp"

namespace sampcent {

inline constexpr std::string_view tool_version = "0.1.0";

enum class Measure { subgraph, communicability, katz, perron };

std::string_view to_string(Measure m) noexcept;
Measure parse_measure(std::string_view text);

/// "500,1000" or "500..3000" or "500..3000:250" (step defaults to the start).
std::vector<Index> parse_ell_list(std::string_view text);

/// "guided", "random" or "both".
std::vector<SamplingStrategy> parse_strategies(std::string_view text);

struct ExperimentConfig {
    std::optional<std::filesystem::path> input;
    GraphFormat format = GraphFormat::edge_list;
    bool directed = true;
    std::optional<std::string> generator;

    Measure measure = Measure::subgraph;
    std::vector<Index> ell_list;
    std::vector<SamplingStrategy> strategies{SamplingStrategy::guided};
    /// Required for katz; exponential measures default to 1.
    std::optional<double> gamma;
    double epsilon = 0.0;
    std::vector<std::uint64_t> seeds{0};
    /// Trial t of seed s uses seed s + t.
    Index trials = 1;
    Index k = default_report_depth;
    Index dense_cap = 4000;
    /// Krylov dimension for the reference when n exceeds dense_cap (0: min(n, 500)).
    Index krylov_k = 0;

    std::filesystem::path out = ".";
    bool write_json = true;
    bool write_csv = true;
};

struct ExperimentOutcome {
    bool success = false;
    std::string error;
    Json report;         ///< header, config echo, results, timing
    std::string ranking_csv;
    std::string timing_csv;
};

/// Loads or generates the graph, removes self-loops, and for every
/// (ell, seed, trial, strategy) samples, evaluates the measure and ranks it
/// against the reference ranking. Errors stop the loop; results gathered so
/// far are kept and the report is marked failed.
ExperimentOutcome run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Writes report.json, ranking.csv and timing.csv into config.out as requested.
void write_outputs(const ExperimentConfig& config, const ExperimentOutcome& outcome);

Json config_echo(const ExperimentConfig& config);

/// Loads config.input or builds config.generator.
SparseGraph load_graph(const ExperimentConfig& config);

} // namespace sampcent
