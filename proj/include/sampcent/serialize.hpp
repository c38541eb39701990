#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "sampcent/graph.hpp"
#include "sampcent/matfun.hpp"
#include "sampcent/perron.hpp"
#include "sampcent/ranking.hpp"
#include "sampcent/sample_set.hpp"

namespace sampcent {

using Json = nlohmann::ordered_json;

/// {kind, strategy, seed, n, indices, uniform_fallbacks, rejected_draws}
Json to_json(const SampleSet& s);
SampleSet sample_set_from_json(const Json& j);

/// Metadata plus per-node {node, label, diag, rowsum}.
Json to_json(const MatfunResult& r, const SparseGraph& g);
/// Metadata plus per-node {node, label, score}.
Json to_json(const PerronResult& r, const SparseGraph& g);

/// Ranking entries carry dataset labels next to internal ids.
Json to_json(const Ranking& r, const SparseGraph& g);
Json to_json(const RankingReport& r, const SparseGraph& g);

/// node,label,diag,rowsum
void write_csv(std::ostream& out, const MatfunResult& r, const SparseGraph& g);
/// node,label,score
void write_csv(std::ostream& out, const PerronResult& r, const SparseGraph& g);
/// One row per rank position and one column per configuration (reference
/// first) holding node labels, then overlap and exact-match rows.
void write_csv(std::ostream& out, const RankingReport& r, const SparseGraph& g);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

} // namespace sampcent
