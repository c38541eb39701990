#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "sampcent/graph.hpp"

namespace sampcent {

/// "name:key=value,key=value", e.g. "er:n=60,p=0.1,seed=1".
struct GeneratorSpec {
    std::string name;
    std::map<std::string, std::string, std::less<>> params;

    static GeneratorSpec parse(std::string_view text);
    std::string to_string() const;
};

/// G(n, p) without self-loops; each ordered (directed) or unordered pair independently.
SparseGraph erdos_renyi(Index n, double p, bool directed, std::uint64_t seed);

/// Undirected preferential attachment: an (m+1)-clique, then each new node
/// links to m distinct earlier nodes chosen with probability proportional to degree.
SparseGraph preferential_attachment(Index n, Index m, std::uint64_t seed);

/// Undirected K_{1,leaves} with center 0.
SparseGraph star_graph(Index leaves);

/// Undirected path 0 - 1 - ... - (n-1).
SparseGraph path_graph(Index n, bool directed = false);

/// Cycle 0 -> 1 -> ... -> (n-1) -> 0.
SparseGraph cycle_graph(Index n, bool directed = false);

/// Two undirected G(n/2, intra_p) clusters on {0..h-1} and {h..n-1} joined by exactly one edge.
SparseGraph two_cluster_bridge(Index n, double intra_p, std::uint64_t seed);

/// Builds the graph named by a spec. Recognized names and keys:
///   er: n, p, seed, directed (default 1)      pa: n, m (default 5), seed
///   star: leaves                              path: n, directed (default 0)
///   cycle: n, directed (default 0)            two-cluster-bridge: n, intra_p, seed
SparseGraph generate(const GeneratorSpec& spec);
SparseGraph generate(std::string_view spec);

} // namespace sampcent
