#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sampcent/sample_set.hpp"

namespace sampcent {

inline constexpr Index default_report_depth = 20;

/// Nodes sorted by score, highest first; equal scores in ascending node id.
struct Ranking {
    std::vector<Index> ordered_nodes;
    std::vector<double> scores;
    Index k = default_report_depth;

    bool operator==(const Ranking&) const = default;
};

/// Keeps the first k nodes. k must not exceed the number of scores.
Ranking rank_nodes(const Eigen::VectorXd& scores, Index k = default_report_depth);

/// |top_k(a) intersect top_k(b)|.
Index topk_overlap(const Ranking& a, const Ranking& b, Index k = default_report_depth);

/// Positions p < k holding the same node in both rankings.
Index exact_matches(const Ranking& a, const Ranking& b, Index k = default_report_depth);

struct RankingCandidate {
    std::string label;
    Ranking ranking;
    Index overlap = 0;
    Index exact = 0;
};

struct RankingReport {
    Ranking reference;
    std::vector<RankingCandidate> candidates;
    Index k = default_report_depth;

    void add(std::string label, Ranking ranking);
};

} // namespace sampcent
