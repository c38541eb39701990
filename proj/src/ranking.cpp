#include "sampcent/ranking.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "sampcent/error.hpp"

namespace sampcent {

Ranking rank_nodes(const Eigen::VectorXd& scores, Index k) {
    const Index n = scores.size();
    if (k < 0 || k > n) {
        throw ConfigError("report depth " + std::to_string(k) + " exceeds " + std::to_string(n) +
                          " nodes");
    }
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    const auto before = [&](Index a, Index b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        return a < b;
    };
    std::partial_sort(order.begin(), order.begin() + k, order.end(), before);
    order.resize(static_cast<std::size_t>(k));

    Ranking r;
    r.k = k;
    r.ordered_nodes = std::move(order);
    r.scores.reserve(r.ordered_nodes.size());
    for (const Index i : r.ordered_nodes) {
        r.scores.push_back(scores[i]);
    }
    return r;
}

namespace {

void check_depth(const Ranking& a, const Ranking& b, Index k) {
    if (k < 0 || k > static_cast<Index>(a.ordered_nodes.size()) ||
        k > static_cast<Index>(b.ordered_nodes.size())) {
        throw ConfigError("comparison depth exceeds a ranking's depth");
    }
}

} // namespace

Index topk_overlap(const Ranking& a, const Ranking& b, Index k) {
    check_depth(a, b, k);
    const std::unordered_set<Index> top(a.ordered_nodes.begin(), a.ordered_nodes.begin() + k);
    return std::count_if(b.ordered_nodes.begin(), b.ordered_nodes.begin() + k,
                         [&](Index i) { return top.contains(i); });
}

Index exact_matches(const Ranking& a, const Ranking& b, Index k) {
    check_depth(a, b, k);
    Index count = 0;
    for (Index p = 0; p < k; ++p) {
        count += a.ordered_nodes[static_cast<std::size_t>(p)] ==
                 b.ordered_nodes[static_cast<std::size_t>(p)];
    }
    return count;
}

void RankingReport::add(std::string label, Ranking ranking) {
    RankingCandidate c;
    c.label = std::move(label);
    c.overlap = topk_overlap(reference, ranking, k);
    c.exact = exact_matches(reference, ranking, k);
    c.ranking = std::move(ranking);
    candidates.push_back(std::move(c));
}

} // namespace sampcent
