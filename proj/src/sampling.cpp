#include "sampcent/sampling.hpp"

#include <algorithm>
#include <string>

#include "sampcent/error.hpp"

namespace sampcent {

std::string_view to_string(SampleKind kind) noexcept {
    return kind == SampleKind::column ? "column" : "row";
}

std::string_view to_string(SamplingStrategy strategy) noexcept {
    return strategy == SamplingStrategy::guided ? "guided" : "random";
}

SampleKind parse_sample_kind(std::string_view text) {
    if (text == "column") {
        return SampleKind::column;
    }
    if (text == "row") {
        return SampleKind::row;
    }
    throw ConfigError("unknown sample kind '" + std::string(text) + "'");
}

SamplingStrategy parse_strategy(std::string_view text) {
    if (text == "guided") {
        return SamplingStrategy::guided;
    }
    if (text == "random") {
        return SamplingStrategy::random;
    }
    throw ConfigError("unknown sampling strategy '" + std::string(text) + "'");
}

void WeightVector::Fenwick::add(Index i, std::int64_t delta) {
    total_ += delta;
    for (auto k = static_cast<std::size_t>(i) + 1; k < tree_.size(); k += k & (~k + 1)) {
        tree_[k] += delta;
    }
}

Index WeightVector::Fenwick::search(std::int64_t target) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) {
        step *= 2;
    }
    for (; step > 0; step /= 2) {
        const auto next = pos + step;
        if (next < tree_.size() && tree_[next] <= target) {
            pos = next;
            target -= tree_[next];
        }
    }
    return static_cast<Index>(pos); // 1-based position pos + 1 maps to index pos
}

WeightVector::WeightVector(Index n)
    : weights_(static_cast<std::size_t>(n), 0), flags_(static_cast<std::size_t>(n), 1),
      total_(n), eligible_(n) {}

WeightVector WeightVector::from_weights(const std::vector<std::int64_t>& weights) {
    WeightVector w(static_cast<Index>(weights.size()));
    for (std::size_t i = 0; i < weights.size(); ++i) {
        w.add(static_cast<Index>(i), weights[i]);
    }
    return w;
}

void WeightVector::add(Index i, std::int64_t amount) {
    if (amount < 0 && weights_[static_cast<std::size_t>(i)] + amount < 0) {
        throw Error("WeightVector: weights must stay nonnegative");
    }
    weights_[static_cast<std::size_t>(i)] += amount;
    total_.add(i, amount);
    if (eligible(i)) {
        eligible_.add(i, amount);
    }
}

void WeightVector::add_column(const SparseGraph& g, Index j) {
    for (const Index i : g.column(j)) {
        add(i, 1);
    }
}

void WeightVector::set_eligible(Index i, bool eligible) {
    auto& flag = flags_[static_cast<std::size_t>(i)];
    if ((flag != 0) == eligible) {
        return;
    }
    flag = eligible ? 1 : 0;
    const auto w = weights_[static_cast<std::size_t>(i)];
    eligible_.add(i, eligible ? w : -w);
}

std::vector<double> WeightVector::values() const {
    return {weights_.begin(), weights_.end()};
}

Index WeightVector::draw(Rng& rng) const {
    if (total() <= 0) {
        throw Error("WeightVector::draw: all weights are zero");
    }
    const auto target = static_cast<std::int64_t>(rng.uniform_below(
        static_cast<std::uint64_t>(total())));
    return total_.search(target);
}

Index WeightVector::draw_eligible(Rng& rng) const {
    if (eligible_total() <= 0) {
        throw Error("WeightVector::draw_eligible: no eligible weight");
    }
    const auto target = static_cast<std::int64_t>(rng.uniform_below(
        static_cast<std::uint64_t>(eligible_total())));
    return eligible_.search(target);
}

namespace {

std::vector<Index> nonzero_columns(const SparseGraph& g) {
    std::vector<Index> out;
    for (Index j = 0; j < g.order(); ++j) {
        if (g.in_degree(j) > 0) {
            out.push_back(j);
        }
    }
    return out;
}

SampleSet guided(const SparseGraph& g, const std::vector<Index>& candidates, Index ell,
                 Rng& rng, const SamplingOptions& options, SampleSet out) {
    WeightVector weights(g.order());
    for (Index i = 0; i < g.order(); ++i) {
        if (g.in_degree(i) == 0) {
            weights.set_eligible(i, false);
        }
    }
    auto take = [&](Index j) {
        out.indices.push_back(j);
        weights.set_eligible(j, false);
        weights.add_column(g, j);
    };

    take(candidates[rng.uniform_below(candidates.size())]);
    while (out.size() < ell) {
        if (weights.eligible_total() == 0) {
            std::vector<Index> remaining;
            for (const Index j : candidates) {
                if (weights.eligible(j)) {
                    remaining.push_back(j);
                }
            }
            ++out.uniform_fallbacks;
            take(remaining[rng.uniform_below(remaining.size())]);
            continue;
        }
        Index streak = 0;
        for (;;) {
            const Index i = weights.draw(rng);
            if (weights.eligible(i)) {
                take(i);
                break;
            }
            ++out.rejected_draws;
            if (++streak >= options.max_consecutive_rejections) {
                take(weights.draw_eligible(rng));
                break;
            }
        }
    }
    return out;
}

SampleSet uniform(const std::vector<Index>& candidates, Index ell, Rng& rng, SampleSet out) {
    std::vector<Index> pool = candidates;
    for (Index k = 0; k < ell; ++k) {
        const auto remaining = pool.size() - static_cast<std::size_t>(k);
        const auto pick = static_cast<std::size_t>(k) + rng.uniform_below(remaining);
        std::swap(pool[static_cast<std::size_t>(k)], pool[pick]);
        out.indices.push_back(pool[static_cast<std::size_t>(k)]);
    }
    return out;
}

} // namespace

SampleSet sample_columns(const SparseGraph& g, Index ell, std::uint64_t seed,
                         SamplingStrategy strategy, const SamplingOptions& options) {
    const auto candidates = nonzero_columns(g);
    if (ell < 1) {
        throw ConfigError("sample size must be at least 1");
    }
    if (ell > static_cast<Index>(candidates.size())) {
        throw ConfigError("sample size " + std::to_string(ell) + " exceeds the " +
                          std::to_string(candidates.size()) + " nonzero columns");
    }
    SampleSet out;
    out.kind = SampleKind::column;
    out.strategy = strategy;
    out.seed = seed;
    out.n = g.order();
    out.indices.reserve(static_cast<std::size_t>(ell));
    Rng rng(seed, Stream::sampling);
    if (strategy == SamplingStrategy::guided) {
        return guided(g, candidates, ell, rng, options, std::move(out));
    }
    return uniform(candidates, ell, rng, std::move(out));
}

SampleSet sample_rows(const SparseGraph& g, Index ell, std::uint64_t seed,
                      SamplingStrategy strategy, const SamplingOptions& options) {
    auto s = sample_columns(transpose(g), ell, seed, strategy, options);
    s.kind = SampleKind::row;
    return s;
}

SampleSet all_nonzero_columns(const SparseGraph& g) {
    SampleSet s;
    s.kind = SampleKind::column;
    s.n = g.order();
    s.indices = nonzero_columns(g);
    return s;
}

SampleSet all_nonzero_rows(const SparseGraph& g) {
    auto s = all_nonzero_columns(transpose(g));
    s.kind = SampleKind::row;
    return s;
}

bool is_valid_sample(const SparseGraph& g, const SampleSet& s) {
    std::vector<Index> sorted = s.indices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        return false;
    }
    return std::all_of(sorted.begin(), sorted.end(), [&](Index k) {
        if (k < 0 || k >= g.order()) {
            return false;
        }
        return s.kind == SampleKind::column ? g.in_degree(k) > 0 : g.out_degree(k) > 0;
    });
}

} // namespace sampcent
