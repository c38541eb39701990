#pragma once

#include <cstdint>
#include <vector>

#include "sampcent/graph.hpp"
#include "sampcent/rng.hpp"
#include "sampcent/sample_set.hpp"

namespace sampcent {

/// Running sum c_1 + ... + c_k of the columns selected so far, with an
/// eligibility flag per index.
///
/// Entries are edge counts, so they are kept as exact integers and categorical
/// draws are inverse-CDF lookups on exact prefix sums (Fenwick tree).
class WeightVector {
public:
    explicit WeightVector(Index n);

    /// Frozen weights; every index starts eligible.
    static WeightVector from_weights(const std::vector<std::int64_t>& weights);

    Index size() const noexcept { return static_cast<Index>(weights_.size()); }
    std::int64_t operator[](Index i) const { return weights_[static_cast<std::size_t>(i)]; }
    std::int64_t total() const noexcept { return total_.total(); }
    std::int64_t eligible_total() const noexcept { return eligible_.total(); }
    bool eligible(Index i) const { return flags_[static_cast<std::size_t>(i)] != 0; }

    /// Adds column j of g (one unit at each source of an edge into j).
    void add_column(const SparseGraph& g, Index j);
    void add(Index i, std::int64_t amount);
    void set_eligible(Index i, bool eligible);

    std::vector<double> values() const;

    /// Index drawn with probability weight_i / total over all indices.
    Index draw(Rng& rng) const;
    /// Index drawn with probability proportional to weight_i over eligible indices only.
    Index draw_eligible(Rng& rng) const;

private:
    class Fenwick {
    public:
        explicit Fenwick(Index n) : tree_(static_cast<std::size_t>(n) + 1, 0) {}
        void add(Index i, std::int64_t delta);
        std::int64_t total() const noexcept { return total_; }
        /// Smallest i with prefix_sum(i) > target, for 0 <= target < total().
        Index search(std::int64_t target) const;

    private:
        std::vector<std::int64_t> tree_;
        std::int64_t total_ = 0;
    };

    std::vector<std::int64_t> weights_;
    std::vector<char> flags_;
    Fenwick total_;
    Fenwick eligible_;
};

struct SamplingOptions {
    /// After this many consecutive discarded guided draws the next index is
    /// drawn directly from the eligible-restricted law, which is the law the
    /// discard loop converges to.
    Index max_consecutive_rejections = 64;
};

/// Selects `ell` distinct nonzero columns of g.
///
/// guided: the first column is uniform among the nonzero columns; each later
/// column is drawn proportionally to the running column sum, discarding draws
/// that hit an already chosen index or a zero column. When no eligible index
/// has positive weight the draw is uniform over the remaining nonzero columns
/// and counted in `uniform_fallbacks`.
/// random: `ell` nonzero columns uniformly without replacement.
SampleSet sample_columns(const SparseGraph& g, Index ell, std::uint64_t seed,
                         SamplingStrategy strategy, const SamplingOptions& options = {});

/// Row sampling: column sampling of A^T, returned with kind = row.
SampleSet sample_rows(const SparseGraph& g, Index ell, std::uint64_t seed,
                      SamplingStrategy strategy, const SamplingOptions& options = {});

/// Every nonzero column of g in ascending order.
SampleSet all_nonzero_columns(const SparseGraph& g);

/// Every nonzero row of g in ascending order.
SampleSet all_nonzero_rows(const SparseGraph& g);

/// Checks distinctness, range and the nonzero-column (or row) guarantee.
bool is_valid_sample(const SparseGraph& g, const SampleSet& s);

} // namespace sampcent
