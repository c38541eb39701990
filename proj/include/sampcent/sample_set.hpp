#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace sampcent {

using Index = std::int64_t;

enum class SampleKind { column, row };
enum class SamplingStrategy { guided, random };

std::string_view to_string(SampleKind kind) noexcept;
std::string_view to_string(SamplingStrategy strategy) noexcept;
SampleKind parse_sample_kind(std::string_view text);
SamplingStrategy parse_strategy(std::string_view text);

/// Ordered set of distinct sampled column (or row) indices.
///
/// `indices` keeps selection order: the p-th sampled index defines the p-th
/// position of the permuted leading block in the matrix-function code and the
/// p-th factor pairing in the implicit Perron product.
struct SampleSet {
    std::vector<Index> indices;
    SampleKind kind = SampleKind::column;
    SamplingStrategy strategy = SamplingStrategy::guided;
    std::uint64_t seed = 0;
    Index n = 0;

    /// Number of guided draws that hit a zero eligible weight and were taken
    /// uniformly from the remaining nonzero columns instead.
    Index uniform_fallbacks = 0;
    /// Guided draws discarded because the index was already chosen or its column is zero.
    Index rejected_draws = 0;

    Index size() const noexcept { return static_cast<Index>(indices.size()); }
    bool empty() const noexcept { return indices.empty(); }

    bool operator==(const SampleSet&) const = default;
};

} // namespace sampcent
