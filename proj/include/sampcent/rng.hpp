#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace sampcent {

/// Named streams used to derive independent generators from one user seed.
enum class Stream : std::uint64_t {
    sampling = 1,
    krylov_start = 2,
    krylov_probe = 3,
    perron_start = 4,
    generator = 5,
    experiment = 6,
};

/// Seedable, portable 64-bit generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are not portable across library
/// implementations, so integer, uniform and normal variates are produced here.
/// Independent streams come from SplitMix64 applied to (seed, stream id).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, Stream stream) : engine_(derive_seed(seed, stream)) {}

    static std::uint64_t splitmix64(std::uint64_t x) noexcept;
    static std::uint64_t derive_seed(std::uint64_t seed, Stream stream) noexcept;
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t next() { return engine_(); }

    /// Unbiased integer in [0, bound). bound must be positive.
    std::uint64_t uniform_below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    /// Standard normal variate (Box-Muller, pairs cached).
    double normal();

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

} // namespace sampcent
