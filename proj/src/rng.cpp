#include "sampcent/rng.hpp"

#include <cmath>
#include <numbers>

#include "sampcent/error.hpp"

namespace sampcent {

std::uint64_t Rng::splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t Rng::derive_seed(std::uint64_t seed, Stream stream) noexcept {
    return derive_seed(seed, static_cast<std::uint64_t>(stream));
}

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0xd1b54a32d192ed03ULL));
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
    if (bound == 0) {
        throw Error("uniform_below: bound must be positive");
    }
    // Reject the low (2^64 mod bound) values so every residue is equally likely.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t x = engine_();
        if (x >= threshold) {
            return x % bound;
        }
    }
}

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return z;
    }
    const double u1 = 1.0 - uniform01(); // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    return r * std::cos(theta);
}

} // namespace sampcent
