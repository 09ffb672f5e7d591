#pragma once

#include <cstdint>
#include <initializer_list>

namespace alloylab {

/// Stable 64-bit hash of a tuple of integers (splitmix64 finalizer chain).
/// Used to derive per-site, per-sample streams independent of iteration order.
std::uint64_t stable_hash(std::initializer_list<std::uint64_t> words) noexcept;

/// Encodes a signed lattice coordinate for hashing.
constexpr std::uint64_t encode_coordinate(int value) noexcept {
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(value));
}

/// splitmix64 generator. Chosen over <random> distributions because their
/// output is implementation-defined and CSV outputs must be bit-reproducible.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;

private:
    std::uint64_t state_;
};

}  // namespace alloylab
