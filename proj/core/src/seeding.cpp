#include "alloylab/seeding.hpp"

namespace alloylab {

namespace {

constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t stable_hash(std::initializer_list<std::uint64_t> words) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (const std::uint64_t w : words) {
        h = mix(h + 0x9e3779b97f4a7c15ULL + w);
    }
    return h;
}

std::uint64_t SplitMix64::next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
}

double SplitMix64::uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

}  // namespace alloylab
