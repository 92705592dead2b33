#pragma once

#include <cstdint>
#include <string_view>

namespace presist {

/// Counter-based generator: output i of stream k is splitmix64(k + (i+1) * gamma).
/// Any stream can be reproduced from (key, counter) alone, independent of thread layout.
class CounterRng {
public:
    static constexpr std::string_view kName = "splitmix64-ctr/1";
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0) noexcept : key_(key), counter_(counter) {}

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() noexcept { return mix(key_ + (++counter_) * kGamma); }

    /// Uniform integer in [0, bound), bound > 0, without modulo bias.
    std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            __extension__ using u128 = unsigned __int128;
            const u128 m = static_cast<u128>(next()) * bound;
            if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

/// Key of the independent stream number `index` under `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return CounterRng::mix(CounterRng::mix(seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

} // namespace presist
