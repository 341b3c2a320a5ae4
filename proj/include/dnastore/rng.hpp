#pragma once

// Counter-based random streams. Output k of the stream keyed by
// (master_seed, stream_id) is a pure function of the three values, so a
// trial's draws do not depend on which thread runs it.

#include <cmath>
#include <cstdint>

namespace dnastore {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class CounterStream {
public:
    using result_type = std::uint64_t;
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    constexpr CounterStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
        : key_(splitmix64_mix(splitmix64_mix(master_seed ^ 0x6a09e667f3bcc909ULL) + stream_id * kGolden)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept { return splitmix64_mix(key_ + (++counter_) * kGolden); }

    constexpr std::uint64_t counter() const noexcept { return counter_; }

    /// Uniform integer in [0, bound), bound >= 1 (Lemire's multiply-shift
    /// with rejection).
    std::uint64_t below(std::uint64_t bound) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in the open interval (0, 1).
    double open01() noexcept { return (double((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    /// Number of Bernoulli(success) trials up to and including the first
    /// success; success in (0, 1].
    std::uint64_t geometric(double success) noexcept {
        if (success >= 1.0) return 1;
        return 1 + static_cast<std::uint64_t>(std::floor(std::log(open01()) / std::log1p(-success)));
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace dnastore
