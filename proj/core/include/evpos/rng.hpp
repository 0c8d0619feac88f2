#pragma once

#include <cstdint>
#include <string_view>

namespace evpos {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so substreams for independent trials are
/// derived without sharing state and results are platform independent.
///
/// The mixing function is the SplitMix64 finalizer applied to a
/// Weyl-sequence key; doubles use the top 53 bits.
class CounterRng {
public:
    static constexpr std::string_view algorithm = "splitmix64-counter/v1";

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : seed_(seed), stream_(stream) {}

    /// Independent substream, e.g. one per trial index.
    [[nodiscard]] CounterRng split(std::uint64_t index) const noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform in [0, 1).
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;
    /// Standard normal via Box-Muller (one value per call, two draws).
    double normal() noexcept;

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

}  // namespace evpos
