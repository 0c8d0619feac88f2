#include "evpos/rng.hpp"

#include <cmath>
#include <numbers>

namespace evpos {

namespace {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

}  // namespace

CounterRng CounterRng::split(std::uint64_t index) const noexcept {
    // Child stream key depends on the parent stream and the index only.
    return CounterRng(seed_, mix64(stream_ * golden + index + 1));
}

std::uint64_t CounterRng::next_u64() noexcept {
    const std::uint64_t key = mix64(seed_ ^ mix64(stream_ + golden));
    return mix64(key + golden * ++counter_);
}

double CounterRng::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::int64_t CounterRng::uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
}

double CounterRng::normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace evpos
