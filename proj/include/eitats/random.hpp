#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace eitats {

/// Stateless counter-based stream: every draw is a pure function of
/// (seed, stream, index), so results do not depend on evaluation order or
/// thread count. Mixing uses the splitmix64 finalizer.
class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix(mix(seed ^ 0x9e3779b97f4a7c15ULL) + stream))
    {
    }

    constexpr std::uint64_t bits(std::uint64_t index) const noexcept
    {
        return mix(key_ + 0x9e3779b97f4a7c15ULL * (index + 1));
    }

    /// Uniform on (0, 1): never returns exactly 0, so log() is safe.
    constexpr double uniform(std::uint64_t index) const noexcept
    {
        return (static_cast<double>(bits(index) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by Box-Muller on the uniform pair (2i, 2i+1).
    double normal(std::uint64_t index) const noexcept
    {
        const double u1 = uniform(2 * index);
        const double u2 = uniform(2 * index + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
};

} // namespace eitats
