#pragma once

#include <cstdint>
#include <cstddef>

namespace mlbels {

/// splitmix64 generator. Chosen over std::mt19937 so that seeded runs are
/// bit-identical across standard libraries and platforms.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// uniform in [0, 1)
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// uniform in [-1, 1)
    double symmetric() { return 2.0 * unit() - 1.0; }

    /// uniform integer in [0, n)
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)); }

    /// uniform in [lo, hi)
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    std::uint64_t state_;
};

/// Stateless mix for deriving independent per-chunk / per-label seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    UniformSource s(a ^ (b * 0xD6E8FEB86659FD93ull + 0x2545F4914F6CDD1Dull));
    return s.next_u64();
}

} // namespace mlbels
