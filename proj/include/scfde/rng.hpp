#pragma once

#include <complex>
#include <cstdint>

namespace scfde {

namespace detail {

/// 256-layer ziggurat tables for the standard normal (Marsaglia-Tsang
/// layout, 52-bit value draws so index, sign and value bits never overlap).
struct ZigTables {
    static constexpr int layers = 256;
    static constexpr double r = 3.6541528853610088; // rightmost layer edge
    static constexpr double inv_r = 0.27366123732975828;

    double w[layers];
    double f[layers];
    std::uint64_t k[layers];

    ZigTables();
};

extern const ZigTables zig_tables;

} // namespace detail

/// Deterministic substream generator for parallel Monte Carlo.
///
/// A stream is addressed by (master_seed, stream_hi, stream_lo); sweeps use
/// stream_hi for the grid point and stream_lo for the trial index, so every
/// trial sees the same draws no matter how trials are scheduled across
/// workers. State derivation and output mixing follow the SplittableRandom
/// construction (splitmix64 finalizer, per-stream odd gamma).
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_hi,
                 std::uint64_t stream_lo) noexcept {
        constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
        const std::uint64_t base = mix64(master_seed ^ mix64(stream_hi + golden));
        state_ = mix64(base + stream_lo * golden);
        gamma_ = mix64(state_ ^ 0x5851F42D4C957F2DULL) | 1ULL;
    }

    std::uint64_t next_u64() noexcept { return mix64(state_ += gamma_); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1]; safe as a log argument.
    double uniform_pos() noexcept {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform integer in [0, 2^bits) for bits <= 32.
    std::uint32_t bits(int nbits) noexcept {
        return static_cast<std::uint32_t>(next_u64() >> (64 - nbits));
    }

    /// Standard normal N(0,1) via the ziggurat (exact rejection method).
    double normal() noexcept {
        const detail::ZigTables& t = detail::zig_tables;
        for (;;) {
            const std::uint64_t r = next_u64();
            const int idx = static_cast<int>(r & 0xFF);
            const std::uint64_t rabs = r >> 12; // 52 bits
            const double x = static_cast<double>(rabs) * t.w[idx];
            if (rabs < t.k[idx]) return (r >> 8) & 1 ? -x : x;
            const double z = normal_fixup(r, idx, x);
            if (z != 0.0) return z;
        }
    }

    /// Circularly-symmetric complex Gaussian CN(0,1): real and imaginary
    /// parts are independent N(0, 1/2), so E|z|^2 = 1.
    std::complex<double> cgauss() noexcept {
        constexpr double half = 0.70710678118654752440; // sqrt(1/2)
        return {half * normal(), half * normal()};
    }

private:
    static std::uint64_t mix64(std::uint64_t z) noexcept {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    // tail and wedge cases; returns 0.0 to signal a rejected sample
    double normal_fixup(std::uint64_t r, int idx, double x) noexcept;

    std::uint64_t state_;
    std::uint64_t gamma_;
};

} // namespace scfde
