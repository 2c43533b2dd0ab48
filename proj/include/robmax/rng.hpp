#pragma once

// Splittable random streams.
//
// A stream is identified by a 64-bit key. Child streams are derived from
// (key, label) alone, never from the parent's current position, so any
// computation that asks for child(i) sees the same numbers no matter which
// thread runs it or in which order.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace robmax {

/// SplitMix64 output finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
}

class RngStream {
public:
    static constexpr std::uint64_t kGolden = UINT64_C(0x9E3779B97F4A7C15);

    explicit RngStream(std::uint64_t seed) noexcept : key_(mix64(seed + kGolden)), state_(key_) {}

    [[nodiscard]] static RngStream derive(std::uint64_t seed, std::uint64_t label) noexcept {
        return RngStream(seed).child(label);
    }

    [[nodiscard]] RngStream child(std::uint64_t label) const noexcept {
        RngStream s(0);
        s.key_ = mix64(key_ ^ mix64((label + 1) * kGolden + UINT64_C(0x632BE59BD9B4E019)));
        s.state_ = s.key_;
        return s;
    }

    [[nodiscard]] std::uint64_t key() const noexcept { return key_; }

    std::uint64_t next_u64() noexcept {
        state_ += kGolden;
        return mix64(state_);
    }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal by the Marsaglia polar method; the second variate of
    /// each accepted pair is cached.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    void fill_normal(std::span<double> out) noexcept {
        for (double& x : out) x = normal();
    }

private:
    std::uint64_t key_;
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace robmax
