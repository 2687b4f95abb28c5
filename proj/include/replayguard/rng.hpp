#pragma once

#include <cstdint>
#include <span>

namespace replayguard {

// xorshift64* (Vigna): 64-bit xorshift scrambled by an odd multiplier.
// Not cryptographic; used so runs replay bit-identically across platforms,
// which std::mt19937 + distribution headers do not guarantee.
class Xorshift64Star {
public:
    explicit Xorshift64Star(std::uint64_t seed)
        : state_(seed != 0 ? seed : 0x9E3779B97F4A7C15ull) {}

    std::uint64_t next_u64() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CEE5Dull;
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, bound); bound 0 yields 0.
    std::uint64_t uniform(std::uint64_t bound) {
        return bound == 0 ? 0 : next_u64() % bound;
    }

    bool chance(double p) { return next_double() < p; }

    void fill_bytes(std::span<std::uint8_t> out) {
        for (auto& b : out) b = static_cast<std::uint8_t>(next_u64() >> 56);
    }

private:
    std::uint64_t state_;
};

}  // namespace replayguard
