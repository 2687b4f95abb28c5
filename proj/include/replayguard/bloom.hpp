#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "replayguard/errors.hpp"

namespace replayguard {

// How a filter derives bit positions from a tag.
enum class BloomIndexing : std::uint8_t {
    HashFamily,    // first k members of the 32-bit family, each mod m
    Sha1Truncate,  // single index: first 4 SHA-1 digest bytes mod m
};

// Serialized filter header: m (u32) + k (u8) + inserted (u32) + epoch (u32).
inline constexpr std::size_t kBloomHeaderBytes = 13;

// Plain bit-array Bloom filter. No deletions; the only way bits clear is an
// epoch reset, which re-opens a replay window and is therefore counted.
class BloomFilter {
public:
    // Family-indexed filter with m bits and k hash functions (1 <= k <= 9).
    BloomFilter(std::uint32_t bits, unsigned hash_count);

    // Single-hash variant: k = 1, index from SHA-1 truncation.
    static BloomFilter single_hash(std::uint32_t bits);

    // Membership test plus insertion in one step: true iff every indexed bit
    // was already set; all indexed bits are set afterwards either way.
    bool query_insert(std::span<const std::uint8_t> tag);

    // Membership test alone; never mutates.
    bool contains(std::span<const std::uint8_t> tag) const;

    // Clears every bit, zeroes the insertion and ones counts, bumps epoch.
    void reset();

    // Applies the reset policy: reset iff fp_exact at the current insertion
    // count exceeds fp_max. Returns whether a reset happened.
    bool maybe_epoch_reset(double fp_max);

    std::uint32_t bit_count() const { return bits_; }
    unsigned hash_count() const { return hash_count_; }
    std::uint32_t inserted() const { return inserted_; }
    std::uint32_t ones() const { return ones_; }
    std::uint32_t epoch() const { return epoch_; }
    BloomIndexing indexing() const { return indexing_; }

    // m, k, inserted, epoch (big-endian) followed by ceil(m/8) data bytes,
    // most significant bit first.
    std::vector<std::uint8_t> serialize() const;

private:
    BloomFilter(std::uint32_t bits, unsigned hash_count, BloomIndexing indexing);

    std::vector<std::uint32_t> indices_for(std::span<const std::uint8_t> tag) const;
    bool get_bit(std::uint32_t i) const { return (data_[i >> 3] & (0x80u >> (i & 7))) != 0; }
    void set_bit(std::uint32_t i) { data_[i >> 3] |= static_cast<std::uint8_t>(0x80u >> (i & 7)); }

    std::uint32_t bits_;
    unsigned hash_count_;
    BloomIndexing indexing_;
    std::vector<std::uint8_t> data_;  // MSB-first bit order
    std::uint32_t inserted_ = 0;
    std::uint32_t ones_ = 0;
    std::uint32_t epoch_ = 0;
};

// Probability that a given bit is still 0 after p insertions: (1 - 1/m)^(k*p).
double p_zero(std::uint32_t m, unsigned k, std::uint64_t p);

// False-positive probability after p insertions: (1 - (1 - 1/m)^(k*p))^k.
double fp_exact(std::uint32_t m, unsigned k, std::uint64_t p);

// Rule-of-thumb false-positive rate at the design operating point: 2^-k.
double fp_approx(unsigned k);

}  // namespace replayguard
