#include "replayguard/bloom.hpp"

#include <cmath>
#include <string>

#include "replayguard/hash32.hpp"
#include "replayguard/sha1.hpp"

namespace replayguard {

BloomFilter::BloomFilter(std::uint32_t bits, unsigned hash_count, BloomIndexing indexing)
    : bits_(bits), hash_count_(hash_count), indexing_(indexing), data_((bits + 7) / 8, 0) {
    if (bits < 1) {
        throw ConfigError("filter size must be at least 1 bit");
    }
    if (hash_count < 1 || hash_count > kHashFamilySize) {
        throw ConfigError("hash count " + std::to_string(hash_count) + " outside [1, " +
                          std::to_string(kHashFamilySize) + "]");
    }
}

BloomFilter::BloomFilter(std::uint32_t bits, unsigned hash_count)
    : BloomFilter(bits, hash_count, BloomIndexing::HashFamily) {}

BloomFilter BloomFilter::single_hash(std::uint32_t bits) {
    return BloomFilter(bits, 1, BloomIndexing::Sha1Truncate);
}

std::vector<std::uint32_t> BloomFilter::indices_for(std::span<const std::uint8_t> tag) const {
    if (indexing_ == BloomIndexing::Sha1Truncate) {
        return {sha1_truncated32(tag) % bits_};
    }
    return family_indices(tag, hash_count_, bits_);
}

bool BloomFilter::query_insert(std::span<const std::uint8_t> tag) {
    bool was_present = true;
    for (std::uint32_t i : indices_for(tag)) {
        if (!get_bit(i)) {
            was_present = false;
            set_bit(i);
            ++ones_;
        }
    }
    ++inserted_;
    return was_present;
}

bool BloomFilter::contains(std::span<const std::uint8_t> tag) const {
    for (std::uint32_t i : indices_for(tag)) {
        if (!get_bit(i)) return false;
    }
    return true;
}

void BloomFilter::reset() {
    data_.assign(data_.size(), 0);
    inserted_ = 0;
    ones_ = 0;
    ++epoch_;
}

bool BloomFilter::maybe_epoch_reset(double fp_max) {
    if (fp_exact(bits_, hash_count_, inserted_) > fp_max) {
        reset();
        return true;
    }
    return false;
}

std::vector<std::uint8_t> BloomFilter::serialize() const {
    std::vector<std::uint8_t> out;
    out.reserve(kBloomHeaderBytes + data_.size());
    auto put_u32 = [&out](std::uint32_t v) {
        out.push_back(static_cast<std::uint8_t>(v >> 24));
        out.push_back(static_cast<std::uint8_t>(v >> 16));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v));
    };
    put_u32(bits_);
    out.push_back(static_cast<std::uint8_t>(hash_count_));
    put_u32(inserted_);
    put_u32(epoch_);
    out.insert(out.end(), data_.begin(), data_.end());
    return out;
}

double p_zero(std::uint32_t m, unsigned k, std::uint64_t p) {
    return std::pow(1.0 - 1.0 / static_cast<double>(m),
                    static_cast<double>(k) * static_cast<double>(p));
}

double fp_exact(std::uint32_t m, unsigned k, std::uint64_t p) {
    return std::pow(1.0 - p_zero(m, k, p), static_cast<double>(k));
}

double fp_approx(unsigned k) {
    return std::ldexp(1.0, -static_cast<int>(k));
}

}  // namespace replayguard
