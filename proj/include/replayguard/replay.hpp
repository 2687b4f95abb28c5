#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "replayguard/bloom.hpp"
#include "replayguard/scheme.hpp"
#include "replayguard/sha1.hpp"
#include "replayguard/wire.hpp"

namespace replayguard {

enum class Verdict : std::uint8_t { Fresh, Replayed };

constexpr std::string_view verdict_name(Verdict v) {
    return v == Verdict::Fresh ? "fresh" : "replayed";
}

struct DetectorConfig {
    Scheme scheme = Scheme::Counter;
    std::uint32_t window = 8;        // W, counter and hash_window schemes
    std::uint32_t filter_bits = 512; // m, bloom schemes
    unsigned hash_count = 8;         // k, bloom_multi (bloom_single always uses 1)
    double fp_max = -1.0;            // reset threshold; < 0 means the default
};

void validate(const DetectorConfig& cfg);  // ConfigError on bad parameters

// k as actually used: 1 for bloom_single, the configured value otherwise.
unsigned effective_hash_count(const DetectorConfig& cfg);

// Reset threshold with the default (2 * fp_approx(k)) applied.
double effective_fp_max(const DetectorConfig& cfg);

// Per-neighbor sliding counter window over (highest seen H, presence bits for
// (H - W, H]). Counters above H slide the window; counters at or below H - W
// are too old to verify and are treated as replays.
class CounterWindowDetector {
public:
    explicit CounterWindowDetector(std::uint32_t window);

    Verdict check(std::uint16_t src, std::uint16_t ctr);

    std::uint32_t window() const { return window_; }
    std::size_t neighbor_count() const { return neighbors_.size(); }

private:
    struct Neighbor {
        std::uint16_t highest = 0;
        std::vector<bool> seen;  // seen[i] covers counter value highest - i
    };

    std::uint32_t window_;
    std::unordered_map<std::uint16_t, Neighbor> neighbors_;
};

// Per-neighbor FIFO ring of the W most recent accepted packet digests.
class HashWindowDetector {
public:
    explicit HashWindowDetector(std::uint32_t window);

    Verdict check(std::uint16_t neighbor, std::span<const std::uint8_t> packet_bytes);
    Verdict check(const PacketAE& p);  // keyed by p.src over the serialized packet

    std::uint32_t window() const { return window_; }
    std::size_t neighbor_count() const { return rings_.size(); }

private:
    std::uint32_t window_;
    std::unordered_map<std::uint16_t, std::deque<Sha1Digest>> rings_;
};

// The four schemes behind one interface; owns whichever state its scheme needs.
class Detector {
public:
    explicit Detector(const DetectorConfig& cfg);

    Verdict check(const PacketAE& p);

    const DetectorConfig& config() const { return cfg_; }
    std::uint32_t epoch_resets() const;

private:
    DetectorConfig cfg_;
    double fp_max_ = 0.0;
    std::optional<CounterWindowDetector> counter_;
    std::optional<HashWindowDetector> hash_window_;
    std::optional<BloomFilter> filter_;
};

// Receiver-side state size in bytes for a given neighbor count. The bitmap
// figure charges the counter scheme 2 bytes for H plus ceil(W/8) presence
// bits per neighbor; the ledger figure charges 2 bytes per window slot
// instead, mirroring how a value-list implementation is usually accounted.
// Hash-window state is 20 bytes per slot either way; bloom state is
// ceil(m/8) plus a fixed header, independent of neighbors.
std::uint64_t state_bytes_bitmap(const DetectorConfig& cfg, std::uint64_t neighbors);
std::uint64_t state_bytes_ledger(const DetectorConfig& cfg, std::uint64_t neighbors);

// Total counter-state bytes across an n-node network where every node keeps
// B bytes for each of its n-1 peers: B * n * (n - 1) / 2 on the half-duplex
// pairing count.
std::uint64_t network_storage_overhead(std::uint64_t bytes_per_counter, std::uint64_t node_count);

// Largest neighbor count whose bitmap-accounted state fits in ram_budget
// bytes, the mote-RAM style cap. Bloom state is flat in neighbors, so the
// result is UINT64_MAX when the filter fits and 0 when it does not.
std::uint64_t max_neighbors_within(const DetectorConfig& cfg, std::uint64_t ram_budget = 4096);

}  // namespace replayguard
