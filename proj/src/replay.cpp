#include "replayguard/replay.hpp"

#include <algorithm>
#include <cmath>

#include "replayguard/errors.hpp"
#include "replayguard/hash32.hpp"

namespace replayguard {

void validate(const DetectorConfig& cfg) {
    switch (cfg.scheme) {
        case Scheme::Counter:
        case Scheme::HashWindow:
            if (cfg.window == 0) throw ConfigError("window must be at least 1");
            if (cfg.window > 65536) throw ConfigError("window must be at most 65536");
            break;
        case Scheme::BloomSingle:
        case Scheme::BloomMulti:
            if (cfg.filter_bits == 0) throw ConfigError("filter_bits must be at least 1");
            if (cfg.scheme == Scheme::BloomMulti &&
                (cfg.hash_count < 1 || cfg.hash_count > kHashFamilySize)) {
                throw ConfigError("hash_count must be between 1 and 9");
            }
            if (cfg.fp_max >= 0.0 && cfg.fp_max > 1.0)
                throw ConfigError("fp_max must be at most 1");
            break;
    }
}

unsigned effective_hash_count(const DetectorConfig& cfg) {
    return cfg.scheme == Scheme::BloomSingle ? 1u : cfg.hash_count;
}

double effective_fp_max(const DetectorConfig& cfg) {
    if (cfg.fp_max >= 0.0) return cfg.fp_max;
    return 2.0 * fp_approx(effective_hash_count(cfg));
}

CounterWindowDetector::CounterWindowDetector(std::uint32_t window) : window_(window) {
    if (window == 0) throw ConfigError("window must be at least 1");
}

Verdict CounterWindowDetector::check(std::uint16_t src, std::uint16_t ctr) {
    auto [it, inserted] = neighbors_.try_emplace(src);
    Neighbor& nb = it->second;
    if (inserted) {
        nb.highest = ctr;
        nb.seen.assign(window_, false);
        nb.seen[0] = true;
        return Verdict::Fresh;
    }

    if (ctr == 0 && nb.highest == 65535) {
        // Counter wrapped after a full epoch; restart tracking at zero.
        nb.highest = 0;
        nb.seen.assign(window_, false);
        nb.seen[0] = true;
        return Verdict::Fresh;
    }

    if (ctr > nb.highest) {
        std::uint32_t shift = static_cast<std::uint32_t>(ctr) - nb.highest;
        if (shift >= window_) {
            nb.seen.assign(window_, false);
        } else {
            nb.seen.insert(nb.seen.begin(), shift, false);
            nb.seen.resize(window_);
        }
        nb.highest = ctr;
        nb.seen[0] = true;
        return Verdict::Fresh;
    }

    std::uint32_t offset = static_cast<std::uint32_t>(nb.highest) - ctr;
    if (offset >= window_) return Verdict::Replayed;  // too old to verify
    if (nb.seen[offset]) return Verdict::Replayed;
    nb.seen[offset] = true;
    return Verdict::Fresh;
}

HashWindowDetector::HashWindowDetector(std::uint32_t window) : window_(window) {
    if (window == 0) throw ConfigError("window must be at least 1");
}

Verdict HashWindowDetector::check(std::uint16_t neighbor,
                                  std::span<const std::uint8_t> packet_bytes) {
    std::deque<Sha1Digest>& ring = rings_[neighbor];
    Sha1Digest digest = sha1(packet_bytes);
    if (std::find(ring.begin(), ring.end(), digest) != ring.end())
        return Verdict::Replayed;
    if (ring.size() == window_) ring.pop_front();
    ring.push_back(digest);
    return Verdict::Fresh;
}

Verdict HashWindowDetector::check(const PacketAE& p) {
    return check(p.src, encode_ae(p));
}

Detector::Detector(const DetectorConfig& cfg) : cfg_(cfg) {
    validate(cfg_);
    switch (cfg_.scheme) {
        case Scheme::Counter:
            counter_.emplace(cfg_.window);
            break;
        case Scheme::HashWindow:
            hash_window_.emplace(cfg_.window);
            break;
        case Scheme::BloomSingle:
            fp_max_ = effective_fp_max(cfg_);
            filter_.emplace(BloomFilter::single_hash(cfg_.filter_bits));
            break;
        case Scheme::BloomMulti:
            fp_max_ = effective_fp_max(cfg_);
            filter_.emplace(cfg_.filter_bits, cfg_.hash_count);
            break;
    }
}

Verdict Detector::check(const PacketAE& p) {
    switch (cfg_.scheme) {
        case Scheme::Counter:
            return counter_->check(p.src, p.ctr);
        case Scheme::HashWindow:
            return hash_window_->check(p);
        case Scheme::BloomSingle:
        case Scheme::BloomMulti: {
            filter_->maybe_epoch_reset(fp_max_);
            std::vector<std::uint8_t> tag = replay_tag(p, cfg_.scheme);
            return filter_->query_insert(tag) ? Verdict::Replayed : Verdict::Fresh;
        }
    }
    throw ConfigError("unreachable scheme");
}

std::uint32_t Detector::epoch_resets() const {
    return filter_ ? filter_->epoch() : 0u;
}

std::uint64_t state_bytes_bitmap(const DetectorConfig& cfg, std::uint64_t neighbors) {
    switch (cfg.scheme) {
        case Scheme::Counter:
            return neighbors * (2 + (cfg.window + 7) / 8);
        case Scheme::HashWindow:
            return neighbors * 20ull * cfg.window;
        case Scheme::BloomSingle:
        case Scheme::BloomMulti:
            return (cfg.filter_bits + 7) / 8 + kBloomHeaderBytes;
    }
    throw ConfigError("unreachable scheme");
}

std::uint64_t state_bytes_ledger(const DetectorConfig& cfg, std::uint64_t neighbors) {
    switch (cfg.scheme) {
        case Scheme::Counter:
            return neighbors * 2ull * cfg.window;
        case Scheme::HashWindow:
        case Scheme::BloomSingle:
        case Scheme::BloomMulti:
            return state_bytes_bitmap(cfg, neighbors);
    }
    throw ConfigError("unreachable scheme");
}

std::uint64_t network_storage_overhead(std::uint64_t bytes_per_counter,
                                       std::uint64_t node_count) {
    if (node_count == 0) return 0;
    return bytes_per_counter * node_count * (node_count - 1) / 2;
}

std::uint64_t max_neighbors_within(const DetectorConfig& cfg, std::uint64_t ram_budget) {
    validate(cfg);
    std::uint64_t flat = state_bytes_bitmap(cfg, 0);
    if (cfg.scheme == Scheme::BloomSingle || cfg.scheme == Scheme::BloomMulti)
        return flat <= ram_budget ? UINT64_MAX : 0;
    std::uint64_t per_neighbor = state_bytes_bitmap(cfg, 1) - flat;
    return (ram_budget - flat) / per_neighbor;
}

}  // namespace replayguard
