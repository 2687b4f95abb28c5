#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "replayguard/errors.hpp"

namespace replayguard {

// The four replay detection schemes.
enum class Scheme : std::uint8_t {
    Counter,      // per-neighbor sliding counter window over the AE ctr field
    HashWindow,   // per-neighbor ring of SHA-1 digests of whole packets
    BloomSingle,  // one Bloom filter, single SHA-1-derived index
    BloomMulti,   // one Bloom filter, k functions from the 32-bit hash family
};

constexpr std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Counter: return "counter";
        case Scheme::HashWindow: return "hash_window";
        case Scheme::BloomSingle: return "bloom_single";
        case Scheme::BloomMulti: return "bloom_multi";
    }
    return "?";
}

inline Scheme scheme_from_name(std::string_view name) {
    if (name == "counter") return Scheme::Counter;
    if (name == "hash_window") return Scheme::HashWindow;
    if (name == "bloom_single") return Scheme::BloomSingle;
    if (name == "bloom_multi") return Scheme::BloomMulti;
    throw ConfigError("unknown scheme '" + std::string(name) +
                      "' (expected counter, hash_window, bloom_single or bloom_multi)");
}

}  // namespace replayguard
