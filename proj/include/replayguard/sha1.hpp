#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace replayguard {

using Sha1Digest = std::array<std::uint8_t, 20>;

// FIPS 180-1 SHA-1 over the whole input.
Sha1Digest sha1(std::span<const std::uint8_t> data);
Sha1Digest sha1(std::string_view data);

// First four digest bytes as a big-endian 32-bit value, the reduction used to
// index the single-hash Bloom filter.
std::uint32_t sha1_truncated32(std::span<const std::uint8_t> data);

}  // namespace replayguard
