#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "replayguard/errors.hpp"
#include "replayguard/scheme.hpp"

namespace replayguard {

inline constexpr std::size_t kMaxPayload = 29;
inline constexpr std::size_t kAeOverhead = 12;   // Dest(2) AM(1) Len(1) Src(2) Ctr(2) + MAC(4)
inline constexpr std::size_t kAuthOverhead = 8;  // Dest(2) AM(1) Len(1) + MAC(4)

// Authenticated-encryption frame. The trailing src/ctr half of the IV doubles
// as the replay tag for the counter scheme. All multi-byte fields big-endian.
struct PacketAE {
    std::uint16_t dest = 0;
    std::uint8_t am = 0;
    std::uint8_t len = 0;  // must equal payload.size()
    std::uint16_t src = 0;
    std::uint16_t ctr = 0;
    std::vector<std::uint8_t> payload;
    std::array<std::uint8_t, 4> mac{};  // opaque, never verified here

    bool operator==(const PacketAE&) const = default;
};

// Authentication-only frame: no IV, hence no src/ctr fields.
struct PacketAuth {
    std::uint16_t dest = 0;
    std::uint8_t am = 0;
    std::uint8_t len = 0;
    std::vector<std::uint8_t> payload;
    std::array<std::uint8_t, 4> mac{};

    bool operator==(const PacketAuth&) const = default;
};

std::vector<std::uint8_t> encode_ae(const PacketAE& p);
PacketAE decode_ae(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_auth(const PacketAuth& p);
PacketAuth decode_auth(std::span<const std::uint8_t> bytes);

// Bytes a detector hashes or inspects for a packet: big-endian (src, ctr) for
// the counter scheme, the whole serialized packet for everything else.
// Throws FormatError for the counter scheme on an Auth packet (no ctr field).
std::vector<std::uint8_t> replay_tag(const PacketAE& p, Scheme scheme);
std::vector<std::uint8_t> replay_tag(const PacketAuth& p, Scheme scheme);

}  // namespace replayguard
