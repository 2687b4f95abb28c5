#include "replayguard/wire.hpp"

#include <string>

namespace replayguard {
namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

void check_payload(std::size_t len_field, std::size_t payload_size) {
    if (payload_size > kMaxPayload) {
        throw FormatError("payload is " + std::to_string(payload_size) +
                          " bytes, maximum is " + std::to_string(kMaxPayload));
    }
    if (len_field != payload_size) {
        throw FormatError("len field " + std::to_string(len_field) +
                          " does not match payload size " + std::to_string(payload_size));
    }
}

}  // namespace

std::vector<std::uint8_t> encode_ae(const PacketAE& p) {
    check_payload(p.len, p.payload.size());
    std::vector<std::uint8_t> out;
    out.reserve(kAeOverhead + p.payload.size());
    put_u16(out, p.dest);
    out.push_back(p.am);
    out.push_back(p.len);
    put_u16(out, p.src);
    put_u16(out, p.ctr);
    out.insert(out.end(), p.payload.begin(), p.payload.end());
    out.insert(out.end(), p.mac.begin(), p.mac.end());
    return out;
}

PacketAE decode_ae(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kAeOverhead) {
        throw FormatError("buffer of " + std::to_string(bytes.size()) +
                          " bytes is below the " + std::to_string(kAeOverhead) +
                          "-byte AE minimum");
    }
    PacketAE p;
    p.dest = get_u16(bytes, 0);
    p.am = bytes[2];
    p.len = bytes[3];
    if (p.len > kMaxPayload || bytes.size() != kAeOverhead + p.len) {
        throw FormatError("len field " + std::to_string(p.len) +
                          " inconsistent with buffer size " + std::to_string(bytes.size()));
    }
    p.src = get_u16(bytes, 4);
    p.ctr = get_u16(bytes, 6);
    p.payload.assign(bytes.begin() + 8, bytes.begin() + 8 + p.len);
    std::copy(bytes.end() - 4, bytes.end(), p.mac.begin());
    return p;
}

std::vector<std::uint8_t> encode_auth(const PacketAuth& p) {
    check_payload(p.len, p.payload.size());
    std::vector<std::uint8_t> out;
    out.reserve(kAuthOverhead + p.payload.size());
    put_u16(out, p.dest);
    out.push_back(p.am);
    out.push_back(p.len);
    out.insert(out.end(), p.payload.begin(), p.payload.end());
    out.insert(out.end(), p.mac.begin(), p.mac.end());
    return out;
}

PacketAuth decode_auth(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kAuthOverhead) {
        throw FormatError("buffer of " + std::to_string(bytes.size()) +
                          " bytes is below the " + std::to_string(kAuthOverhead) +
                          "-byte Auth minimum");
    }
    PacketAuth p;
    p.dest = get_u16(bytes, 0);
    p.am = bytes[2];
    p.len = bytes[3];
    if (p.len > kMaxPayload || bytes.size() != kAuthOverhead + p.len) {
        throw FormatError("len field " + std::to_string(p.len) +
                          " inconsistent with buffer size " + std::to_string(bytes.size()));
    }
    p.payload.assign(bytes.begin() + 4, bytes.begin() + 4 + p.len);
    std::copy(bytes.end() - 4, bytes.end(), p.mac.begin());
    return p;
}

std::vector<std::uint8_t> replay_tag(const PacketAE& p, Scheme scheme) {
    if (scheme == Scheme::Counter) {
        std::vector<std::uint8_t> tag;
        tag.reserve(4);
        put_u16(tag, p.src);
        put_u16(tag, p.ctr);
        return tag;
    }
    return encode_ae(p);
}

std::vector<std::uint8_t> replay_tag(const PacketAuth& p, Scheme scheme) {
    if (scheme == Scheme::Counter) {
        throw FormatError("counter scheme needs the AE ctr field; Auth packets do not carry one");
    }
    return encode_auth(p);
}

}  // namespace replayguard
