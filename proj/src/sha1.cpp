#include "replayguard/sha1.hpp"

#include <bit>
#include <cstring>

namespace replayguard {
namespace {

constexpr std::uint32_t kH0 = 0x67452301;
constexpr std::uint32_t kH1 = 0xEFCDAB89;
constexpr std::uint32_t kH2 = 0x98BADCFE;
constexpr std::uint32_t kH3 = 0x10325476;
constexpr std::uint32_t kH4 = 0xC3D2E1F0;

void compress(std::uint32_t h[5], const std::uint8_t block[64]) {
    std::uint32_t w[80];
    for (int t = 0; t < 16; ++t) {
        w[t] = (std::uint32_t(block[4 * t]) << 24) | (std::uint32_t(block[4 * t + 1]) << 16) |
               (std::uint32_t(block[4 * t + 2]) << 8) | std::uint32_t(block[4 * t + 3]);
    }
    for (int t = 16; t < 80; ++t) {
        w[t] = std::rotl(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1);
    }

    std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
    for (int t = 0; t < 80; ++t) {
        std::uint32_t f, k;
        if (t < 20) {
            f = (b & c) | (~b & d);
            k = 0x5A827999;
        } else if (t < 40) {
            f = b ^ c ^ d;
            k = 0x6ED9EBA1;
        } else if (t < 60) {
            f = (b & c) | (b & d) | (c & d);
            k = 0x8F1BBCDC;
        } else {
            f = b ^ c ^ d;
            k = 0xCA62C1D6;
        }
        const std::uint32_t tmp = std::rotl(a, 5) + f + e + k + w[t];
        e = d;
        d = c;
        c = std::rotl(b, 30);
        b = a;
        a = tmp;
    }

    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
}

}  // namespace

Sha1Digest sha1(std::span<const std::uint8_t> data) {
    std::uint32_t h[5] = {kH0, kH1, kH2, kH3, kH4};

    std::size_t off = 0;
    while (data.size() - off >= 64) {
        compress(h, data.data() + off);
        off += 64;
    }

    // Final block(s): remaining bytes, 0x80, zero pad, 64-bit bit length.
    std::uint8_t tail[128] = {};
    const std::size_t rem = data.size() - off;
    std::memcpy(tail, data.data() + off, rem);
    tail[rem] = 0x80;
    const std::size_t tail_len = (rem < 56) ? 64 : 128;
    const std::uint64_t bits = std::uint64_t(data.size()) * 8;
    for (int i = 0; i < 8; ++i) {
        tail[tail_len - 1 - i] = static_cast<std::uint8_t>(bits >> (8 * i));
    }
    compress(h, tail);
    if (tail_len == 128) compress(h, tail + 64);

    Sha1Digest digest;
    for (int i = 0; i < 5; ++i) {
        digest[4 * i] = static_cast<std::uint8_t>(h[i] >> 24);
        digest[4 * i + 1] = static_cast<std::uint8_t>(h[i] >> 16);
        digest[4 * i + 2] = static_cast<std::uint8_t>(h[i] >> 8);
        digest[4 * i + 3] = static_cast<std::uint8_t>(h[i]);
    }
    return digest;
}

Sha1Digest sha1(std::string_view data) {
    return sha1(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

std::uint32_t sha1_truncated32(std::span<const std::uint8_t> data) {
    const Sha1Digest d = sha1(data);
    return (std::uint32_t(d[0]) << 24) | (std::uint32_t(d[1]) << 16) | (std::uint32_t(d[2]) << 8) |
           std::uint32_t(d[3]);
}

}  // namespace replayguard
