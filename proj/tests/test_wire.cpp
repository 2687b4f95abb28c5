#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "replayguard/rng.hpp"
#include "replayguard/wire.hpp"

using namespace replayguard;

namespace {

std::vector<std::uint8_t> from_hex(const std::string& hex) {
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i + 1 < hex.size(); i += 2)
        out.push_back(static_cast<std::uint8_t>(std::stoul(hex.substr(i, 2), nullptr, 16)));
    return out;
}

PacketAE random_ae(Xorshift64Star& rng) {
    PacketAE p;
    p.dest = static_cast<std::uint16_t>(rng.next_u64());
    p.am = static_cast<std::uint8_t>(rng.next_u64());
    p.src = static_cast<std::uint16_t>(rng.next_u64());
    p.ctr = static_cast<std::uint16_t>(rng.next_u64());
    p.payload.resize(rng.uniform(kMaxPayload + 1));
    rng.fill_bytes(p.payload);
    p.len = static_cast<std::uint8_t>(p.payload.size());
    rng.fill_bytes(p.mac);
    return p;
}

}  // namespace

TEST_CASE("encode_ae packs fields big-endian in layout order") {
    PacketAE p;
    p.dest = 0x0001;
    p.am = 4;
    p.len = 0;
    p.src = 0x0002;
    p.ctr = 0;
    CHECK(encode_ae(p) == from_hex("000104000002000000000000"));
}

TEST_CASE("encode_ae of a full payload is 41 bytes") {
    PacketAE p;
    p.payload.assign(29, 0xAB);
    p.len = 29;
    CHECK(encode_ae(p).size() == 41);
}

TEST_CASE("encode_ae rejects invariant violations") {
    PacketAE p;
    p.len = 5;
    p.payload.assign(4, 0);
    CHECK_THROWS_AS(encode_ae(p), FormatError);

    p.payload.assign(30, 0);
    p.len = 30;
    CHECK_THROWS_AS(encode_ae(p), FormatError);
}

TEST_CASE("decode_ae round-trips the documented example") {
    auto bytes = from_hex("000104000002000000000000");
    PacketAE p = decode_ae(bytes);
    CHECK(p.dest == 0x0001);
    CHECK(p.am == 4);
    CHECK(p.len == 0);
    CHECK(p.src == 0x0002);
    CHECK(p.ctr == 0);
    CHECK(p.payload.empty());
    CHECK(encode_ae(p) == bytes);
}

TEST_CASE("decode_ae rejects short and inconsistent buffers") {
    std::vector<std::uint8_t> short_buf(11, 0);
    CHECK_THROWS_AS(decode_ae(short_buf), FormatError);

    // Claims len=29 so the total must be 41, but only 40 bytes arrive.
    std::vector<std::uint8_t> truncated(40, 0);
    truncated[3] = 29;
    CHECK_THROWS_AS(decode_ae(truncated), FormatError);
}

TEST_CASE("auth packets use the shorter header") {
    PacketAuth p;
    p.dest = 0x1234;
    p.am = 0x7F;
    p.payload = {1, 2, 3};
    p.len = 3;
    p.mac = {0xDE, 0xAD, 0xBE, 0xEF};
    auto bytes = encode_auth(p);
    CHECK(bytes.size() == 4 + 3 + 4);
    CHECK(bytes[0] == 0x12);
    CHECK(bytes[1] == 0x34);
    CHECK(decode_auth(bytes) == p);

    std::vector<std::uint8_t> short_buf(7, 0);
    CHECK_THROWS_AS(decode_auth(short_buf), FormatError);
}

TEST_CASE("round trip holds for random valid packets") {
    Xorshift64Star rng(0xC0FFEE);
    for (int i = 0; i < 200; ++i) {
        PacketAE p = random_ae(rng);
        CHECK(decode_ae(encode_ae(p)) == p);

        PacketAuth a;
        a.dest = static_cast<std::uint16_t>(rng.next_u64());
        a.am = static_cast<std::uint8_t>(rng.next_u64());
        a.payload.resize(rng.uniform(kMaxPayload + 1));
        rng.fill_bytes(a.payload);
        a.len = static_cast<std::uint8_t>(a.payload.size());
        rng.fill_bytes(a.mac);
        CHECK(decode_auth(encode_auth(a)) == a);
    }
}

TEST_CASE("counter tag is big-endian src then ctr") {
    PacketAE p;
    p.src = 2;
    p.ctr = 7;
    CHECK(replay_tag(p, Scheme::Counter) == from_hex("00020007"));
}

TEST_CASE("hash and bloom tags are the whole serialized packet") {
    Xorshift64Star rng(0xBEEF);
    PacketAE p = random_ae(rng);
    CHECK(replay_tag(p, Scheme::HashWindow) == encode_ae(p));
    CHECK(replay_tag(p, Scheme::BloomSingle) == encode_ae(p));
    CHECK(replay_tag(p, Scheme::BloomMulti) == encode_ae(p));

    PacketAuth a;
    a.payload = {9, 9};
    a.len = 2;
    CHECK(replay_tag(a, Scheme::BloomMulti) == encode_auth(a));
}

TEST_CASE("counter tags on auth packets are rejected") {
    PacketAuth a;
    CHECK_THROWS_AS(replay_tag(a, Scheme::Counter), FormatError);
}

TEST_CASE("distinct src-ctr pairs give distinct counter tags") {
    PacketAE a, b;
    a.src = 0x0102;
    a.ctr = 0x0304;
    b.src = 0x0103;
    b.ctr = 0x0304;
    CHECK(replay_tag(a, Scheme::Counter) != replay_tag(b, Scheme::Counter));
    b.src = a.src;
    b.ctr = 0x0305;
    CHECK(replay_tag(a, Scheme::Counter) != replay_tag(b, Scheme::Counter));
}
