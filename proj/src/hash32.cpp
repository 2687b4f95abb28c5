#include "replayguard/hash32.hpp"

#include <string>

namespace replayguard {
namespace {

std::uint32_t rs_hash(std::span<const std::uint8_t> data) {
    std::uint32_t a = 63689;
    const std::uint32_t b = 378551;
    std::uint32_t h = 0;
    for (std::uint8_t c : data) {
        h = h * a + c;
        a *= b;
    }
    return h;
}

std::uint32_t js_hash(std::span<const std::uint8_t> data) {
    std::uint32_t h = 1315423911;
    for (std::uint8_t c : data) {
        h ^= (h << 5) + c + (h >> 2);
    }
    return h;
}

// 32-bit PJW; the ELF hash is the same recurrence at this word size.
std::uint32_t pjw_hash(std::span<const std::uint8_t> data) {
    std::uint32_t h = 0;
    for (std::uint8_t c : data) {
        h = (h << 4) + c;
        if (const std::uint32_t g = h & 0xF0000000; g != 0) {
            h ^= g >> 24;
            h &= ~g;
        }
    }
    return h;
}

std::uint32_t bkdr_hash(std::span<const std::uint8_t> data) {
    std::uint32_t h = 0;
    for (std::uint8_t c : data) {
        h = h * 131 + c;
    }
    return h;
}

std::uint32_t sdbm_hash(std::span<const std::uint8_t> data) {
    std::uint32_t h = 0;
    for (std::uint8_t c : data) {
        h = c + (h << 6) + (h << 16) - h;
    }
    return h;
}

std::uint32_t djb_hash(std::span<const std::uint8_t> data) {
    std::uint32_t h = 5381;
    for (std::uint8_t c : data) {
        h = ((h << 5) + h) + c;
    }
    return h;
}

std::uint32_t dek_hash(std::span<const std::uint8_t> data) {
    std::uint32_t h = static_cast<std::uint32_t>(data.size());
    for (std::uint8_t c : data) {
        h = ((h << 5) ^ (h >> 27)) ^ c;
    }
    return h;
}

std::uint32_t ap_hash(std::span<const std::uint8_t> data) {
    std::uint32_t h = 0xAAAAAAAA;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::uint32_t c = data[i];
        if (i % 2 == 0) {
            h ^= (h << 7) ^ (c * (h >> 3));
        } else {
            h ^= ~((h << 11) + (c ^ (h >> 5)));
        }
    }
    return h;
}

}  // namespace

std::string_view hash32_name(Hash32Fn fn) {
    switch (fn) {
        case Hash32Fn::Rs: return "RS";
        case Hash32Fn::Js: return "JS";
        case Hash32Fn::Pjw: return "PJW";
        case Hash32Fn::Elf: return "ELF";
        case Hash32Fn::Bkdr: return "BKDR";
        case Hash32Fn::Sdbm: return "SDBM";
        case Hash32Fn::Djb: return "DJB";
        case Hash32Fn::Dek: return "DEK";
        case Hash32Fn::Ap: return "AP";
    }
    return "?";
}

Hash32Fn hash32_from_name(std::string_view name) {
    for (Hash32Fn fn : kHashFamily) {
        if (hash32_name(fn) == name) return fn;
    }
    throw ConfigError("unknown hash function '" + std::string(name) + "'");
}

std::uint32_t hash32(Hash32Fn fn, std::span<const std::uint8_t> data) {
    switch (fn) {
        case Hash32Fn::Rs: return rs_hash(data);
        case Hash32Fn::Js: return js_hash(data);
        case Hash32Fn::Pjw: return pjw_hash(data);
        case Hash32Fn::Elf: return pjw_hash(data);
        case Hash32Fn::Bkdr: return bkdr_hash(data);
        case Hash32Fn::Sdbm: return sdbm_hash(data);
        case Hash32Fn::Djb: return djb_hash(data);
        case Hash32Fn::Dek: return dek_hash(data);
        case Hash32Fn::Ap: return ap_hash(data);
    }
    throw ConfigError("invalid hash function id");
}

std::uint32_t hash32(std::string_view fn_name, std::span<const std::uint8_t> data) {
    return hash32(hash32_from_name(fn_name), data);
}

std::vector<std::uint32_t> family_indices(std::span<const std::uint8_t> tag, unsigned k,
                                          std::uint32_t m) {
    if (k < 1 || k > kHashFamilySize) {
        throw ConfigError("hash count " + std::to_string(k) + " outside [1, " +
                          std::to_string(kHashFamilySize) + "]");
    }
    if (m < 1) {
        throw ConfigError("filter size must be at least 1 bit");
    }
    std::vector<std::uint32_t> indices;
    indices.reserve(k);
    for (unsigned i = 0; i < k; ++i) {
        indices.push_back(hash32(kHashFamily[i], tag) % m);
    }
    return indices;
}

}  // namespace replayguard
