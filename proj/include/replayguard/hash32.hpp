#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "replayguard/errors.hpp"

namespace replayguard {

// The general-purpose 32-bit string hash family, in canonical order. The
// multi-hash Bloom scheme uses the first k members of this list.
enum class Hash32Fn : std::uint8_t { Rs, Js, Pjw, Elf, Bkdr, Sdbm, Djb, Dek, Ap };

inline constexpr std::array<Hash32Fn, 9> kHashFamily = {
    Hash32Fn::Rs,  Hash32Fn::Js,   Hash32Fn::Pjw, Hash32Fn::Elf, Hash32Fn::Bkdr,
    Hash32Fn::Sdbm, Hash32Fn::Djb, Hash32Fn::Dek, Hash32Fn::Ap,
};

inline constexpr unsigned kHashFamilySize = 9;

std::string_view hash32_name(Hash32Fn fn);
Hash32Fn hash32_from_name(std::string_view name);  // ConfigError on unknown name

// One family member over the input, all arithmetic mod 2^32.
std::uint32_t hash32(Hash32Fn fn, std::span<const std::uint8_t> data);
std::uint32_t hash32(std::string_view fn_name, std::span<const std::uint8_t> data);

// Indices of the first k family members reduced mod m, in canonical order.
// Requires 1 <= k <= 9 and m >= 1 (ConfigError otherwise).
std::vector<std::uint32_t> family_indices(std::span<const std::uint8_t> tag, unsigned k,
                                          std::uint32_t m);

}  // namespace replayguard
