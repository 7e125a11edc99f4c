#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace evalforge {

/// Raw SHA-256 digest (32 bytes).
std::array<std::uint8_t, 32> sha256(std::string_view data);

/// Lowercase hex encoding of the SHA-256 digest (64 chars).
std::string sha256_hex(std::string_view data);

}  // namespace evalforge
