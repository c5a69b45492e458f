#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gridmaze {

// Lowercase hex SHA-256.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

// Standard alphabet with padding, no line breaks.
std::string base64_encode(std::span<const std::uint8_t> bytes);
// Throws ParseFailure on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace gridmaze
