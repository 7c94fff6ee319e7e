#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace cift {

// SHA-1 of the given bytes as 40 lowercase hex digits.
std::string sha1_hex(std::span<const std::uint8_t> data);
std::string sha1_hex(std::string_view data);

}  // namespace cift
