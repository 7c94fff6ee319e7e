#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cift/error.hpp"

namespace cift {

inline bool looks_gzip(std::span<const std::uint8_t> data) {
    return data.size() >= 2 && data[0] == 0x1F && data[1] == 0x8B;
}

// Inflates a gzip stream. `max_output` caps the inflated size so a corrupt
// length field cannot drive unbounded allocation.
Result<std::vector<std::uint8_t>> gzip_decompress(
    std::span<const std::uint8_t> data, std::size_t max_output = 256 * 1024 * 1024);

std::vector<std::uint8_t> gzip_compress(std::span<const std::uint8_t> data);

}  // namespace cift
