#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cift/error.hpp"

namespace cift::webview {

// A recognizable cache-file layout. Detection is gated on the 8-byte header
// magic, so profiles cannot misfire on each other's files.
struct CacheProfile {
    std::string name;
    std::array<std::uint8_t, 8> header_magic{};
    std::array<std::uint8_t, 8> footer_magic{};
    // PAPER_SIMPLE: [magic][4-byte LE url length][url][payload][footer magic].
    // CHROMIUM_SIMPLE: the simple-cache entry layout (version, key length and
    // hash after the magic; per-stream EOF records carrying the footer magic).
    bool chromium_simple = false;
};

const std::vector<CacheProfile>& builtin_profiles();

struct CacheEntry {
    std::string original_url;
    std::vector<std::uint8_t> payload;          // raw stream bytes
    std::vector<std::uint8_t> decoded_payload;  // gzip-inflated when applicable
    std::filesystem::path source_file;
    std::string profile;
    bool corrupt = false;      // footer mismatch or failed inflation
    std::string diagnostic;
};

Result<CacheEntry> parse_cache_bytes(std::span<const std::uint8_t> bytes,
                                     const std::vector<CacheProfile>& profiles);
Result<CacheEntry> parse_cache_file(const std::filesystem::path& path);
Result<CacheEntry> parse_cache_file(const std::filesystem::path& path,
                                    const std::vector<CacheProfile>& profiles);

// The hosts the companion app talks to.
bool default_url_filter(std::string_view url);

struct ScanResult {
    std::vector<CacheEntry> entries;  // parsed clean and matched the filter
    std::size_t files_seen = 0;
    std::size_t unparsed = 0;  // unrecognized, truncated, or corrupt files
    std::size_t filtered_out = 0;
    std::vector<std::string> diagnostics;
};

ScanResult scan_cache_dir(const std::filesystem::path& dir,
                          const std::function<bool(std::string_view)>& url_filter);
ScanResult scan_cache_dir(const std::filesystem::path& dir);

}  // namespace cift::webview
