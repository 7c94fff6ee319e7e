#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cift/error.hpp"

namespace cift::chromecache {

// A 32-bit address into the block-file cache backend.
//   bit 31      initialized
//   bits 28-30  file type (0 external, 1 rankings, 2/3/4 block files)
//   bits 24-25  number of blocks - 1          (block files)
//   bits 16-23  block file number             (block files)
//   bits 0-15   first block index             (block files)
//   bits 0-27   external file number          (separate files, f_%06x)
struct CacheAddress {
    std::uint32_t raw = 0;

    bool initialized() const { return (raw & 0x80000000u) != 0; }
    std::uint32_t file_type() const { return (raw >> 28) & 0x7u; }
    bool is_separate_file() const { return file_type() == 0; }
    std::uint32_t external_file_number() const { return raw & 0x0FFFFFFFu; }
    std::uint32_t block_count() const { return ((raw >> 24) & 0x3u) + 1; }
    std::uint32_t block_file_number() const { return (raw >> 16) & 0xFFu; }
    std::uint32_t start_block() const { return raw & 0xFFFFu; }

    // 36/256/1024/4096 for rankings and the three block sizes; 0 otherwise.
    std::uint32_t block_size() const;
    bool valid_type() const { return file_type() <= 4; }

    // "f_0001a3" or "data_1 block 7 x2"; for diagnostics.
    std::string describe() const;
};

struct ChromeCacheEntry {
    std::string key;  // usually the request URL
    std::int64_t creation_time_raw = 0;
    std::int32_t reuse_count = 0;
    std::int32_t refetch_count = 0;
    std::vector<std::uint8_t> header_stream;  // stream 0 as stored
    std::vector<std::uint8_t> body;           // stream 1 as stored
    std::vector<std::uint8_t> decoded_body;   // inflated when gzip-encoded
    std::string status_line;
    std::map<std::string, std::string> http_headers;  // names lowercased
    bool corrupt = false;
    std::string diagnostic;
};

class CacheReader {
public:
    std::filesystem::path directory;
    std::uint32_t version = 0;
    std::int32_t entry_count = 0;
    std::vector<std::uint32_t> table;  // hash table of entry addresses
};

// Validates `dir/index` (magic 0xC103CAC3, versions 2.0/2.1/3.0) and loads the
// hash table. Block files are opened lazily while reading entries.
Result<CacheReader> open_cache(const std::filesystem::path& dir);

struct ReadResult {
    std::vector<ChromeCacheEntry> entries;
    std::size_t seen = 0;     // entries visited in the table
    std::size_t skipped = 0;  // unreadable or non-normal entries
    std::size_t filtered_out = 0;
    std::vector<std::string> diagnostics;
};

bool default_url_filter(std::string_view url);

ReadResult read_entries(const CacheReader& reader,
                        const std::function<bool(std::string_view)>& url_filter);
ReadResult read_entries(const CacheReader& reader);

// Splits a stored stream-0 blob into status line and headers. The blob starts
// with a serialized length/flags preamble; the HTTP text is located by its
// "HTTP/1." signature and consists of NUL-separated lines up to a double NUL.
bool parse_header_stream(const std::vector<std::uint8_t>& stream, std::string& status_line,
                         std::map<std::string, std::string>& headers);

}  // namespace cift::chromecache
