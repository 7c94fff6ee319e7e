#include "cift/chrome_cache.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "cift/gzip.hpp"

namespace cift::chromecache {
namespace {

constexpr std::uint32_t kIndexMagic = 0xC103CAC3u;
constexpr std::uint32_t kBlockMagic = 0xC104CAC3u;
constexpr std::size_t kIndexHeaderSize = 368;
constexpr std::size_t kBlockHeaderSize = 8192;
constexpr std::size_t kEntryStoreSize = 256;
constexpr std::uint32_t kDefaultTableLength = 0x10000;
constexpr std::size_t kMaxStreamBytes = 64 * 1024 * 1024;
constexpr int kEntryStateNormal = 0;

std::uint32_t read_u32(const std::vector<std::uint8_t>& bytes, std::size_t offset) {
    std::uint32_t value = 0;
    std::memcpy(&value, bytes.data() + offset, sizeof value);
    return value;
}

std::int32_t read_i32(const std::vector<std::uint8_t>& bytes, std::size_t offset) {
    std::int32_t value = 0;
    std::memcpy(&value, bytes.data() + offset, sizeof value);
    return value;
}

std::int64_t read_i64(const std::vector<std::uint8_t>& bytes, std::size_t offset) {
    std::int64_t value = 0;
    std::memcpy(&value, bytes.data() + offset, sizeof value);
    return value;
}

Result<std::vector<std::uint8_t>> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return Result<std::vector<std::uint8_t>>::failure(ErrorKind::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) return Result<std::vector<std::uint8_t>>::failure(ErrorKind::Io, "read failed: " + path.string());
    return bytes;
}

// Lazily loads and validates the data_N block files referenced by addresses.
class BlockFilePool {
public:
    explicit BlockFilePool(std::filesystem::path dir) : dir_(std::move(dir)) {}

    // The bytes covered by a block address, or a diagnostic.
    Result<std::vector<std::uint8_t>> read_block(CacheAddress address) {
        if (!address.valid_type() || address.block_size() == 0)
            return fail(ErrorKind::UnrecognizedFormat, "unsupported address type", address);
        const auto* file = load(address.block_file_number());
        if (!file) return fail(ErrorKind::Io, "block file missing or invalid", address);
        const std::size_t offset =
            kBlockHeaderSize + static_cast<std::size_t>(address.start_block()) * address.block_size();
        const std::size_t length = static_cast<std::size_t>(address.block_count()) * address.block_size();
        if (offset + length > file->size())
            return fail(ErrorKind::Truncated, "address outside block file extents", address);
        return std::vector<std::uint8_t>(file->begin() + static_cast<std::ptrdiff_t>(offset),
                                         file->begin() + static_cast<std::ptrdiff_t>(offset + length));
    }

    // Stream data for a data address: external f_* file or block-file span.
    // Returns at most `declared` bytes and flags when the extent is short.
    Result<std::vector<std::uint8_t>> read_data(CacheAddress address, std::size_t declared, bool& short_read) {
        short_read = false;
        if (address.is_separate_file()) {
            char name[16];
            std::snprintf(name, sizeof name, "f_%06x", address.external_file_number());
            auto bytes = read_file(dir_ / name);
            if (!bytes.ok()) return bytes;
            if (bytes.value().size() < declared) {
                short_read = true;
                return bytes;
            }
            bytes.value().resize(declared);
            return bytes;
        }
        auto span = read_block(address);
        if (!span.ok()) return span;
        if (span.value().size() < declared) {
            short_read = true;
            return span;
        }
        span.value().resize(declared);
        return span;
    }

private:
    static Result<std::vector<std::uint8_t>> fail(ErrorKind kind, const std::string& what, CacheAddress address) {
        return Result<std::vector<std::uint8_t>>::failure(kind, what + " (" + address.describe() + ")");
    }

    const std::vector<std::uint8_t>* load(std::uint32_t number) {
        auto it = files_.find(number);
        if (it != files_.end()) return it->second.empty() ? nullptr : &it->second;
        auto bytes = read_file(dir_ / ("data_" + std::to_string(number)));
        std::vector<std::uint8_t> content;
        if (bytes.ok() && bytes.value().size() >= kBlockHeaderSize &&
            read_u32(bytes.value(), 0) == kBlockMagic) {
            const std::uint32_t version = read_u32(bytes.value(), 4);
            if (version == 0x20000 || version == 0x30000) content = std::move(bytes.value());
        }
        auto [slot, _] = files_.emplace(number, std::move(content));
        return slot->second.empty() ? nullptr : &slot->second;
    }

    std::filesystem::path dir_;
    std::unordered_map<std::uint32_t, std::vector<std::uint8_t>> files_;
};

void decode_body(ChromeCacheEntry& entry) {
    const auto encoding = entry.http_headers.find("content-encoding");
    const bool gzipped = (encoding != entry.http_headers.end() &&
                          encoding->second.find("gzip") != std::string::npos) ||
                         looks_gzip(entry.body);
    if (!gzipped) {
        entry.decoded_body = entry.body;
        return;
    }
    auto inflated = gzip_decompress(entry.body);
    if (inflated.ok()) {
        entry.decoded_body = std::move(inflated.value());
    } else {
        entry.corrupt = true;
        if (!entry.diagnostic.empty()) entry.diagnostic += "; ";
        entry.diagnostic += "body failed to inflate: " + inflated.error().message;
        entry.decoded_body = entry.body;
    }
}

}  // namespace

std::uint32_t CacheAddress::block_size() const {
    switch (file_type()) {
        case 1: return 36;
        case 2: return 256;
        case 3: return 1024;
        case 4: return 4096;
        default: return 0;
    }
}

std::string CacheAddress::describe() const {
    char out[48];
    if (!initialized()) {
        std::snprintf(out, sizeof out, "addr 0x%08x uninitialized", raw);
    } else if (is_separate_file()) {
        std::snprintf(out, sizeof out, "f_%06x", external_file_number());
    } else {
        std::snprintf(out, sizeof out, "data_%u block %u x%u", block_file_number(), start_block(),
                      block_count());
    }
    return out;
}

Result<CacheReader> open_cache(const std::filesystem::path& dir) {
    const auto index_path = dir / "index";
    if (!std::filesystem::is_regular_file(index_path))
        return Result<CacheReader>::failure(ErrorKind::UnrecognizedFormat,
                                            "no index file in " + dir.string());
    auto bytes = read_file(index_path);
    if (!bytes.ok()) return Result<CacheReader>::failure(bytes.error().kind, bytes.error().message);
    const auto& index = bytes.value();
    if (index.size() < kIndexHeaderSize)
        return Result<CacheReader>::failure(ErrorKind::Truncated, "index smaller than its header");
    if (read_u32(index, 0) != kIndexMagic)
        return Result<CacheReader>::failure(ErrorKind::UnrecognizedFormat, "index magic mismatch");
    const std::uint32_t version = read_u32(index, 4);
    if (version != 0x20000 && version != 0x20001 && version != 0x30000) {
        char text[32];
        std::snprintf(text, sizeof text, "%u.%u", version >> 16, version & 0xFFFF);
        return Result<CacheReader>::failure(ErrorKind::UnsupportedVersion,
                                            std::string("index version ") + text);
    }

    CacheReader reader;
    reader.directory = dir;
    reader.version = version;
    reader.entry_count = read_i32(index, 8);
    std::uint32_t table_length = read_u32(index, 28);
    if (table_length == 0) table_length = kDefaultTableLength;
    if (kIndexHeaderSize + static_cast<std::size_t>(table_length) * 4 > index.size())
        return Result<CacheReader>::failure(ErrorKind::Truncated,
                                            "index table extends past end of file");
    reader.table.resize(table_length);
    std::memcpy(reader.table.data(), index.data() + kIndexHeaderSize,
                static_cast<std::size_t>(table_length) * 4);
    return reader;
}

bool default_url_filter(std::string_view url) {
    return url.find("pitangui.amazon.com") != std::string_view::npos ||
           url.find("alexa.amazon.com") != std::string_view::npos;
}

bool parse_header_stream(const std::vector<std::uint8_t>& stream, std::string& status_line,
                         std::map<std::string, std::string>& headers) {
    static constexpr char kSignature[] = "HTTP/1.";
    const auto begin = std::search(stream.begin(), stream.end(), kSignature, kSignature + 7);
    if (begin == stream.end()) return false;
    std::vector<std::string> lines;
    auto cursor = begin;
    while (cursor != stream.end()) {
        const auto nul = std::find(cursor, stream.end(), std::uint8_t{0});
        if (nul == cursor) break;  // double NUL: end of header block
        lines.emplace_back(cursor, nul);
        if (nul == stream.end()) break;
        cursor = nul + 1;
    }
    if (lines.empty()) return false;
    status_line = lines.front();
    const auto trim = [](std::string text) {
        const auto first = text.find_first_not_of(" \t");
        const auto last = text.find_last_not_of(" \t");
        return first == std::string::npos ? std::string() : text.substr(first, last - first + 1);
    };
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto colon = lines[i].find(':');
        if (colon == std::string::npos) continue;
        std::string name = trim(lines[i].substr(0, colon));
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        headers[name] = trim(lines[i].substr(colon + 1));
    }
    return true;
}

ReadResult read_entries(const CacheReader& reader,
                        const std::function<bool(std::string_view)>& url_filter) {
    ReadResult result;
    BlockFilePool pool(reader.directory);
    std::unordered_set<std::uint32_t> visited;

    for (const std::uint32_t bucket : reader.table) {
        CacheAddress address{bucket};
        // Follow the collision chain; the visited set breaks reference cycles.
        while (address.initialized()) {
            if (!visited.insert(address.raw).second) {
                result.diagnostics.push_back("entry chain loops at " + address.describe());
                break;
            }
            ++result.seen;
            auto block = pool.read_block(address);
            if (!block.ok() || block.value().size() < kEntryStoreSize) {
                ++result.skipped;
                result.diagnostics.push_back("unreadable entry at " + address.describe() +
                                             (block.ok() ? "" : ": " + block.error().message));
                break;
            }
            const auto& store = block.value();
            const CacheAddress next{read_u32(store, 4)};
            const std::int32_t state = read_i32(store, 20);
            const std::int32_t key_length = read_i32(store, 32);
            if (state != kEntryStateNormal) {
                ++result.skipped;
                result.diagnostics.push_back("entry at " + address.describe() + " has state " +
                                             std::to_string(state));
                address = next;
                continue;
            }
            if (key_length < 0) {
                ++result.skipped;
                result.diagnostics.push_back("negative key length at " + address.describe());
                address = next;
                continue;
            }

            ChromeCacheEntry entry;
            entry.reuse_count = read_i32(store, 12);
            entry.refetch_count = read_i32(store, 16);
            entry.creation_time_raw = read_i64(store, 24);
            const CacheAddress long_key{read_u32(store, 36)};
            const std::size_t key_len = static_cast<std::size_t>(key_length);
            if (long_key.initialized()) {
                bool short_read = false;
                auto key_bytes = pool.read_data(long_key, key_len, short_read);
                if (!key_bytes.ok() || short_read) {
                    ++result.skipped;
                    result.diagnostics.push_back("unreadable long key at " + long_key.describe());
                    address = next;
                    continue;
                }
                entry.key.assign(key_bytes.value().begin(), key_bytes.value().end());
            } else {
                const std::size_t inline_capacity = store.size() - 96;
                if (key_len > inline_capacity) {
                    ++result.skipped;
                    result.diagnostics.push_back("inline key overruns entry block at " +
                                                 address.describe());
                    address = next;
                    continue;
                }
                entry.key.assign(reinterpret_cast<const char*>(store.data()) + 96, key_len);
            }

            if (!url_filter(entry.key)) {
                ++result.filtered_out;
                address = next;
                continue;
            }

            for (int stream = 0; stream < 2; ++stream) {
                const std::int32_t declared = read_i32(store, 40 + 4 * static_cast<std::size_t>(stream));
                const CacheAddress data{read_u32(store, 56 + 4 * static_cast<std::size_t>(stream))};
                auto& target = stream == 0 ? entry.header_stream : entry.body;
                if (declared <= 0 || !data.initialized()) continue;
                std::size_t wanted = static_cast<std::size_t>(declared);
                if (wanted > kMaxStreamBytes) {
                    entry.corrupt = true;
                    entry.diagnostic = "stream " + std::to_string(stream) + " declares " +
                                       std::to_string(wanted) + " bytes; capped";
                    wanted = kMaxStreamBytes;
                }
                bool short_read = false;
                auto bytes = pool.read_data(data, wanted, short_read);
                if (!bytes.ok()) {
                    entry.corrupt = true;
                    if (!entry.diagnostic.empty()) entry.diagnostic += "; ";
                    entry.diagnostic += "stream " + std::to_string(stream) +
                                        " unreadable: " + bytes.error().message;
                    continue;
                }
                if (short_read) {
                    entry.corrupt = true;
                    if (!entry.diagnostic.empty()) entry.diagnostic += "; ";
                    entry.diagnostic += "stream " + std::to_string(stream) +
                                        " shorter than its declared size";
                }
                target = std::move(bytes.value());
            }

            parse_header_stream(entry.header_stream, entry.status_line, entry.http_headers);
            decode_body(entry);
            result.entries.push_back(std::move(entry));
            address = next;
        }
    }

    // Directory scan order equals table order, which follows key hashes; sort
    // by key so ingestion order is stable across machines.
    std::sort(result.entries.begin(), result.entries.end(),
              [](const ChromeCacheEntry& a, const ChromeCacheEntry& b) { return a.key < b.key; });
    return result;
}

ReadResult read_entries(const CacheReader& reader) { return read_entries(reader, default_url_filter); }

}  // namespace cift::chromecache
