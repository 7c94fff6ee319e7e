#include "cift/webview_cache.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "cift/gzip.hpp"

namespace cift::webview {
namespace {

constexpr std::uint64_t kSimpleInitialMagic = 0xfcfb6d1ba7725c30ull;
constexpr std::uint64_t kSimpleFinalMagic = 0xf4fa6f45970d41d8ull;
constexpr std::uint32_t kSimpleFlagHasCrc32 = 1u;
constexpr std::uint32_t kSimpleFlagHasKeySha256 = 2u;
constexpr std::size_t kSimpleHeaderSize = 20;  // magic, version, key_len, key_hash
constexpr std::size_t kSimpleEofSize = 20;     // magic, flags, crc32, stream_size
constexpr std::size_t kSha256Size = 32;

std::array<std::uint8_t, 8> magic_bytes(std::uint64_t value) {
    std::array<std::uint8_t, 8> out{};
    for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value >> (8 * i));
    return out;
}

std::array<std::uint8_t, 8> magic_bytes(const char (&text)[9]) {
    std::array<std::uint8_t, 8> out{};
    std::memcpy(out.data(), text, 8);
    return out;
}

std::uint32_t read_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    std::uint32_t value = 0;
    std::memcpy(&value, bytes.data() + offset, sizeof value);
    return value;
}

std::uint64_t read_u64(std::span<const std::uint8_t> bytes, std::size_t offset) {
    std::uint64_t value = 0;
    std::memcpy(&value, bytes.data() + offset, sizeof value);
    return value;
}

bool starts_with_magic(std::span<const std::uint8_t> bytes, const std::array<std::uint8_t, 8>& magic) {
    return bytes.size() >= magic.size() && std::equal(magic.begin(), magic.end(), bytes.begin());
}

// Inflate when the payload carries a gzip signature; inflation failure marks
// the entry corrupt and keeps the raw bytes as the decoded view.
void decode_payload(CacheEntry& entry) {
    if (!looks_gzip(entry.payload)) {
        entry.decoded_payload = entry.payload;
        return;
    }
    auto inflated = gzip_decompress(entry.payload);
    if (inflated.ok()) {
        entry.decoded_payload = std::move(inflated.value());
    } else {
        entry.corrupt = true;
        if (!entry.diagnostic.empty()) entry.diagnostic += "; ";
        entry.diagnostic += "gzip payload failed to inflate: " + inflated.error().message;
        entry.decoded_payload = entry.payload;
    }
}

Result<CacheEntry> parse_paper_simple(std::span<const std::uint8_t> bytes, const CacheProfile& profile) {
    const std::size_t fixed = 8 + 4 + profile.footer_magic.size();
    if (bytes.size() < fixed)
        return Result<CacheEntry>::failure(ErrorKind::Truncated, "file smaller than fixed fields");
    const std::uint64_t url_len = read_u32(bytes, 8);
    if (12 + url_len + profile.footer_magic.size() > bytes.size())
        return Result<CacheEntry>::failure(ErrorKind::Truncated,
                                           "url length " + std::to_string(url_len) + " exceeds file size " +
                                               std::to_string(bytes.size()));
    CacheEntry entry;
    entry.profile = profile.name;
    entry.original_url.assign(reinterpret_cast<const char*>(bytes.data()) + 12, static_cast<std::size_t>(url_len));
    const std::size_t payload_begin = 12 + static_cast<std::size_t>(url_len);
    const std::size_t payload_end = bytes.size() - profile.footer_magic.size();
    entry.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(payload_begin),
                         bytes.begin() + static_cast<std::ptrdiff_t>(payload_end));
    if (!std::equal(profile.footer_magic.begin(), profile.footer_magic.end(),
                    bytes.end() - static_cast<std::ptrdiff_t>(profile.footer_magic.size()))) {
        entry.corrupt = true;
        entry.diagnostic = "footer magic mismatch";
    }
    decode_payload(entry);
    return Result<CacheEntry>(std::move(entry));
}

struct EofRecord {
    std::uint32_t flags = 0;
    std::uint32_t stream_size = 0;
    bool valid = false;
};

EofRecord read_eof(std::span<const std::uint8_t> bytes, std::size_t offset) {
    EofRecord record;
    record.valid = read_u64(bytes, offset) == kSimpleFinalMagic;
    record.flags = read_u32(bytes, offset + 8);
    record.stream_size = read_u32(bytes, offset + 16);
    return record;
}

// Simple-cache entry files end with stream 0; walk back from the file tail.
Result<CacheEntry> parse_chromium_simple(std::span<const std::uint8_t> bytes, const CacheProfile& profile) {
    if (bytes.size() < kSimpleHeaderSize + 2 * kSimpleEofSize)
        return Result<CacheEntry>::failure(ErrorKind::Truncated, "file smaller than header and EOF records");
    const std::uint32_t version = read_u32(bytes, 8);
    if (version < 5 || version > 9)
        return Result<CacheEntry>::failure(ErrorKind::UnsupportedVersion,
                                           "simple cache entry version " + std::to_string(version));
    const std::uint64_t key_len = read_u32(bytes, 12);
    if (kSimpleHeaderSize + key_len + 2 * kSimpleEofSize > bytes.size())
        return Result<CacheEntry>::failure(ErrorKind::Truncated,
                                           "key length " + std::to_string(key_len) + " exceeds file size");

    const EofRecord eof0 = read_eof(bytes, bytes.size() - kSimpleEofSize);
    if (!eof0.valid)
        return Result<CacheEntry>::failure(ErrorKind::Truncated, "missing stream 0 EOF magic");
    std::size_t tail = kSimpleEofSize + eof0.stream_size;
    if (eof0.flags & kSimpleFlagHasKeySha256) tail += kSha256Size;
    const std::size_t stream1_end_plus_eof = bytes.size() >= tail ? bytes.size() - tail : 0;
    if (stream1_end_plus_eof < kSimpleHeaderSize + key_len + kSimpleEofSize)
        return Result<CacheEntry>::failure(ErrorKind::Truncated, "stream 0 extent overruns key region");

    CacheEntry entry;
    entry.profile = profile.name;
    entry.original_url.assign(reinterpret_cast<const char*>(bytes.data()) + kSimpleHeaderSize,
                              static_cast<std::size_t>(key_len));
    const EofRecord eof1 = read_eof(bytes, stream1_end_plus_eof - kSimpleEofSize);
    if (!eof1.valid)
        return Result<CacheEntry>::failure(ErrorKind::Truncated, "missing stream 1 EOF magic");
    const std::size_t stream1_begin = kSimpleHeaderSize + static_cast<std::size_t>(key_len);
    const std::size_t stream1_extent = stream1_end_plus_eof - kSimpleEofSize - stream1_begin;
    if (eof1.stream_size != stream1_extent) {
        entry.corrupt = true;
        entry.diagnostic = "stream 1 size field " + std::to_string(eof1.stream_size) + " does not match extent " +
                           std::to_string(stream1_extent);
    }
    entry.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(stream1_begin),
                         bytes.begin() + static_cast<std::ptrdiff_t>(stream1_begin + stream1_extent));
    decode_payload(entry);
    return Result<CacheEntry>(std::move(entry));
}

}  // namespace

const std::vector<CacheProfile>& builtin_profiles() {
    static const std::vector<CacheProfile> profiles = {
        CacheProfile{"PAPER_SIMPLE", magic_bytes("CIFTWVC\0"), magic_bytes("\0CVWTFIC"), false},
        CacheProfile{"CHROMIUM_SIMPLE", magic_bytes(kSimpleInitialMagic), magic_bytes(kSimpleFinalMagic), true},
    };
    return profiles;
}

Result<CacheEntry> parse_cache_bytes(std::span<const std::uint8_t> bytes,
                                     const std::vector<CacheProfile>& profiles) {
    for (const auto& profile : profiles) {
        if (!starts_with_magic(bytes, profile.header_magic)) continue;
        return profile.chromium_simple ? parse_chromium_simple(bytes, profile)
                                       : parse_paper_simple(bytes, profile);
    }
    return Result<CacheEntry>::failure(ErrorKind::UnrecognizedFormat, "no cache profile matches the file header");
}

Result<CacheEntry> parse_cache_file(const std::filesystem::path& path,
                                    const std::vector<CacheProfile>& profiles) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return Result<CacheEntry>::failure(ErrorKind::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) return Result<CacheEntry>::failure(ErrorKind::Io, "read failed for " + path.string());
    auto parsed = parse_cache_bytes(bytes, profiles);
    if (parsed.ok()) parsed.value().source_file = path;
    return parsed;
}

Result<CacheEntry> parse_cache_file(const std::filesystem::path& path) {
    return parse_cache_file(path, builtin_profiles());
}

bool default_url_filter(std::string_view url) {
    return url.find("pitangui.amazon.com") != std::string_view::npos ||
           url.find("alexa.amazon.com") != std::string_view::npos;
}

ScanResult scan_cache_dir(const std::filesystem::path& dir,
                          const std::function<bool(std::string_view)>& url_filter) {
    ScanResult result;
    if (!std::filesystem::is_directory(dir)) {
        result.diagnostics.push_back("not a directory: " + dir.string());
        return result;
    }
    std::vector<std::filesystem::path> files;
    for (const auto& item : std::filesystem::recursive_directory_iterator(dir)) {
        if (item.is_regular_file()) files.push_back(item.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        ++result.files_seen;
        auto parsed = parse_cache_file(file);
        if (!parsed.ok()) {
            ++result.unparsed;
            result.diagnostics.push_back(file.filename().string() + ": " + parsed.error().message);
            continue;
        }
        CacheEntry& entry = parsed.value();
        if (entry.corrupt) {
            ++result.unparsed;
            result.diagnostics.push_back(file.filename().string() + ": " + entry.diagnostic);
            continue;
        }
        if (!url_filter(entry.original_url)) {
            ++result.filtered_out;
            continue;
        }
        result.entries.push_back(std::move(entry));
    }
    return result;
}

ScanResult scan_cache_dir(const std::filesystem::path& dir) {
    return scan_cache_dir(dir, default_url_filter);
}

}  // namespace cift::webview
