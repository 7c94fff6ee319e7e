#include "cache_writers.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "cift/gzip.hpp"

namespace cift::testsupport {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t value) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

void put_bytes(std::vector<std::uint8_t>& out, const void* data, std::size_t size) {
    const auto* bytes = static_cast<const std::uint8_t*>(data);
    out.insert(out.end(), bytes, bytes + size);
}

void store_u32(std::vector<std::uint8_t>& buffer, std::size_t offset, std::uint32_t value) {
    std::memcpy(buffer.data() + offset, &value, sizeof value);
}

void store_i64(std::vector<std::uint8_t>& buffer, std::size_t offset, std::int64_t value) {
    std::memcpy(buffer.data() + offset, &value, sizeof value);
}

void dump(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cache writer: cannot open " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

std::vector<std::uint8_t> make_simple_cache_file(const std::string& url,
                                                 const std::vector<std::uint8_t>& payload) {
    std::vector<std::uint8_t> out;
    put_bytes(out, "CIFTWVC\0", 8);
    put_u32(out, static_cast<std::uint32_t>(url.size()));
    put_bytes(out, url.data(), url.size());
    out.insert(out.end(), payload.begin(), payload.end());
    put_bytes(out, "\0CVWTFIC", 8);
    return out;
}

std::vector<std::uint8_t> make_chromium_simple_file(const std::string& url,
                                                    const std::vector<std::uint8_t>& stream1,
                                                    const std::vector<std::uint8_t>& stream0,
                                                    std::uint32_t version) {
    constexpr std::uint64_t kInitialMagic = 0xfcfb6d1ba7725c30ull;
    constexpr std::uint64_t kFinalMagic = 0xf4fa6f45970d41d8ull;
    std::vector<std::uint8_t> out;
    put_u64(out, kInitialMagic);
    put_u32(out, version);
    put_u32(out, static_cast<std::uint32_t>(url.size()));
    put_u32(out, 0);  // key hash; informational only
    put_bytes(out, url.data(), url.size());
    out.insert(out.end(), stream1.begin(), stream1.end());
    put_u64(out, kFinalMagic);  // EOF record for stream 1
    put_u32(out, 0);            // flags
    put_u32(out, 0);            // crc32 (not validated)
    put_u32(out, static_cast<std::uint32_t>(stream1.size()));
    out.insert(out.end(), stream0.begin(), stream0.end());
    put_u64(out, kFinalMagic);  // EOF record for stream 0
    put_u32(out, 0);
    put_u32(out, 0);
    put_u32(out, static_cast<std::uint32_t>(stream0.size()));
    return out;
}

namespace {

constexpr std::size_t kBlockHeaderSize = 8192;
constexpr std::size_t kEntryStoreSize = 256;
constexpr std::size_t kIndexHeaderSize = 368;
constexpr std::size_t kInlineKeyCapacity = kEntryStoreSize - 96;

// One growing block file plus the external f_* pool.
struct BlockFileBuilder {
    std::uint32_t file_number;
    std::uint32_t file_type;  // address type bits: 2=256B, 3=1024B, 4=4096B
    std::uint32_t block_size;
    std::vector<std::uint8_t> blocks;

    // Appends `bytes` and returns its initialized cache address. The span
    // must fit the four-block address limit.
    std::uint32_t append(const std::vector<std::uint8_t>& bytes) {
        std::uint32_t count = static_cast<std::uint32_t>((bytes.size() + block_size - 1) / block_size);
        if (count == 0) count = 1;
        if (count > 4) throw std::runtime_error("block span larger than four blocks");
        const std::uint32_t start = static_cast<std::uint32_t>(blocks.size() / block_size);
        blocks.resize(blocks.size() + static_cast<std::size_t>(count) * block_size, 0);
        std::memcpy(blocks.data() + static_cast<std::size_t>(start) * block_size, bytes.data(),
                    bytes.size());
        return 0x80000000u | (file_type << 28) | ((count - 1) << 24) | (file_number << 16) | start;
    }

    void write(const std::filesystem::path& dir, std::uint32_t version) const {
        std::vector<std::uint8_t> file(kBlockHeaderSize, 0);
        store_u32(file, 0, 0xC104CAC3u);
        store_u32(file, 4, version);
        store_u32(file, 8, (1u << 16) | file_number);  // this_file (i16) + next_file
        store_u32(file, 12, block_size);
        store_u32(file, 16, static_cast<std::uint32_t>(blocks.size() / block_size));
        file.insert(file.end(), blocks.begin(), blocks.end());
        dump(dir / ("data_" + std::to_string(file_number)), file);
    }
};

std::vector<std::uint8_t> build_header_stream(const ChromeCacheEntrySpec& spec) {
    // stream 0 mirrors the serialized response-info layout closely enough for
    // recovery: a 4-byte payload size, 4 bytes of flags, then the status line
    // and headers as NUL-separated strings closed by a double NUL.
    std::string block = spec.status_line;
    block.push_back('\0');
    for (const auto& [name, value] : spec.headers) {
        block += name + ": " + value;
        block.push_back('\0');
    }
    block.push_back('\0');
    std::vector<std::uint8_t> out;
    put_u32(out, static_cast<std::uint32_t>(block.size() + 4));
    put_u32(out, 1);  // response-info flags
    put_bytes(out, block.data(), block.size());
    return out;
}

}  // namespace

void write_chrome_cache(const std::filesystem::path& dir,
                        const std::vector<ChromeCacheEntrySpec>& entries,
                        const ChromeCacheWriteOptions& options) {
    std::filesystem::create_directories(dir);
    BlockFileBuilder entry_file{1, 2, 256, {}};
    BlockFileBuilder medium_file{2, 3, 1024, {}};
    BlockFileBuilder large_file{3, 4, 4096, {}};
    std::uint32_t external_counter = 0;

    auto place_stream = [&](const std::vector<std::uint8_t>& bytes) -> std::uint32_t {
        if (bytes.empty()) return 0;
        if (bytes.size() <= 4 * 1024) return medium_file.append(bytes);
        if (bytes.size() <= 4 * 4096) return large_file.append(bytes);
        char name[16];
        std::snprintf(name, sizeof name, "f_%06x", external_counter);
        dump(dir / name, bytes);
        return 0x80000000u | external_counter++;
    };

    std::vector<std::uint32_t> addresses;
    for (const auto& spec : entries) {
        std::vector<std::uint8_t> body(spec.body.begin(), spec.body.end());
        if (spec.gzip_body) body = cift::gzip_compress(body);
        const std::vector<std::uint8_t> header_stream = build_header_stream(spec);

        std::vector<std::uint8_t> store(kEntryStoreSize, 0);
        store_u32(store, 0, 0);  // bucket hash; the reader scans every bucket
        store_i64(store, 24, spec.creation_time);
        store_u32(store, 32, static_cast<std::uint32_t>(spec.url.size()));
        if (spec.url.size() <= kInlineKeyCapacity) {
            std::memcpy(store.data() + 96, spec.url.data(), spec.url.size());
        } else {
            std::vector<std::uint8_t> key_bytes(spec.url.begin(), spec.url.end());
            store_u32(store, 36, place_stream(key_bytes));  // long key address
        }
        store_u32(store, 40, static_cast<std::uint32_t>(header_stream.size()));
        store_u32(store, 44, static_cast<std::uint32_t>(body.size()));
        store_u32(store, 56, place_stream(header_stream));
        store_u32(store, 60, place_stream(body));
        addresses.push_back(entry_file.append(store));
    }

    if (options.single_chain) {
        // Thread every entry off bucket 0 through the `next` pointers.
        for (std::size_t i = 0; i + 1 < addresses.size(); ++i) {
            const std::size_t block_offset =
                static_cast<std::size_t>(addresses[i] & 0xFFFFu) * 256 + 4;
            store_u32(entry_file.blocks, block_offset, addresses[i + 1]);
        }
    }

    std::vector<std::uint8_t> index(kIndexHeaderSize + options.table_len * 4, 0);
    store_u32(index, 0, 0xC103CAC3u);
    store_u32(index, 4, options.index_version);
    store_u32(index, 8, static_cast<std::uint32_t>(entries.size()));  // num_entries
    store_u32(index, 28, options.table_len);
    for (std::size_t i = 0; i < addresses.size(); ++i) {
        if (options.single_chain) {
            store_u32(index, kIndexHeaderSize, addresses[0]);
            break;
        }
        if (i >= options.table_len) throw std::runtime_error("more entries than table buckets");
        store_u32(index, kIndexHeaderSize + i * 4, addresses[i]);
    }
    dump(dir / "index", index);

    entry_file.write(dir, options.block_version);
    medium_file.write(dir, options.block_version);
    large_file.write(dir, options.block_version);
}

}  // namespace cift::testsupport
