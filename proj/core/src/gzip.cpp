#include "cift/gzip.hpp"

#include <zlib.h>

#include <cstring>

namespace cift {

namespace {
constexpr int kGzipWindowBits = 15 + 16;  // zlib: +16 selects the gzip wrapper
}

Result<std::vector<std::uint8_t>> gzip_decompress(std::span<const std::uint8_t> data,
                                                  std::size_t max_output) {
    if (!looks_gzip(data)) {
        return Result<std::vector<std::uint8_t>>::failure(ErrorKind::Parse,
                                                          "not a gzip stream");
    }

    z_stream zs;
    std::memset(&zs, 0, sizeof(zs));
    if (inflateInit2(&zs, kGzipWindowBits) != Z_OK) {
        return Result<std::vector<std::uint8_t>>::failure(ErrorKind::Parse,
                                                          "inflateInit2 failed");
    }

    zs.next_in = const_cast<Bytef*>(data.data());
    zs.avail_in = static_cast<uInt>(data.size());

    std::vector<std::uint8_t> out;
    std::uint8_t chunk[16384];
    int rc = Z_OK;
    do {
        zs.next_out = chunk;
        zs.avail_out = sizeof(chunk);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            return Result<std::vector<std::uint8_t>>::failure(
                ErrorKind::Parse, "gzip stream is corrupt (zlib rc=" + std::to_string(rc) + ")");
        }
        out.insert(out.end(), chunk, chunk + (sizeof(chunk) - zs.avail_out));
        if (out.size() > max_output) {
            inflateEnd(&zs);
            return Result<std::vector<std::uint8_t>>::failure(
                ErrorKind::Range, "inflated payload exceeds the configured cap");
        }
    } while (rc != Z_STREAM_END);

    inflateEnd(&zs);
    return out;
}

std::vector<std::uint8_t> gzip_compress(std::span<const std::uint8_t> data) {
    z_stream zs;
    std::memset(&zs, 0, sizeof(zs));
    deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, kGzipWindowBits, 8,
                 Z_DEFAULT_STRATEGY);

    zs.next_in = const_cast<Bytef*>(data.data());
    zs.avail_in = static_cast<uInt>(data.size());

    std::vector<std::uint8_t> out;
    std::uint8_t chunk[16384];
    int rc = Z_OK;
    do {
        zs.next_out = chunk;
        zs.avail_out = sizeof(chunk);
        rc = deflate(&zs, Z_FINISH);
        out.insert(out.end(), chunk, chunk + (sizeof(chunk) - zs.avail_out));
    } while (rc != Z_STREAM_END);

    deflateEnd(&zs);
    return out;
}

}  // namespace cift
