#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cift/error.hpp"

namespace cift {

enum class EpochUnit { Auto, Millis, Seconds };

// A point in time rendered in UTC (proleptic Gregorian).
struct UtcTimestamp {
    std::int64_t epoch_ms = 0;
    std::string date;  // "YYYY-MM-DD"
    std::string time;  // "HH:MM:SS.mmm"
};

// Converts a UNIX timestamp to its UTC rendering. Under Auto, values above
// 10^11 are taken as milliseconds, anything else as seconds (10^11 seconds is
// far in the future while 10^11 ms is 1973, so the ranges cannot collide for
// the payloads at hand). Rejects negative values and years beyond 9999.
Result<UtcTimestamp> epoch_to_utc(std::int64_t value, EpochUnit unit = EpochUnit::Auto);

// Same conversion for numeric text (some payloads carry epoch seconds as a
// JSON string).
Result<UtcTimestamp> epoch_to_utc(std::string_view value, EpochUnit unit = EpochUnit::Auto);

// Inverse of the rendering above; used to re-derive the correlation key from
// stored date/time columns. Returns failure on malformed text.
Result<std::int64_t> utc_strings_to_epoch_ms(std::string_view date, std::string_view time);

// UTC wall clock "YYYY-MM-DD HH:MM:SS" at seconds precision.
std::string utc_now_string();

std::int64_t epoch_ms_now();

}  // namespace cift
