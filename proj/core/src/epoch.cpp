#include "cift/epoch.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace cift {

namespace {

using Failure = Result<UtcTimestamp>;

constexpr std::int64_t kAutoMillisThreshold = 100000000000LL;  // 10^11

Result<UtcTimestamp> render(std::int64_t epoch_ms) {
    using namespace std::chrono;

    const auto tp = sys_time<milliseconds>(milliseconds(epoch_ms));
    const auto day = floor<days>(tp);
    const year_month_day ymd(day);
    if (static_cast<int>(ymd.year()) > 9999) {
        return Failure::failure(ErrorKind::Range, "timestamp beyond year 9999");
    }
    const hh_mm_ss<milliseconds> tod(tp - day);

    char date_buf[24];
    char time_buf[40];
    std::snprintf(date_buf, sizeof(date_buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    std::snprintf(time_buf, sizeof(time_buf), "%02ld:%02ld:%02ld.%03ld",
                  static_cast<long>(tod.hours().count()),
                  static_cast<long>(tod.minutes().count()),
                  static_cast<long>(tod.seconds().count()),
                  static_cast<long>(tod.subseconds().count()));

    return UtcTimestamp{epoch_ms, date_buf, time_buf};
}

}  // namespace

Result<UtcTimestamp> epoch_to_utc(std::int64_t value, EpochUnit unit) {
    if (value < 0) {
        return Failure::failure(ErrorKind::Range, "negative timestamp");
    }
    std::int64_t epoch_ms = 0;
    switch (unit) {
        case EpochUnit::Millis:
            epoch_ms = value;
            break;
        case EpochUnit::Seconds:
            if (value > (INT64_MAX / 1000)) {
                return Failure::failure(ErrorKind::Range, "timestamp overflow");
            }
            epoch_ms = value * 1000;
            break;
        case EpochUnit::Auto:
            return epoch_to_utc(value,
                                value > kAutoMillisThreshold ? EpochUnit::Millis : EpochUnit::Seconds);
    }
    return render(epoch_ms);
}

Result<UtcTimestamp> epoch_to_utc(std::string_view value, EpochUnit unit) {
    if (value.empty()) {
        return Failure::failure(ErrorKind::Range, "empty timestamp text");
    }
    std::int64_t parsed = 0;
    for (char c : value) {
        if (c < '0' || c > '9') {
            return Failure::failure(ErrorKind::Range,
                                    "non-numeric timestamp text: " + std::string(value));
        }
        if (parsed > (INT64_MAX - 9) / 10) {
            return Failure::failure(ErrorKind::Range, "timestamp overflow");
        }
        parsed = parsed * 10 + (c - '0');
    }
    return epoch_to_utc(parsed, unit);
}

Result<std::int64_t> utc_strings_to_epoch_ms(std::string_view date, std::string_view time) {
    using namespace std::chrono;

    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0, ms = 0;
    if (std::sscanf(std::string(date).c_str(), "%d-%d-%d", &y, &mo, &d) != 3) {
        return Result<std::int64_t>::failure(ErrorKind::Parse,
                                             "bad date: " + std::string(date));
    }
    const int fields = std::sscanf(std::string(time).c_str(), "%d:%d:%d.%d", &h, &mi, &s, &ms);
    if (fields < 3 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 59 || ms < 0 ||
        ms > 999) {
        return Result<std::int64_t>::failure(ErrorKind::Parse,
                                             "bad time: " + std::string(time));
    }

    const year_month_day ymd{year(y), month(static_cast<unsigned>(mo)),
                             std::chrono::day(static_cast<unsigned>(d))};
    if (!ymd.ok()) {
        return Result<std::int64_t>::failure(ErrorKind::Parse,
                                             "bad calendar date: " + std::string(date));
    }
    const auto day_tp = sys_days(ymd);
    const auto tp = day_tp + hours(h) + minutes(mi) + seconds(s) + milliseconds(ms);
    return duration_cast<milliseconds>(tp.time_since_epoch()).count();
}

std::string utc_now_string() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:%02d:%02d", tm_utc.tm_year + 1900,
                  tm_utc.tm_mon + 1, tm_utc.tm_mday, tm_utc.tm_hour, tm_utc.tm_min,
                  tm_utc.tm_sec);
    return buf;
}

std::int64_t epoch_ms_now() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace cift
