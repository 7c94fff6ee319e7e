#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cift/api_catalog.hpp"
#include "cift/error.hpp"
#include "cift/evidence_store.hpp"

namespace cift::normalize {

// One l2t_csv-style timeline event, UTC-rendered. `timezone` is only the
// rendering label; date/time are always UTC so correlation stays sound.
struct TimelineEvent {
    std::int64_t source_id = 0;
    std::string date;            // "YYYY-MM-DD"
    std::string time;            // "HH:MM:SS.mmm"
    std::string timezone = "UTC";
    std::string macb;            // e.g. "...B"
    std::string source;          // operation name
    std::string sourcetype;      // e.g. "Activity History"
    std::string type;            // "Created", "Modified", "Alarm time", ...
    std::string user;
    std::string host;
    std::string short_text;
    std::string desc;
    std::string filename;        // evidence library path of the source file
    std::string notes;
    std::string format = "JSON";
    std::string extra;
    bool client_only = false;
};

// A row for one of the content tables, column names per the case schema.
struct NormalizedRecord {
    std::string table;
    std::int64_t source_id = 0;
    evidence::CaseDatabase::Row columns;
};

struct NormalizeContext {
    evidence::Operation operation = evidence::Operation::Cloud;
    std::string filename;         // saved evidence path for the filename column
    std::string zone_label = "UTC";
    std::string default_user;     // customer id fallback for user
    std::string host_hint;        // device serial for per-device queues
};

struct Normalized {
    std::vector<NormalizedRecord> records;
    std::vector<TimelineEvent> events;
    std::vector<std::string> warnings;   // missing expected keys, bad timestamps
    std::vector<std::string> audio_ids;  // utterance ids seen in this payload
    std::string zone_label;              // timeZoneId discovered (device-preferences)
    std::string customer_id;             // customerId discovered (bootstrap)
};

// Interprets one JSON payload according to its endpoint. Pure: same bytes,
// same descriptor, same context produce the same records (replayability).
// Non-JSON input is a Parse error; missing expected keys degrade to warnings.
Result<Normalized> normalize(std::span<const std::uint8_t> payload,
                             const catalog::ApiDescriptor& descriptor, std::int64_t source_id,
                             const NormalizeContext& ctx);

struct ApplyCounts {
    std::int64_t records = 0;  // new content-table rows
    std::int64_t events = 0;   // new TIMELINE rows
};

// Inserts the normalized output; duplicate suppression makes this idempotent.
ApplyCounts apply(evidence::CaseDatabase& casedb, const Normalized& normalized);

// One logical to-do/shopping item; shared between the cloud todos payload and
// the companion app databases so both paths normalize identically.
struct TodoItem {
    std::string text;
    std::int64_t created_ms = -1;
    std::int64_t updated_ms = -1;
    std::string customer_id;
    std::string audio_id;
    bool shopping = false;
};

void normalize_todo_item(const TodoItem& item, std::int64_t source_id,
                         const NormalizeContext& ctx, Normalized& out);

// Canonical voice URL recorded in the extra column, and the inverse used to
// pull an audio id out of a stored URL.
std::string utterance_url(std::string_view audio_id);
std::string audio_id_from(std::string_view value);

// Recomputes the client_only flag for every TIMELINE row: a client-side event
// is flagged when no cloud event shares its correlation key
// (sourcetype, epoch-ms, host, SHA-1 of desc). Returns the flagged count.
std::int64_t correlate(evidence::CaseDatabase& casedb);

}  // namespace cift::normalize
