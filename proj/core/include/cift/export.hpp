#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cift/error.hpp"
#include "cift/evidence_store.hpp"

namespace cift::exporter {

// TIMELINE as l2t_csv: the canonical 17-column header, RFC-4180 quoting,
// rows ordered by (date, time, source_id). date renders as MM/DD/YYYY and
// time at seconds precision; the milliseconds ride in extra as "ms=NNN".
// Returns the number of rows written.
Result<std::int64_t> export_l2t_csv(const evidence::CaseDatabase& casedb,
                                    const std::filesystem::path& out_path);

// Case content as JSON Lines: every TIMELINE row (ISO date, client_only as a
// bool), then the content tables, each object tagged with its table name.
Result<std::int64_t> export_jsonl(const evidence::CaseDatabase& casedb,
                                  const std::filesystem::path& out_path);

extern const char* const kL2tCsvHeader;

}  // namespace cift::exporter
