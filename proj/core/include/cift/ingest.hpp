#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cift/error.hpp"
#include "cift/evidence_store.hpp"

namespace cift::ingest {

struct IngestReport {
    std::int64_t artifacts = 0;     // source files preserved
    std::int64_t content_rows = 0;  // new content-table rows
    std::int64_t events = 0;        // new TIMELINE rows
    std::size_t files_seen = 0;
    std::size_t parsed = 0;
    std::size_t skipped = 0;  // unrecognized, corrupt, or filtered files
    std::vector<std::string> diagnostics;

    std::string to_text() const;
};

// Android companion app data directory: preserves and parses the account
// token store (databases/map_data_storage.db), the to-do store
// (databases/DataStore.db), and the WebView cache (app_webview/Cache).
Result<IngestReport> ingest_app_android(evidence::CaseDatabase& casedb,
                                        const std::filesystem::path& root);

// iOS companion app container: Documents/LocalData.sqlite.
Result<IngestReport> ingest_app_ios(evidence::CaseDatabase& casedb,
                                    const std::filesystem::path& root);

// A desktop Chrome profile cache directory (block-file layout). Every
// recovered Alexa response is preserved (body plus a headers sidecar) and
// normalized through the endpoint catalog.
Result<IngestReport> ingest_browser_chrome(evidence::CaseDatabase& casedb,
                                           const std::filesystem::path& cache_dir);

}  // namespace cift::ingest
