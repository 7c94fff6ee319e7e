#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cift/api_catalog.hpp"
#include "cift/error.hpp"
#include "cift/evidence_store.hpp"

namespace cift::cloud {

struct SessionOptions {
    std::string base_url;
    std::string skills_base_url;  // empty: same host as base_url
    std::string email;
    std::string password;         // never written to the case db or any log
    std::string cookie_file;      // import a browser session instead of logging in
    bool allow_insecure_http = false;  // loopback is always allowed
};

// An authenticated connection to the cloud surface. Cookie-file sessions
// cannot re-login, so an expiry mid-run fails the remaining endpoints.
struct Session {
    std::string base_url;
    std::string skills_base_url;
    std::map<std::string, std::string> cookies;
    std::string customer_id;
    std::string email;
    std::string password;
    bool can_relogin = false;
    bool relogin_spent = false;
};

Result<Session> create_session(const SessionOptions& options);
Result<Session> create_session(std::string_view base_url, std::string_view email,
                               std::string_view password);

enum class Outcome { Ok, AuthFailed, HttpError, ParseWarning, Skipped };
const char* to_string(Outcome outcome);

struct EndpointOutcome {
    std::string endpoint;
    Outcome outcome = Outcome::Skipped;
    int http_status = 0;          // last non-200 status for HttpError
    std::int64_t pages = 0;       // responses preserved in the evidence library
    std::int64_t items = 0;       // payload items seen (before dedup)
    std::vector<std::string> diagnostics;
};

struct AcquisitionReport {
    std::vector<EndpointOutcome> endpoints;  // one per catalog descriptor, catalog order
    std::int64_t artifacts = 0;
    std::int64_t content_rows = 0;
    std::int64_t events = 0;
    std::int64_t audio_files = 0;

    bool all_ok() const;  // every endpoint Ok or Skipped
    std::string to_text() const;
};

struct AcquireOptions {
    int page_size = 50;    // cards, activities, and per-device media
    int list_size = 100;   // single-fetch list endpoints (todos)
    int max_parallel = 4;  // concurrent fetches for independent endpoints
};

// Fetches every catalog endpoint (GET only), preserves each response in the
// evidence library, and normalizes into the case database. The report names
// every descriptor exactly once.
AcquisitionReport acquire_all(Session& session, evidence::CaseDatabase& casedb,
                              const AcquireOptions& options = {});

// Cursor walks over the two unbounded histories. Both store every fetched
// page and return the number of items seen.
Result<std::int64_t> paginate_cards(Session& session, evidence::CaseDatabase& casedb,
                                    const AcquireOptions& options = {});
Result<std::int64_t> paginate_activities(Session& session, evidence::CaseDatabase& casedb,
                                         const AcquireOptions& options = {});

Result<evidence::RawArtifact> download_utterance(Session& session, std::string_view audio_id,
                                                 evidence::CaseDatabase& casedb);

// ACQUIRED_FILE desc for a fetched endpoint URL: "A Bootstrap Account",
// "A Wifi Configs Customer Setting", ... Pages and per-device fetches append
// a deterministic suffix at the call site.
std::string artifact_desc(const catalog::ApiDescriptor& descriptor, std::string_view url);

}  // namespace cift::cloud
