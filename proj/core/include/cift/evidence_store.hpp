#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cift/error.hpp"

struct sqlite3;

namespace cift::evidence {

// The four acquisition paths recorded in ACQUIRED_FILE.operation.
enum class Operation {
    Cloud,
    CompanionAppAndroid,
    CompanionAppIos,
    CompanionBrowserChrome,
};

const char* to_string(Operation operation);

// One preserved source file: a row of ACQUIRED_FILE plus the file it points
// at. `sha1` hashes the content; the evidence filename hashes the src_path,
// so the two digests differ by design.
struct RawArtifact {
    std::int64_t id = 0;
    Operation operation = Operation::Cloud;
    std::string src_path;
    std::string desc;
    std::string saved_path;
    std::string sha1;
    std::string saved_timestamp;
};

enum class ViolationKind { Missing, HashMismatch };

struct IntegrityViolation {
    std::int64_t artifact_id = 0;
    ViolationKind kind = ViolationKind::Missing;
    std::string detail;
};

// `~` and `~/...` expanded against $HOME; other paths returned untouched.
std::filesystem::path expand_user_path(std::string_view path);

// The case output directory: `<case>/case.db` plus the evidence library at
// `<case>/evidence/`. All writes are serialized internally; the value may be
// copied and handed between threads.
class CaseDatabase {
public:
    CaseDatabase() = default;

    // Creates or reopens a case directory. Throws CaseError(Configuration)
    // when the path is unusable and CaseError(SchemaVersion) when case.db
    // carries an unknown schema version.
    static CaseDatabase init_case(const std::filesystem::path& base_dir);

    bool valid() const { return impl_ != nullptr; }
    const std::filesystem::path& case_dir() const;
    std::filesystem::path evidence_dir() const;

    // Preserves `content` in the evidence library and registers it in
    // ACQUIRED_FILE. Storing an identical (operation, desc, content) again
    // returns the original row and writes nothing.
    Result<RawArtifact> store_raw_artifact(Operation operation, std::string_view src_path,
                                           std::string_view desc,
                                           std::span<const std::uint8_t> content,
                                           std::string_view extension);

    // Recomputes every ACQUIRED_FILE digest; empty when the library is intact.
    std::vector<IntegrityViolation> verify_evidence();

    // Generic parameterized statement helpers. Statements are serialized
    // through the case write lock; parameters bind as text (SQLite affinity
    // coerces numeric columns). Throws CaseError on SQL errors.
    std::int64_t execute(const std::string& sql, const std::vector<std::string>& params = {});

    using Row = std::vector<std::pair<std::string, std::string>>;
    std::vector<Row> query(const std::string& sql,
                           const std::vector<std::string>& params = {}) const;

    std::int64_t row_count(const std::string& table) const;

    // Case-wide key/value metadata (schema_version, zone_label, customer_id).
    void set_meta(const std::string& key, const std::string& value);
    std::string get_meta(const std::string& key, const std::string& fallback = "") const;

    // Inserts with duplicate suppression (the per-table identity indexes make
    // re-ingestion a no-op). Returns true when a new row was added.
    bool insert_row(const std::string& table, const Row& columns);

    // ALEXA_DEVICE rows merge on device_serial_number: devices/device and
    // device-preferences each carry half the columns. True when the serial
    // was new.
    bool upsert_alexa_device(const Row& columns);

    // Escape hatch for module-internal queries and tests.
    sqlite3* handle() const;

    static constexpr std::size_t kMaxArtifactBytes = 256ull * 1024 * 1024;
    static constexpr int kSchemaVersion = 1;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

}  // namespace cift::evidence
