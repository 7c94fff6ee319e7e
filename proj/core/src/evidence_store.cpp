#include "cift/evidence_store.hpp"

#include <sqlite3.h>

#include <cstdlib>
#include <fstream>
#include <mutex>

#include "cift/epoch.hpp"
#include "cift/hash.hpp"

namespace cift::evidence {

namespace {

// RAII wrapper over sqlite3_stmt with 1-based text binding.
class Statement {
public:
    Statement(sqlite3* db, const std::string& sql) : db_(db) {
        if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt_, nullptr) != SQLITE_OK)
            throw CaseError(ErrorKind::Configuration,
                            "sql prepare failed: " + std::string(sqlite3_errmsg(db)) +
                                " in \"" + sql + "\"");
    }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;
    ~Statement() { sqlite3_finalize(stmt_); }

    void bind(int index, std::string_view value) {
        if (sqlite3_bind_text(stmt_, index, value.data(), static_cast<int>(value.size()),
                              SQLITE_TRANSIENT) != SQLITE_OK)
            throw CaseError(ErrorKind::Configuration,
                            "sql bind failed: " + std::string(sqlite3_errmsg(db_)));
    }

    // True while a row is available.
    bool step() {
        int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) return true;
        if (rc == SQLITE_DONE) return false;
        throw CaseError(ErrorKind::Configuration,
                        "sql step failed: " + std::string(sqlite3_errmsg(db_)));
    }

    std::string column_text(int index) const {
        const unsigned char* text = sqlite3_column_text(stmt_, index);
        return text ? reinterpret_cast<const char*>(text) : "";
    }
    std::int64_t column_int64(int index) const { return sqlite3_column_int64(stmt_, index); }
    int column_count() const { return sqlite3_column_count(stmt_); }
    std::string column_name(int index) const { return sqlite3_column_name(stmt_, index); }

private:
    sqlite3* db_ = nullptr;
    sqlite3_stmt* stmt_ = nullptr;
};

constexpr const char* kSchema[] = {
    R"(CREATE TABLE IF NOT EXISTS meta (
         key TEXT PRIMARY KEY,
         value TEXT NOT NULL))",
    R"(CREATE TABLE IF NOT EXISTS ACQUIRED_FILE (
         id INTEGER PRIMARY KEY AUTOINCREMENT,
         operation TEXT NOT NULL,
         src_path TEXT NOT NULL,
         "desc" TEXT NOT NULL,
         saved_path TEXT NOT NULL,
         sha1 TEXT NOT NULL,
         saved_timestamp TEXT NOT NULL,
         UNIQUE (operation, "desc", sha1)))",
    R"(CREATE TABLE IF NOT EXISTS ACCOUNT (
         source_id INTEGER NOT NULL REFERENCES ACQUIRED_FILE(id),
         timezone TEXT NOT NULL DEFAULT '',
         customer_email TEXT NOT NULL DEFAULT '',
         customer_name TEXT NOT NULL DEFAULT '',
         customer_id TEXT NOT NULL DEFAULT '',
         UNIQUE (customer_email, customer_name, customer_id)))",
    R"(CREATE TABLE IF NOT EXISTS ALEXA_DEVICE (
         source_id INTEGER NOT NULL REFERENCES ACQUIRED_FILE(id),
         device_account_name TEXT NOT NULL DEFAULT '',
         device_account_id TEXT NOT NULL DEFAULT '',
         customer_id TEXT NOT NULL DEFAULT '',
         device_serial_number TEXT NOT NULL,
         device_type TEXT NOT NULL DEFAULT '',
         sw_version TEXT NOT NULL DEFAULT '',
         mac_address TEXT NOT NULL DEFAULT '',
         address TEXT NOT NULL DEFAULT '',
         postal_code TEXT NOT NULL DEFAULT '',
         locale TEXT NOT NULL DEFAULT '',
         timezone TEXT NOT NULL DEFAULT '',
         UNIQUE (device_serial_number)))",
    R"(CREATE TABLE IF NOT EXISTS SETTING_WIFI (
         source_id INTEGER NOT NULL REFERENCES ACQUIRED_FILE(id),
         ssid TEXT NOT NULL DEFAULT '',
         security_method TEXT NOT NULL DEFAULT '',
         pre_shared_key TEXT NOT NULL DEFAULT '',
         UNIQUE (ssid, security_method, pre_shared_key)))",
    R"(CREATE TABLE IF NOT EXISTS SETTING_MISC (
         source_id INTEGER NOT NULL REFERENCES ACQUIRED_FILE(id),
         name TEXT NOT NULL,
         value TEXT NOT NULL,
         UNIQUE (name, value)))",
    R"(CREATE TABLE IF NOT EXISTS SKILL (
         source_id INTEGER NOT NULL REFERENCES ACQUIRED_FILE(id),
         title TEXT NOT NULL DEFAULT '',
         developer_name TEXT NOT NULL DEFAULT '',
         account_linked TEXT NOT NULL DEFAULT '',
         release_date TEXT NOT NULL DEFAULT '',
         UNIQUE (title, developer_name, account_linked, release_date)))",
    R"(CREATE TABLE IF NOT EXISTS COMPATIBLE_DEVICE (
         source_id INTEGER NOT NULL REFERENCES ACQUIRED_FILE(id),
         name TEXT NOT NULL DEFAULT '',
         manufacture TEXT NOT NULL DEFAULT '',
         model TEXT NOT NULL DEFAULT '',
         created TEXT NOT NULL DEFAULT '',
         name_modified TEXT NOT NULL DEFAULT '',
         "desc" TEXT NOT NULL DEFAULT '',
         type TEXT NOT NULL DEFAULT '',
         reachable TEXT NOT NULL DEFAULT '',
         firmware_version TEXT NOT NULL DEFAULT '',
         appliance_id TEXT NOT NULL DEFAULT '',
         alexa_device_serial_number TEXT NOT NULL DEFAULT '',
         alexa_device_type TEXT NOT NULL DEFAULT '',
         UNIQUE (name, manufacture, model, created, name_modified, "desc", type,
                 reachable, firmware_version, appliance_id, alexa_device_serial_number,
                 alexa_device_type)))",
    R"(CREATE TABLE IF NOT EXISTS TIMELINE (
         source_id INTEGER NOT NULL REFERENCES ACQUIRED_FILE(id),
         date TEXT NOT NULL,
         time TEXT NOT NULL,
         timezone TEXT NOT NULL DEFAULT 'UTC',
         MACB TEXT NOT NULL,
         source TEXT NOT NULL,
         sourcetype TEXT NOT NULL,
         type TEXT NOT NULL,
         user TEXT NOT NULL DEFAULT '',
         host TEXT NOT NULL DEFAULT '',
         short TEXT NOT NULL DEFAULT '',
         "desc" TEXT NOT NULL DEFAULT '',
         filename TEXT NOT NULL DEFAULT '',
         notes TEXT NOT NULL DEFAULT '',
         format TEXT NOT NULL DEFAULT 'JSON',
         extra TEXT NOT NULL DEFAULT '',
         client_only INTEGER NOT NULL DEFAULT 0,
         UNIQUE (date, time, MACB, source, sourcetype, type, user, host, short,
                 "desc", notes, format, extra)))",
};

std::string quote_identifier(const std::string& name) {
    return "\"" + name + "\"";
}

Result<std::vector<std::uint8_t>> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return Result<std::vector<std::uint8_t>>::failure(
            ErrorKind::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad())
        return Result<std::vector<std::uint8_t>>::failure(ErrorKind::Io,
                                                          "read failed for " + path.string());
    return bytes;
}

}  // namespace

const char* to_string(Operation operation) {
    switch (operation) {
        case Operation::Cloud: return "CLOUD";
        case Operation::CompanionAppAndroid: return "COMPANION_APP_ANDROID";
        case Operation::CompanionAppIos: return "COMPANION_APP_IOS";
        case Operation::CompanionBrowserChrome: return "COMPANION_BROWSER_CHROME";
    }
    return "CLOUD";
}

std::filesystem::path expand_user_path(std::string_view path) {
    if (path.empty() || path[0] != '~') return std::filesystem::path(path);
    if (path.size() > 1 && path[1] != '/') return std::filesystem::path(path);
    const char* home = std::getenv("HOME");
    if (!home || !*home) return std::filesystem::path(path);
    std::filesystem::path expanded(home);
    if (path.size() > 2) expanded /= std::filesystem::path(std::string(path.substr(2)));
    return expanded;
}

struct CaseDatabase::Impl {
    std::filesystem::path dir;
    sqlite3* db = nullptr;
    mutable std::mutex lock;

    ~Impl() {
        if (db) sqlite3_close(db);
    }

    void exec(const char* sql) {
        char* message = nullptr;
        if (sqlite3_exec(db, sql, nullptr, nullptr, &message) != SQLITE_OK) {
            std::string detail = message ? message : "unknown sqlite error";
            sqlite3_free(message);
            throw CaseError(ErrorKind::Configuration, "sql exec failed: " + detail);
        }
    }

    bool table_exists(const std::string& name) {
        Statement stmt(db, "SELECT 1 FROM sqlite_master WHERE type = 'table' AND name = ?1");
        stmt.bind(1, name);
        return stmt.step();
    }

    std::string meta_value(const std::string& key, const std::string& fallback) {
        Statement stmt(db, "SELECT value FROM meta WHERE key = ?1");
        stmt.bind(1, key);
        if (stmt.step()) return stmt.column_text(0);
        return fallback;
    }
};

CaseDatabase CaseDatabase::init_case(const std::filesystem::path& base_dir) {
    auto impl = std::make_shared<Impl>();
    impl->dir = base_dir.empty() ? std::filesystem::path(".") : base_dir;

    std::error_code ec;
    std::filesystem::create_directories(impl->dir / "evidence", ec);
    if (ec)
        throw CaseError(ErrorKind::Configuration,
                        "cannot create case directory " + impl->dir.string() + ": " + ec.message());

    std::filesystem::path db_path = impl->dir / "case.db";
    bool existed = std::filesystem::exists(db_path) && std::filesystem::file_size(db_path, ec) > 0;

    if (sqlite3_open_v2(db_path.string().c_str(), &impl->db,
                        SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                        nullptr) != SQLITE_OK) {
        std::string detail = impl->db ? sqlite3_errmsg(impl->db) : "open failed";
        throw CaseError(ErrorKind::Configuration,
                        "cannot open case database " + db_path.string() + ": " + detail);
    }
    impl->exec("PRAGMA foreign_keys = ON");

    if (existed) {
        // Never silently overwrite an unknown database claiming to be a case.
        if (!impl->table_exists("meta"))
            throw CaseError(ErrorKind::SchemaVersion,
                            db_path.string() + " exists but carries no schema marker");
        std::string version = impl->meta_value("schema_version", "");
        if (version != std::to_string(kSchemaVersion))
            throw CaseError(ErrorKind::SchemaVersion,
                            db_path.string() + " has schema version \"" + version +
                                "\"; this build supports version " +
                                std::to_string(kSchemaVersion) + " only");
    }

    for (const char* statement : kSchema) impl->exec(statement);
    {
        Statement stmt(impl->db,
                       "INSERT OR IGNORE INTO meta (key, value) VALUES ('schema_version', ?1)");
        stmt.bind(1, std::to_string(kSchemaVersion));
        stmt.step();
    }

    // Verify writability explicitly so a read-only reopen fails here, not on
    // first ingestion.
    impl->exec("BEGIN IMMEDIATE; COMMIT");

    CaseDatabase database;
    database.impl_ = std::move(impl);
    return database;
}

const std::filesystem::path& CaseDatabase::case_dir() const { return impl_->dir; }

std::filesystem::path CaseDatabase::evidence_dir() const { return impl_->dir / "evidence"; }

sqlite3* CaseDatabase::handle() const { return impl_->db; }

Result<RawArtifact> CaseDatabase::store_raw_artifact(Operation operation,
                                                     std::string_view src_path,
                                                     std::string_view desc,
                                                     std::span<const std::uint8_t> content,
                                                     std::string_view extension) {
    if (content.size() > kMaxArtifactBytes)
        return Result<RawArtifact>::failure(
            ErrorKind::Parameter, "artifact exceeds the configured maximum of " +
                                      std::to_string(kMaxArtifactBytes) + " bytes");

    RawArtifact artifact;
    artifact.operation = operation;
    artifact.src_path = std::string(src_path);
    artifact.desc = std::string(desc);
    artifact.sha1 = sha1_hex(content);

    std::lock_guard<std::mutex> guard(impl_->lock);

    {
        Statement stmt(impl_->db,
                       "SELECT id, src_path, saved_path, saved_timestamp FROM ACQUIRED_FILE "
                       "WHERE operation = ?1 AND \"desc\" = ?2 AND sha1 = ?3");
        stmt.bind(1, to_string(operation));
        stmt.bind(2, desc);
        stmt.bind(3, artifact.sha1);
        if (stmt.step()) {
            artifact.id = stmt.column_int64(0);
            artifact.src_path = stmt.column_text(1);
            artifact.saved_path = stmt.column_text(2);
            artifact.saved_timestamp = stmt.column_text(3);
            return artifact;
        }
    }

    // The filename hashes the origin, the sha1 column hashes the content.
    std::string stem = sha1_hex(src_path);
    std::string suffix = extension.empty() ? "" : "." + std::string(extension);
    std::filesystem::path target;
    bool already_on_disk = false;
    for (int attempt = 0;; ++attempt) {
        std::string name =
            attempt == 0 ? stem + suffix : stem + "-" + std::to_string(attempt) + suffix;
        target = impl_->dir / "evidence" / name;
        if (!std::filesystem::exists(target)) break;
        auto existing = read_file_bytes(target);
        if (existing.ok() && sha1_hex(std::span<const std::uint8_t>(existing.value())) ==
                                 artifact.sha1) {
            already_on_disk = true;  // same origin and bytes, only the desc is new
            break;
        }
    }

    if (!already_on_disk) {
        std::ofstream out(target, std::ios::binary | std::ios::trunc);
        if (!out)
            return Result<RawArtifact>::failure(ErrorKind::Io,
                                                "cannot write " + target.string());
        out.write(reinterpret_cast<const char*>(content.data()),
                  static_cast<std::streamsize>(content.size()));
        out.close();
        if (out.fail())
            return Result<RawArtifact>::failure(ErrorKind::Io, "write failed for " +
                                                                   target.string());

        auto written = read_file_bytes(target);
        if (!written.ok()) return written.error();
        if (sha1_hex(std::span<const std::uint8_t>(written.value())) != artifact.sha1) {
            std::error_code ec;
            std::filesystem::remove(target, ec);
            return Result<RawArtifact>::failure(
                ErrorKind::Integrity, "read-back digest mismatch for " + target.string());
        }
    }

    artifact.saved_path = target.string();
    artifact.saved_timestamp = utc_now_string();

    Statement stmt(impl_->db,
                   "INSERT INTO ACQUIRED_FILE (operation, src_path, \"desc\", saved_path, sha1, "
                   "saved_timestamp) VALUES (?1, ?2, ?3, ?4, ?5, ?6)");
    stmt.bind(1, to_string(operation));
    stmt.bind(2, artifact.src_path);
    stmt.bind(3, artifact.desc);
    stmt.bind(4, artifact.saved_path);
    stmt.bind(5, artifact.sha1);
    stmt.bind(6, artifact.saved_timestamp);
    stmt.step();
    artifact.id = sqlite3_last_insert_rowid(impl_->db);
    return artifact;
}

std::vector<IntegrityViolation> CaseDatabase::verify_evidence() {
    std::lock_guard<std::mutex> guard(impl_->lock);
    std::vector<IntegrityViolation> violations;

    Statement stmt(impl_->db, "SELECT id, saved_path, sha1 FROM ACQUIRED_FILE ORDER BY id");
    while (stmt.step()) {
        IntegrityViolation violation;
        violation.artifact_id = stmt.column_int64(0);
        std::filesystem::path path = stmt.column_text(1);
        std::string recorded = stmt.column_text(2);

        if (!std::filesystem::exists(path)) {
            violation.kind = ViolationKind::Missing;
            violation.detail = "evidence file missing: " + path.string();
            violations.push_back(std::move(violation));
            continue;
        }
        auto bytes = read_file_bytes(path);
        if (!bytes.ok()) {
            violation.kind = ViolationKind::Missing;
            violation.detail = bytes.error().message;
            violations.push_back(std::move(violation));
            continue;
        }
        std::string actual = sha1_hex(std::span<const std::uint8_t>(bytes.value()));
        if (actual != recorded) {
            violation.kind = ViolationKind::HashMismatch;
            violation.detail = path.string() + ": recorded " + recorded + ", recomputed " + actual;
            violations.push_back(std::move(violation));
        }
    }
    return violations;
}

std::int64_t CaseDatabase::execute(const std::string& sql,
                                   const std::vector<std::string>& params) {
    std::lock_guard<std::mutex> guard(impl_->lock);
    Statement stmt(impl_->db, sql);
    for (std::size_t i = 0; i < params.size(); ++i)
        stmt.bind(static_cast<int>(i + 1), params[i]);
    while (stmt.step()) {
    }
    return sqlite3_changes64(impl_->db);
}

std::vector<CaseDatabase::Row> CaseDatabase::query(const std::string& sql,
                                                   const std::vector<std::string>& params) const {
    std::lock_guard<std::mutex> guard(impl_->lock);
    Statement stmt(impl_->db, sql);
    for (std::size_t i = 0; i < params.size(); ++i)
        stmt.bind(static_cast<int>(i + 1), params[i]);

    std::vector<Row> rows;
    while (stmt.step()) {
        Row row;
        for (int column = 0; column < stmt.column_count(); ++column)
            row.emplace_back(stmt.column_name(column), stmt.column_text(column));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::int64_t CaseDatabase::row_count(const std::string& table) const {
    auto rows = query("SELECT COUNT(*) AS n FROM " + quote_identifier(table));
    return rows.empty() ? 0 : std::strtoll(rows[0][0].second.c_str(), nullptr, 10);
}

void CaseDatabase::set_meta(const std::string& key, const std::string& value) {
    execute("INSERT INTO meta (key, value) VALUES (?1, ?2) "
            "ON CONFLICT(key) DO UPDATE SET value = excluded.value",
            {key, value});
}

std::string CaseDatabase::get_meta(const std::string& key, const std::string& fallback) const {
    auto rows = query("SELECT value FROM meta WHERE key = ?1", {key});
    return rows.empty() ? fallback : rows[0][0].second;
}

bool CaseDatabase::insert_row(const std::string& table, const Row& columns) {
    std::string sql = "INSERT OR IGNORE INTO " + quote_identifier(table) + " (";
    std::string placeholders;
    std::vector<std::string> params;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) {
            sql += ", ";
            placeholders += ", ";
        }
        sql += quote_identifier(columns[i].first);
        placeholders += "?" + std::to_string(i + 1);
        params.push_back(columns[i].second);
    }
    sql += ") VALUES (" + placeholders + ")";
    return execute(sql, params) > 0;
}

bool CaseDatabase::upsert_alexa_device(const Row& columns) {
    std::string serial;
    for (const auto& [name, value] : columns)
        if (name == "device_serial_number") serial = value;
    if (serial.empty()) return false;

    bool exists = !query("SELECT 1 FROM ALEXA_DEVICE WHERE device_serial_number = ?1", {serial})
                       .empty();
    if (!exists) return insert_row("ALEXA_DEVICE", columns);

    // Merge: fill columns this payload carries, keep the rest.
    for (const auto& [name, value] : columns) {
        if (name == "device_serial_number" || name == "source_id" || value.empty()) continue;
        execute("UPDATE ALEXA_DEVICE SET " + quote_identifier(name) +
                    " = ?1 WHERE device_serial_number = ?2",
                {value, serial});
    }
    return false;
}

}  // namespace cift::evidence
