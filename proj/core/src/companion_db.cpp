#include "cift/companion_db.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <memory>

#include "cift/blockfile.hpp"
#include "cift/hash.hpp"

namespace cift::embedded {
// Generated from core/data/companion_mappings.conf at configure time.
extern const unsigned char kCompanionMappings[];
extern const unsigned long kCompanionMappingsSize;
}  // namespace cift::embedded

namespace cift::companion {
namespace {

constexpr char kSqliteMagic[] = "SQLite format 3";
constexpr std::size_t kDumpRowCap = 200;

struct DbCloser {
    void operator()(sqlite3* db) const { sqlite3_close(db); }
};
using DbHandle = std::unique_ptr<sqlite3, DbCloser>;

struct StmtCloser {
    void operator()(sqlite3_stmt* stmt) const { sqlite3_finalize(stmt); }
};
using StmtHandle = std::unique_ptr<sqlite3_stmt, StmtCloser>;

std::string quote_identifier(std::string_view name) {
    std::string out = "\"";
    for (char c : name) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

// file: URI so the database opens immutable (no journal probing, no writes
// against the preserved copy).
std::string immutable_uri(const std::filesystem::path& path) {
    std::string encoded;
    for (char c : path.string()) {
        if (c == '%' || c == '#' || c == '?') {
            static constexpr char kHex[] = "0123456789ABCDEF";
            encoded += '%';
            encoded += kHex[(static_cast<unsigned char>(c) >> 4) & 0xF];
            encoded += kHex[static_cast<unsigned char>(c) & 0xF];
        } else {
            encoded += c;
        }
    }
    return "file:" + encoded + "?immutable=1";
}

Result<DbHandle> open_readonly(const std::filesystem::path& path) {
    sqlite3* raw = nullptr;
    const int rc = sqlite3_open_v2(immutable_uri(path).c_str(), &raw,
                                   SQLITE_OPEN_READONLY | SQLITE_OPEN_URI, nullptr);
    DbHandle db(raw);
    if (rc != SQLITE_OK)
        return Result<DbHandle>::failure(
            ErrorKind::Io, "cannot open " + path.string() + ": " + sqlite3_errstr(rc));
    return db;
}

Result<StmtHandle> prepare(sqlite3* db, const std::string& sql) {
    sqlite3_stmt* raw = nullptr;
    if (sqlite3_prepare_v2(db, sql.c_str(), -1, &raw, nullptr) != SQLITE_OK)
        return Result<StmtHandle>::failure(ErrorKind::Parse,
                                           std::string("prepare failed: ") + sqlite3_errmsg(db));
    return StmtHandle(raw);
}

std::string column_text(sqlite3_stmt* stmt, int column) {
    const unsigned char* text = sqlite3_column_text(stmt, column);
    return text ? reinterpret_cast<const char*>(text) : "";
}

std::vector<std::string> list_tables(sqlite3* db) {
    std::vector<std::string> tables;
    auto stmt = prepare(db,
                        "SELECT name FROM sqlite_master WHERE type = 'table' "
                        "AND name NOT LIKE 'sqlite_%' ORDER BY name");
    if (!stmt.ok()) return tables;
    while (sqlite3_step(stmt.value().get()) == SQLITE_ROW)
        tables.push_back(column_text(stmt.value().get(), 0));
    return tables;
}

std::vector<std::string> list_columns(sqlite3* db, const std::string& table) {
    std::vector<std::string> columns;
    auto stmt = prepare(db, "PRAGMA table_info(" + quote_identifier(table) + ")");
    if (!stmt.ok()) return columns;
    while (sqlite3_step(stmt.value().get()) == SQLITE_ROW)
        columns.push_back(column_text(stmt.value().get(), 1));
    return columns;
}

bool has_all_columns(const std::vector<std::string>& columns, const TableMapping& mapping) {
    for (const auto& [column, role] : mapping.roles) {
        if (std::find(columns.begin(), columns.end(), column) == columns.end()) return false;
    }
    return true;
}

void apply_mapping(sqlite3* db, const TableMapping& mapping, ExtractResult& out) {
    std::string sql = "SELECT ";
    for (std::size_t i = 0; i < mapping.roles.size(); ++i) {
        if (i) sql += ", ";
        sql += quote_identifier(mapping.roles[i].first);
    }
    sql += " FROM " + quote_identifier(mapping.table);
    auto stmt = prepare(db, sql);
    if (!stmt.ok()) {
        out.diagnostics.push_back(mapping.table + ": " + stmt.error().message);
        return;
    }
    while (sqlite3_step(stmt.value().get()) == SQLITE_ROW) {
        Finding finding;
        finding.kind = mapping.kind;
        finding.database = mapping.database;
        finding.source_table = mapping.table;
        for (std::size_t i = 0; i < mapping.roles.size(); ++i) {
            const std::string& role = mapping.roles[i].second;
            std::string value = column_text(stmt.value().get(), static_cast<int>(i));
            if (role == "secret") {
                finding.fields.emplace_back(role + "_sha1", value.empty() ? "" : sha1_hex(value));
            } else {
                finding.fields.emplace_back(role, std::move(value));
            }
        }
        out.findings.push_back(std::move(finding));
    }
}

void dump_table(sqlite3* db, const std::string& database_label, const std::string& table,
                ExtractResult& out) {
    auto stmt = prepare(db, "SELECT * FROM " + quote_identifier(table));
    if (!stmt.ok()) {
        out.diagnostics.push_back(table + ": " + stmt.error().message);
        return;
    }
    std::size_t rows = 0;
    while (sqlite3_step(stmt.value().get()) == SQLITE_ROW) {
        if (++rows > kDumpRowCap) {
            out.diagnostics.push_back(table + ": dump capped at " + std::to_string(kDumpRowCap) +
                                      " rows");
            break;
        }
        Finding finding;
        finding.kind = FindingKind::UnknownTableDump;
        finding.database = database_label;
        finding.source_table = table;
        const int count = sqlite3_column_count(stmt.value().get());
        for (int i = 0; i < count; ++i)
            finding.fields.emplace_back(sqlite3_column_name(stmt.value().get(), i),
                                        column_text(stmt.value().get(), i));
        out.findings.push_back(std::move(finding));
    }
}

Result<DbHandle> open_checked(const std::filesystem::path& path) {
    if (!std::filesystem::is_regular_file(path))
        return Result<DbHandle>::failure(ErrorKind::Io, "no such file: " + path.string());
    if (!looks_sqlite(path))
        return Result<DbHandle>::failure(ErrorKind::UnrecognizedFormat,
                                         path.filename().string() + " is not a SQLite database");
    return open_readonly(path);
}

// Runs every platform mapping whose table and columns are present; reports
// which ones applied.
ExtractResult run_mappings(sqlite3* db, Platform platform, FindingKind wanted,
                           std::vector<std::string>* applied) {
    ExtractResult out;
    const std::string platform_name = to_string(platform);
    const auto tables = list_tables(db);
    for (const auto& mapping : builtin_mappings()) {
        if (mapping.platform != platform_name || mapping.kind != wanted) continue;
        if (std::find(tables.begin(), tables.end(), mapping.table) == tables.end()) continue;
        if (!has_all_columns(list_columns(db, mapping.table), mapping)) {
            out.diagnostics.push_back("table " + mapping.table +
                                      " exists but lacks the expected columns");
            continue;
        }
        apply_mapping(db, mapping, out);
        if (applied) applied->push_back(mapping.label);
    }
    return out;
}

}  // namespace

const char* to_string(Platform platform) {
    return platform == Platform::Android ? "android" : "ios";
}

const char* to_string(FindingKind kind) {
    switch (kind) {
        case FindingKind::Token: return "TOKEN";
        case FindingKind::Todo: return "TODO";
        case FindingKind::UnknownTableDump: return "UNKNOWN_TABLE_DUMP";
    }
    return "UNKNOWN";
}

std::string Finding::get(std::string_view name) const {
    for (const auto& [key, value] : fields) {
        if (key == name) return value;
    }
    return "";
}

Result<std::vector<TableMapping>> load_mappings(std::string_view text) {
    auto blocks = parse_block_document(text);
    if (!blocks.ok())
        return Result<std::vector<TableMapping>>::failure(blocks.error().kind, blocks.error().message);
    std::vector<TableMapping> mappings;
    for (const auto& block : blocks.value()) {
        TableMapping mapping;
        const auto space = block.name.find(' ');
        if (space == std::string::npos)
            return Result<std::vector<TableMapping>>::failure(
                ErrorKind::Configuration, "mapping block '" + block.name + "' lacks a platform prefix");
        mapping.platform = block.name.substr(0, space);
        mapping.label = block.name;
        mapping.database = block.get("db");
        mapping.table = block.get("table");
        const std::string kind = block.get("kind");
        if (kind == "TOKEN") {
            mapping.kind = FindingKind::Token;
        } else if (kind == "TODO") {
            mapping.kind = FindingKind::Todo;
        } else {
            return Result<std::vector<TableMapping>>::failure(
                ErrorKind::Configuration, "mapping block '" + block.name + "' has kind '" + kind + "'");
        }
        for (const auto& [key, value] : block.entries) {
            if (key.rfind("role.", 0) == 0) mapping.roles.emplace_back(key.substr(5), value);
        }
        if (mapping.database.empty() || mapping.table.empty() || mapping.roles.empty())
            return Result<std::vector<TableMapping>>::failure(
                ErrorKind::Configuration, "mapping block '" + block.name + "' is incomplete");
        mappings.push_back(std::move(mapping));
    }
    return mappings;
}

const std::vector<TableMapping>& builtin_mappings() {
    static const std::vector<TableMapping> mappings = [] {
        auto loaded = load_mappings(std::string_view(
            reinterpret_cast<const char*>(cift::embedded::kCompanionMappings),
            cift::embedded::kCompanionMappingsSize));
        if (!loaded.ok())
            throw CaseError(ErrorKind::Configuration,
                            "embedded companion mappings are invalid: " + loaded.error().message);
        return std::move(loaded.value());
    }();
    return mappings;
}

bool looks_sqlite(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    char header[16] = {};
    in.read(header, sizeof header);
    return in.gcount() == sizeof header &&
           std::memcmp(header, kSqliteMagic, sizeof kSqliteMagic) == 0;
}

Result<ExtractResult> extract_database(const std::filesystem::path& path, Platform platform) {
    auto db = open_checked(path);
    if (!db.ok()) return Result<ExtractResult>::failure(db.error().kind, db.error().message);
    ExtractResult out = run_mappings(db.value().get(), platform, FindingKind::Token, nullptr);
    ExtractResult todos = run_mappings(db.value().get(), platform, FindingKind::Todo, nullptr);
    out.findings.insert(out.findings.end(), std::make_move_iterator(todos.findings.begin()),
                        std::make_move_iterator(todos.findings.end()));
    out.diagnostics.insert(out.diagnostics.end(), todos.diagnostics.begin(), todos.diagnostics.end());
    return out;
}

Result<ExtractResult> extract_android_token_db(const std::filesystem::path& path) {
    auto db = open_checked(path);
    if (!db.ok()) return Result<ExtractResult>::failure(db.error().kind, db.error().message);
    std::vector<std::string> applied;
    ExtractResult out = run_mappings(db.value().get(), Platform::Android, FindingKind::Token, &applied);
    if (applied.empty())
        out.diagnostics.push_back("no recognized token tables in " + path.filename().string());
    return out;
}

Result<ExtractResult> extract_todo_db(const std::filesystem::path& path, Platform platform) {
    auto db = open_checked(path);
    if (!db.ok()) return Result<ExtractResult>::failure(db.error().kind, db.error().message);
    std::vector<std::string> applied;
    ExtractResult out = run_mappings(db.value().get(), platform, FindingKind::Todo, &applied);
    if (applied.empty()) {
        out.diagnostics.push_back("no recognized to-do tables in " + path.filename().string() +
                                  "; dumping raw tables");
        const std::string label = platform == Platform::Android ? "datastore" : "localdata";
        for (const auto& table : list_tables(db.value().get()))
            dump_table(db.value().get(), label, table, out);
    }
    return out;
}

}  // namespace cift::companion
