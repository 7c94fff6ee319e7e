#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cift/error.hpp"

namespace cift::companion {

enum class Platform { Android, Ios };
const char* to_string(Platform platform);

enum class FindingKind { Token, Todo, UnknownTableDump };
const char* to_string(FindingKind kind);

// One extracted fact. Fields are keyed by schema-independent role names
// (text, created_ms, account_id, ...) so downstream code never sees the
// app-specific column names; UnknownTableDump findings keep the raw column
// names instead, one finding per row.
struct Finding {
    FindingKind kind = FindingKind::UnknownTableDump;
    std::string database;  // logical label: map_data_storage / datastore / localdata
    std::string source_table;
    std::vector<std::pair<std::string, std::string>> fields;

    std::string get(std::string_view name) const;
};

struct ExtractResult {
    std::vector<Finding> findings;
    std::vector<std::string> diagnostics;
};

// One [platform name] block of the mapping document.
struct TableMapping {
    std::string platform;
    std::string label;
    std::string database;
    std::string table;
    FindingKind kind = FindingKind::Token;
    std::vector<std::pair<std::string, std::string>> roles;  // column -> role
};

Result<std::vector<TableMapping>> load_mappings(std::string_view text);
const std::vector<TableMapping>& builtin_mappings();

// True when the file starts with the SQLite 3 header string.
bool looks_sqlite(const std::filesystem::path& path);

// Applies every matching mapping for the platform. Tables without a mapping
// are ignored here; the specialised entry points below decide the fallback.
Result<ExtractResult> extract_database(const std::filesystem::path& path, Platform platform);

// map_data_storage.db: account identity plus token material. Token and key
// values (roles `secret`) are replaced by their SHA-1, reported under
// `<role>_sha1`; the raw bytes stay only in the preserved evidence copy.
// Unknown schema yields zero findings plus a diagnostic.
Result<ExtractResult> extract_android_token_db(const std::filesystem::path& path);

// DataStore.db / LocalData.sqlite: to-do and shopping items. Unknown schema
// degrades to UnknownTableDump findings covering every table.
Result<ExtractResult> extract_todo_db(const std::filesystem::path& path, Platform platform);

}  // namespace cift::companion
