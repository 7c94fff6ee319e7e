#include "cift/ingest.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "cift/api_catalog.hpp"
#include "cift/chrome_cache.hpp"
#include "cift/companion_db.hpp"
#include "cift/normalizer.hpp"
#include "cift/webview_cache.hpp"

namespace cift::ingest {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Result<std::vector<std::uint8_t>> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return Result<std::vector<std::uint8_t>>::failure(ErrorKind::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) return Result<std::vector<std::uint8_t>>::failure(ErrorKind::Io, "read failed: " + path.string());
    return bytes;
}

// `deviceSerialNumber` query parameter, for the media host column.
std::string serial_from_url(std::string_view url) {
    const auto query = url.find('?');
    if (query == std::string_view::npos) return "";
    std::string_view rest = url.substr(query + 1);
    while (!rest.empty()) {
        const auto amp = rest.find('&');
        const std::string_view pair = amp == std::string_view::npos ? rest : rest.substr(0, amp);
        const auto eq = pair.find('=');
        if (eq != std::string_view::npos && pair.substr(0, eq) == "deviceSerialNumber")
            return std::string(pair.substr(eq + 1));
        if (amp == std::string_view::npos) break;
        rest = rest.substr(amp + 1);
    }
    return "";
}

normalize::NormalizeContext make_context(evidence::CaseDatabase& casedb,
                                         evidence::Operation operation) {
    normalize::NormalizeContext ctx;
    ctx.operation = operation;
    ctx.zone_label = casedb.get_meta("zone_label", "UTC");
    ctx.default_user = casedb.get_meta("customer_id");
    return ctx;
}

// Run one recovered payload through the catalog and the normalizer.
void normalize_payload(evidence::CaseDatabase& casedb, normalize::NormalizeContext ctx,
                       const std::string& url, const std::vector<std::uint8_t>& payload,
                       std::int64_t source_id, const std::string& saved_path,
                       IngestReport& report) {
    const auto* descriptor = catalog::ApiCatalog::builtin().match_url(url);
    if (!descriptor) {
        report.diagnostics.push_back(url + ": no catalog endpoint matches; preserved only");
        return;
    }
    ctx.filename = saved_path;
    ctx.host_hint = serial_from_url(url);
    auto normalized = normalize::normalize(payload, *descriptor, source_id, ctx);
    if (!normalized.ok()) {
        report.diagnostics.push_back(url + ": " + normalized.error().message);
        return;
    }
    for (const auto& warning : normalized.value().warnings) report.diagnostics.push_back(warning);
    const auto counts = normalize::apply(casedb, normalized.value());
    report.content_rows += counts.records;
    report.events += counts.events;
    ++report.parsed;
}

// Preserve one client file; nullopt id on failure (already diagnosed).
Result<evidence::RawArtifact> preserve(evidence::CaseDatabase& casedb,
                                       evidence::Operation operation,
                                       const std::filesystem::path& file, const std::string& desc,
                                       std::string_view extension, IngestReport& report) {
    auto bytes = read_file(file);
    if (!bytes.ok())
        return Result<evidence::RawArtifact>::failure(bytes.error().kind, bytes.error().message);
    auto artifact =
        casedb.store_raw_artifact(operation, file.string(), desc, bytes.value(), extension);
    if (artifact.ok()) ++report.artifacts;
    return artifact;
}

void ingest_token_findings(evidence::CaseDatabase& casedb, const companion::ExtractResult& extracted,
                           std::int64_t source_id, IngestReport& report) {
    for (const auto& finding : extracted.findings) {
        if (finding.kind != companion::FindingKind::Token) continue;
        // Account identity rows double into ACCOUNT; everything lands in
        // SETTING_MISC as the token inventory.
        const std::string account_id = finding.get("account_id");
        const std::string account_name = finding.get("account_name");
        if (!account_name.empty() || !account_id.empty()) {
            if (casedb.insert_row("ACCOUNT", {{"source_id", std::to_string(source_id)},
                                              {"timezone", ""},
                                              {"customer_email", ""},
                                              {"customer_name", account_name},
                                              {"customer_id", account_id}}))
                ++report.content_rows;
        }
        ordered_json value;
        value["table"] = finding.source_table;
        for (const auto& [key, text] : finding.fields) value[key] = text;
        if (casedb.insert_row("SETTING_MISC", {{"source_id", std::to_string(source_id)},
                                               {"name", "active_user_token"},
                                               {"value", value.dump()}}))
            ++report.content_rows;
    }
}

void ingest_todo_findings(evidence::CaseDatabase& casedb, const companion::ExtractResult& extracted,
                          std::int64_t source_id, const normalize::NormalizeContext& ctx,
                          const std::string& saved_path, IngestReport& report) {
    normalize::Normalized batch;
    for (const auto& finding : extracted.findings) {
        if (finding.kind == companion::FindingKind::Todo) {
            normalize::TodoItem item;
            item.text = finding.get("text");
            item.customer_id = finding.get("customer_id");
            item.audio_id = normalize::audio_id_from(finding.get("audio_id"));
            item.shopping = finding.get("type_discriminator").find("SHOPPING") != std::string::npos;
            try {
                const std::string created = finding.get("created_ms");
                if (!created.empty()) item.created_ms = std::stoll(created);
                const std::string updated = finding.get("updated_ms");
                if (!updated.empty()) item.updated_ms = std::stoll(updated);
            } catch (const std::exception&) {
                report.diagnostics.push_back(finding.source_table +
                                             ": non-numeric timestamp on \"" + item.text + "\"");
            }
            normalize::NormalizeContext item_ctx = ctx;
            item_ctx.filename = saved_path;
            normalize::normalize_todo_item(item, source_id, item_ctx, batch);
        } else if (finding.kind == companion::FindingKind::UnknownTableDump) {
            ordered_json value;
            value["table"] = finding.source_table;
            for (const auto& [key, text] : finding.fields) value[key] = text;
            if (casedb.insert_row("SETTING_MISC", {{"source_id", std::to_string(source_id)},
                                                   {"name", "unknown_table_dump"},
                                                   {"value", value.dump()}}))
                ++report.content_rows;
        }
    }
    for (const auto& warning : batch.warnings) report.diagnostics.push_back(warning);
    const auto counts = normalize::apply(casedb, batch);
    report.content_rows += counts.records;
    report.events += counts.events;
}

void ingest_todo_db(evidence::CaseDatabase& casedb, const std::filesystem::path& file,
                    const std::string& relpath, evidence::Operation operation,
                    companion::Platform platform, IngestReport& report) {
    ++report.files_seen;
    auto artifact =
        preserve(casedb, operation, file, "A Todo Database (" + relpath + ")", "db", report);
    if (!artifact.ok()) {
        ++report.skipped;
        report.diagnostics.push_back(relpath + ": " + artifact.error().message);
        return;
    }
    auto extracted = companion::extract_todo_db(file, platform);
    if (!extracted.ok()) {
        ++report.skipped;
        report.diagnostics.push_back(relpath + ": " + extracted.error().message);
        return;
    }
    for (const auto& diagnostic : extracted.value().diagnostics)
        report.diagnostics.push_back(relpath + ": " + diagnostic);
    ingest_todo_findings(casedb, extracted.value(), artifact.value().id,
                         make_context(casedb, operation), artifact.value().saved_path, report);
    ++report.parsed;
}

}  // namespace

std::string IngestReport::to_text() const {
    char line[240];
    std::snprintf(line, sizeof line,
                  "%zu files seen, %zu parsed, %zu skipped; %lld preserved, %lld content rows, "
                  "%lld timeline events\n",
                  files_seen, parsed, skipped, static_cast<long long>(artifacts),
                  static_cast<long long>(content_rows), static_cast<long long>(events));
    return line;
}

Result<IngestReport> ingest_app_android(evidence::CaseDatabase& casedb,
                                        const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root))
        return Result<IngestReport>::failure(ErrorKind::Configuration,
                                             "not a directory: " + root.string());
    IngestReport report;
    const auto operation = evidence::Operation::CompanionAppAndroid;

    const auto token_db = root / "databases" / "map_data_storage.db";
    if (std::filesystem::is_regular_file(token_db)) {
        ++report.files_seen;
        auto artifact = preserve(casedb, operation, token_db,
                                 "A Token Database (databases/map_data_storage.db)", "db", report);
        if (artifact.ok()) {
            auto extracted = companion::extract_android_token_db(token_db);
            if (extracted.ok()) {
                for (const auto& diagnostic : extracted.value().diagnostics)
                    report.diagnostics.push_back("map_data_storage.db: " + diagnostic);
                ingest_token_findings(casedb, extracted.value(), artifact.value().id, report);
                ++report.parsed;
            } else {
                ++report.skipped;
                report.diagnostics.push_back("map_data_storage.db: " + extracted.error().message);
            }
        } else {
            ++report.skipped;
            report.diagnostics.push_back("map_data_storage.db: " + artifact.error().message);
        }
    }

    const auto todo_db = root / "databases" / "DataStore.db";
    if (std::filesystem::is_regular_file(todo_db))
        ingest_todo_db(casedb, todo_db, "databases/DataStore.db", operation,
                       companion::Platform::Android, report);

    const auto cache_dir = root / "app_webview" / "Cache";
    if (std::filesystem::is_directory(cache_dir)) {
        auto scan = webview::scan_cache_dir(cache_dir);
        report.files_seen += scan.files_seen;
        report.skipped += scan.unparsed + scan.filtered_out;
        for (const auto& diagnostic : scan.diagnostics) report.diagnostics.push_back(diagnostic);
        normalize::NormalizeContext ctx = make_context(casedb, operation);
        for (const auto& entry : scan.entries) {
            const std::string relpath =
                std::filesystem::relative(entry.source_file, root).generic_string();
            auto bytes = read_file(entry.source_file);
            if (!bytes.ok()) {
                ++report.skipped;
                report.diagnostics.push_back(relpath + ": " + bytes.error().message);
                continue;
            }
            auto artifact = casedb.store_raw_artifact(operation, entry.source_file.string(),
                                                      "A WebView Cache (" + relpath + ")",
                                                      bytes.value(), "cache");
            if (!artifact.ok()) {
                ++report.skipped;
                report.diagnostics.push_back(relpath + ": " + artifact.error().message);
                continue;
            }
            ++report.artifacts;
            normalize_payload(casedb, ctx, entry.original_url, entry.decoded_payload,
                              artifact.value().id, artifact.value().saved_path, report);
        }
    }

    if (report.files_seen == 0)
        report.diagnostics.push_back("no companion app artifacts under " + root.string());
    return report;
}

Result<IngestReport> ingest_app_ios(evidence::CaseDatabase& casedb,
                                    const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root))
        return Result<IngestReport>::failure(ErrorKind::Configuration,
                                             "not a directory: " + root.string());
    IngestReport report;
    const auto todo_db = root / "Documents" / "LocalData.sqlite";
    if (std::filesystem::is_regular_file(todo_db)) {
        ingest_todo_db(casedb, todo_db, "Documents/LocalData.sqlite",
                       evidence::Operation::CompanionAppIos, companion::Platform::Ios, report);
    } else {
        report.diagnostics.push_back("no Documents/LocalData.sqlite under " + root.string());
    }
    return report;
}

Result<IngestReport> ingest_browser_chrome(evidence::CaseDatabase& casedb,
                                           const std::filesystem::path& cache_dir) {
    if (!std::filesystem::is_directory(cache_dir))
        return Result<IngestReport>::failure(ErrorKind::Configuration,
                                             "not a directory: " + cache_dir.string());
    auto reader = chromecache::open_cache(cache_dir);
    if (!reader.ok())
        return Result<IngestReport>::failure(reader.error().kind, reader.error().message);

    IngestReport report;
    auto result = chromecache::read_entries(reader.value());
    report.files_seen = result.seen;
    report.skipped = result.skipped + result.filtered_out;
    for (const auto& diagnostic : result.diagnostics) report.diagnostics.push_back(diagnostic);

    const auto operation = evidence::Operation::CompanionBrowserChrome;
    normalize::NormalizeContext ctx = make_context(casedb, operation);
    for (const auto& entry : result.entries) {
        if (entry.corrupt) {
            ++report.skipped;
            report.diagnostics.push_back(entry.key + ": " + entry.diagnostic);
            continue;
        }
        auto artifact =
            casedb.store_raw_artifact(operation, entry.key, "A Chrome Cache Entry (" + entry.key + ")",
                                      entry.decoded_body, "json");
        if (!artifact.ok()) {
            ++report.skipped;
            report.diagnostics.push_back(entry.key + ": " + artifact.error().message);
            continue;
        }
        ++report.artifacts;
        // Headers travel as a sidecar so the row inventory keeps the HTTP
        // context (content type, date) next to the body.
        ordered_json sidecar;
        sidecar["url"] = entry.key;
        sidecar["status"] = entry.status_line;
        ordered_json headers = ordered_json::object();
        for (const auto& [name, value] : entry.http_headers) headers[name] = value;
        sidecar["headers"] = headers;
        const std::string sidecar_text = sidecar.dump(2);
        auto sidecar_artifact = casedb.store_raw_artifact(
            operation, entry.key, "A Chrome Cache Entry Headers (" + entry.key + ")",
            {reinterpret_cast<const std::uint8_t*>(sidecar_text.data()), sidecar_text.size()},
            "headers.json");
        if (sidecar_artifact.ok())
            ++report.artifacts;
        else
            report.diagnostics.push_back(entry.key + ": " + sidecar_artifact.error().message);
        normalize_payload(casedb, ctx, entry.key, entry.decoded_body, artifact.value().id,
                          artifact.value().saved_path, report);
    }
    return report;
}

}  // namespace cift::ingest
