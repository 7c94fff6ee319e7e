#include <string>
#include <vector>

#include "cache_writers.hpp"
#include "cift/evidence_store.hpp"
#include "cift/gzip.hpp"
#include "cift/ingest.hpp"
#include "doctest.h"
#include "json.hpp"
#include "sqlite_fixtures.hpp"
#include "test_util.hpp"

using namespace cift::ingest;
using cift::evidence::CaseDatabase;
using cift::testsupport::TempDir;
using cift::testsupport::TodoRowSpec;
using cift::testsupport::TokenDbSpec;
using cift::testsupport::write_file;
using nlohmann::ordered_json;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& text) {
    return std::vector<std::uint8_t>(text.begin(), text.end());
}

std::string cards_body() {
    ordered_json card;
    card["cardType"] = "TextCard";
    card["creationTimestamp"] = 1484539461678LL;
    card["title"] = "Do you know the muffin man?";
    card["sourceDevice"]["serialNumber"] = "TESTSERIAL0001";
    ordered_json body;
    body["cards"] = ordered_json::array({card});
    return body.dump();
}

std::string notifications_body() {
    ordered_json alarm;
    alarm["type"] = "Alarm";
    alarm["status"] = "ON";
    alarm["createdDate"] = 1480355912857LL;
    alarm["alarmTime"] = 1480363200000LL;
    alarm["deviceSerialNumber"] = "TESTSERIAL0001";
    ordered_json body;
    body["notifications"] = ordered_json::array({alarm});
    return body.dump();
}

// Android companion tree: token store, to-do store, and a WebView cache
// holding two Alexa responses plus one unrelated site.
void build_android_tree(const std::filesystem::path& root) {
    cift::testsupport::build_android_token_db(root / "databases" / "map_data_storage.db");
    cift::testsupport::build_android_todo_db(
        root / "databases" / "DataStore.db",
        {{"TASK", "do the laundry", 1480350314486LL, 1480350314486LL, "E99TEST0LZ", ""},
         {"SHOPPING_ITEM", "buy muffins", 1480350400000LL, 1480350400000LL, "E99TEST0LZ", ""}});

    const auto cache = root / "app_webview" / "Cache";
    write_file(cache / "2a0c1f3e_0",
               cift::testsupport::make_simple_cache_file(
                   "https://pitangui.amazon.com/api/cards?beforeCreationTime=1484539461679",
                   bytes_of(cards_body())));
    write_file(cache / "77aa88bb_0",
               cift::testsupport::make_simple_cache_file(
                   "https://pitangui.amazon.com/api/notifications",
                   cift::gzip_compress(bytes_of(notifications_body()))));
    write_file(cache / "unrelated_0",
               cift::testsupport::make_simple_cache_file("https://example.org/page",
                                                         bytes_of("{}")));
}

}  // namespace

TEST_CASE("an android companion tree ingests dbs and webview cache end to end") {
    TempDir dir("ingest-android");
    const auto root = dir.path() / "com.amazon.dee.app";
    build_android_tree(root);

    TempDir case_dir("ingest-android-case");
    auto casedb = CaseDatabase::init_case(case_dir.path() / "case");
    auto report = ingest_app_android(casedb, root);
    REQUIRE(report.ok());

    // 2 databases + 3 cache files; the unrelated cache entry is skipped.
    CHECK(report.value().files_seen == 5);
    CHECK(report.value().parsed == 4);
    CHECK(report.value().skipped == 1);
    CHECK(report.value().artifacts == 4);

    // laundry Created + muffins Created + card Created + alarm Created/Alarm time.
    CHECK(report.value().events == 5);
    CHECK(casedb.row_count("TIMELINE") == 5);

    auto sources = casedb.query("SELECT DISTINCT source FROM TIMELINE");
    REQUIRE(sources.size() == 1);
    CHECK(sources[0][0].second == "COMPANION_APP_ANDROID");

    // The account identity surfaced from the token store.
    auto names = casedb.query(
        "SELECT customer_name FROM ACCOUNT WHERE customer_name != '' ORDER BY customer_name");
    REQUIRE_FALSE(names.empty());
    CHECK(names[0][0].second == "Test Fixture");

    // Token material is inventoried as digests; the raw secrets never land.
    auto tokens = casedb.query(
        "SELECT value FROM SETTING_MISC WHERE name = 'active_user_token'");
    CHECK(tokens.size() == 4);  // accounts row, two tokens, one userdata row
    TokenDbSpec defaults;
    for (const auto& row : tokens) {
        CHECK(row[0].second.find(defaults.access_token) == std::string::npos);
        CHECK(row[0].second.find(defaults.refresh_token) == std::string::npos);
    }

    // The gzip-compressed notifications payload decoded and normalized.
    auto alarms = casedb.query("SELECT type FROM TIMELINE WHERE \"desc\" = 'Alarm ON' ORDER BY type");
    REQUIRE(alarms.size() == 2);
    CHECK(alarms[0][0].second == "Alarm time");
    CHECK(alarms[1][0].second == "Created");

    SUBCASE("re-ingesting the same tree changes nothing") {
        auto again = ingest_app_android(casedb, root);
        REQUIRE(again.ok());
        CHECK(again.value().events == 0);
        CHECK(again.value().content_rows == 0);
        // Byte-identical files are re-preserved onto their existing rows.
        CHECK(casedb.row_count("TIMELINE") == 5);
        CHECK(casedb.row_count("ACQUIRED_FILE") == 4);
    }
    SUBCASE("a missing directory is a configuration error") {
        auto missing = ingest_app_android(casedb, root / "no-such");
        REQUIRE_FALSE(missing.ok());
        CHECK(missing.error().kind == cift::ErrorKind::Configuration);
    }
}

TEST_CASE("an ios container ingests its core-data to-do store") {
    TempDir dir("ingest-ios");
    const auto root = dir.path() / "AppDomain-com.amazon.echo";
    cift::testsupport::build_ios_todo_db(
        root / "Documents" / "LocalData.sqlite",
        {{"TASK", "do the laundry", 1480350314486LL, 1480350314486LL, "E99TEST0LZ", ""}});

    TempDir case_dir("ingest-ios-case");
    auto casedb = CaseDatabase::init_case(case_dir.path() / "case");
    auto report = ingest_app_ios(casedb, root);
    REQUIRE(report.ok());
    CHECK(report.value().files_seen == 1);
    CHECK(report.value().parsed == 1);
    CHECK(report.value().events == 1);

    auto rows = casedb.query("SELECT source, \"desc\", date, time FROM TIMELINE");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][0].second == "COMPANION_APP_IOS");
    CHECK(rows[0][1].second == "do the laundry");
    CHECK(rows[0][2].second == "2016-11-28");
    CHECK(rows[0][3].second == "16:25:14.486");

    SUBCASE("a container without the store reports it") {
        auto empty = ingest_app_ios(casedb, dir.path());
        REQUIRE(empty.ok());
        CHECK(empty.value().files_seen == 0);
        REQUIRE_FALSE(empty.value().diagnostics.empty());
    }
}

TEST_CASE("an unknown to-do schema degrades to a raw dump in the case db") {
    TempDir dir("ingest-unknown");
    const auto root = dir.path() / "container";
    cift::testsupport::build_unknown_todo_db(root / "Documents" / "LocalData.sqlite");

    TempDir case_dir("ingest-unknown-case");
    auto casedb = CaseDatabase::init_case(case_dir.path() / "case");
    auto report = ingest_app_ios(casedb, root);
    REQUIRE(report.ok());
    CHECK(report.value().events == 0);

    auto dumps = casedb.query("SELECT value FROM SETTING_MISC WHERE name = 'unknown_table_dump'");
    REQUIRE(dumps.size() == 2);
    CHECK(dumps[0][0].second.find("unrecognized row one") != std::string::npos);

    bool noted = false;
    for (const auto& diagnostic : report.value().diagnostics)
        if (diagnostic.find("dumping raw tables") != std::string::npos) noted = true;
    CHECK(noted);
}

TEST_CASE("a chrome profile cache ingests bodies with header sidecars") {
    TempDir dir("ingest-chrome");
    std::vector<cift::testsupport::ChromeCacheEntrySpec> specs{
        {"https://pitangui.amazon.com/api/cards?beforeCreationTime=1484539461679",
         cards_body(),
         {{"Content-Type", "application/json"}},
         "HTTP/1.1 200 OK",
         true,
         13130313600000000LL},
        {"https://www.example.org/irrelevant", "<html></html>", {}, "HTTP/1.1 200 OK", false, 0},
    };
    cift::testsupport::write_chrome_cache(dir.path(), specs);

    TempDir case_dir("ingest-chrome-case");
    auto casedb = CaseDatabase::init_case(case_dir.path() / "case");
    auto report = ingest_browser_chrome(casedb, dir.path());
    REQUIRE(report.ok());
    CHECK(report.value().files_seen == 2);
    CHECK(report.value().skipped == 1);
    CHECK(report.value().artifacts == 2);  // decoded body plus headers sidecar
    CHECK(report.value().events == 1);

    auto rows = casedb.query("SELECT source, \"desc\" FROM TIMELINE");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][0].second == "COMPANION_BROWSER_CHROME");
    CHECK(rows[0][1].second == "Do you know the muffin man?");

    auto sidecars = casedb.query(
        "SELECT desc FROM ACQUIRED_FILE WHERE desc LIKE 'A Chrome Cache Entry Headers%'");
    CHECK(sidecars.size() == 1);

    SUBCASE("a directory without an index is rejected") {
        TempDir empty("ingest-chrome-empty");
        auto missing = ingest_browser_chrome(casedb, empty.path());
        REQUIRE_FALSE(missing.ok());
        CHECK(missing.error().kind == cift::ErrorKind::UnrecognizedFormat);
    }
}
