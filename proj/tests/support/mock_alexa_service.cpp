#include "mock_alexa_service.hpp"

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "httplib.h"

namespace cift::mock {

using nlohmann::ordered_json;

bool RequestRecord::has_header(const std::string& name) const {
    for (const auto& [key, value] : headers)
        if (key == name) return true;
    return false;
}

std::string RequestRecord::header(const std::string& name) const {
    for (const auto& [key, value] : headers)
        if (key == name) return value;
    return "";
}

namespace {

constexpr const char* kJson = "application/json";

std::string utterance_url(const std::string& audio_id) {
    return "https://pitangui.amazon.com/api/utterance/audio/data?id=" + audio_id;
}

std::string wav_bytes(const std::string& audio_id) {
    // Distinct payload bytes per id so evidence dedup never merges two files.
    std::string body = "fixture audio " + audio_id;
    std::string riff = "RIFF????WAVEfmt ";
    return riff + body;
}

std::int64_t param_i64(const httplib::Request& req, const char* name, std::int64_t fallback) {
    if (!req.has_param(name)) return fallback;
    try {
        return std::stoll(req.get_param_value(name));
    } catch (const std::exception&) {
        return fallback;
    }
}

}  // namespace

MockCorpus build_corpus(const MockOptions& options) {
    MockCorpus corpus;
    const std::string customer = MockAlexaService::kCustomerId;
    const std::string serial1 = MockAlexaService::kSerial1;
    const std::string serial2 = MockAlexaService::kSerial2;
    const std::string device_type = MockAlexaService::kDeviceType;

    // Four utterances are referenced from cards, to-dos, and activities; three
    // have stored audio and one is deliberately purged (the service kept the
    // reference but deleted the voice file).
    const std::string audio_muffin =
        device_type + ":1.0/2017/01/16/04/" + serial1 + "/04:21::TNIH_2V.fixture-muffin/0";
    const std::string audio_laundry =
        device_type + ":1.0/2016/11/28/16/" + serial1 + "/25:14::TNIH_2V.fixture-laundry/0";
    const std::string audio_license =
        device_type + ":1.0/2017/01/17/08/" + serial1 + "/10:44::TNIH_2V.fixture driver license/0";
    const std::string audio_purged =
        device_type + ":1.0/2017/01/16/03/" + serial2 + "/55:00::TNIH_2V.fixture-purged/0";
    corpus.audio[audio_muffin] = wav_bytes(audio_muffin);
    corpus.audio[audio_laundry] = wav_bytes(audio_laundry);
    corpus.audio[audio_license] = wav_bytes(audio_license);
    corpus.purged_audio_id = audio_purged;

    corpus.bootstrap = {{"authentication",
                         {{"authenticated", true},
                          {"canAccessPrimeMusicContent", false},
                          {"customerEmail", options.email},
                          {"customerId", customer},
                          {"customerName", MockAlexaService::kCustomerName}}}};
    corpus.authentication = corpus.bootstrap;
    corpus.authentication["apiVariant"] = "authentication";

    corpus.household = {
        {"accounts",
         {{{"email", options.email},
           {"eulaAcceptance", true},
           {"firstName", "Test"},
           {"fullName", MockAlexaService::kCustomerName},
           {"id", customer},
           {"pendingUserPin", false},
           {"role", "ADULT"}},
          {{"email", "second.fixture@example.com"},
           {"eulaAcceptance", true},
           {"firstName", "Second"},
           {"fullName", "Second Fixture"},
           {"id", "E99TEST1LZ"},
           {"pendingUserPin", false},
           {"role", "ADULT"}}}}};

    corpus.devices = {
        {"devices",
         {{{"accountName", "Fixture's Echo Dot"},
           {"deviceAccountId", "A_TESTACCT_0001"},
           {"deviceFamily", "ECHO"},
           {"deviceOwnerCustomerId", customer},
           {"deviceType", device_type},
           {"macAddress", "74:C2:46:TE:ST:01"},
           {"online", true},
           {"serialNumber", serial1},
           {"softwareVersion", "564196920"}},
          {{"accountName", "Fixture's Kitchen Dot"},
           {"deviceAccountId", "A_TESTACCT_0002"},
           {"deviceFamily", "ECHO"},
           {"deviceOwnerCustomerId", customer},
           {"deviceType", device_type},
           {"macAddress", "74:C2:46:TE:ST:02"},
           {"online", false},
           {"serialNumber", serial2},
           {"softwareVersion", "564197320"}}}}};

    corpus.device_preferences = {
        {"devicePreferences",
         {{{"deviceAddress", "1 Fixture Street, Testville, TS 00001"},
           {"deviceSerialNumber", serial1},
           {"deviceType", device_type},
           {"locale", "en-US"},
           {"postalCode", "00001"},
           {"timeZoneId", MockAlexaService::kTimeZone}},
          {{"deviceAddress", "1 Fixture Street, Testville, TS 00001"},
           {"deviceSerialNumber", serial2},
           {"deviceType", device_type},
           {"locale", "en-US"},
           {"postalCode", "00001"},
           {"timeZoneId", MockAlexaService::kTimeZone}}}}};

    corpus.wifi = {{"values",
                    {{{"preSharedKey", "fixture-plaintext-psk"},
                      {"securityMethod", "WPA_PSK"},
                      {"ssid", "FixtureNet"}},
                     {{"preSharedKey", "guest-plaintext-psk"},
                      {"securityMethod", "WPA_PSK"},
                      {"ssid", "FixtureNet-Guest"}}}}};

    corpus.bluetooth = {
        {"bluetoothStates",
         {{{"deviceSerialNumber", serial1},
           {"deviceType", device_type},
           {"online", true},
           {"pairedDeviceList",
            {{{"address", "08:DF:1F:TE:ST:01"},
              {"connected", false},
              {"friendlyName", "Fixture Speaker"}}}}},
          {{"deviceSerialNumber", serial2},
           {"deviceType", device_type},
           {"online", false},
           {"pairedDeviceList", ordered_json::array()}}}}};

    corpus.traffic = {{"destination", {{"label", "2 Workplace Avenue, Testville"}}},
                      {"origin", {{"label", "1 Fixture Street, Testville"}}},
                      {"waypoints", ordered_json::array()}};

    corpus.wake_word = {{"wakeWords",
                         {{{"active", true},
                           {"deviceSerialNumber", serial1},
                           {"deviceType", device_type},
                           {"midFieldState", nullptr},
                           {"wakeWord", "ALEXA"}},
                          {{"active", true},
                           {"deviceSerialNumber", serial2},
                           {"deviceType", device_type},
                           {"midFieldState", nullptr},
                           {"wakeWord", "ALEXA"}}}}};

    corpus.third_party = {{"services",
                           {{{"associationState", "ASSOCIATED"}, {"serviceName", "Uber"}},
                            {{"associationState", "NOT_ASSOCIATED"},
                             {"serviceName", "Fixture Rides"}}}}};

    corpus.calendar_accounts = {
        {"accounts",
         {{{"calendarList",
            {{{"calendarId", "fixture-calendar-1"}, {"calendarName", "Family"}},
             {{"calendarId", "fixture-calendar-2"}, {"calendarName", "Work"}}}},
           {"emailId", "test.fixture@gmail.example.com"},
           {"syncEnabled", true}}}}};

    // releaseDate arrives as a string of epoch seconds for the first skill and
    // as epoch milliseconds for the second; both forms occur in the wild.
    corpus.skills = {{"skills",
                      {{{"developerInfo", {{"name", "Jet Propulsion Laboratory"}}},
                        {"entitlementInfo", {{"accountLinked", false}}},
                        {"productDetails", {{"releaseDate", "1456958015"}}},
                        {"title", "NASA Mars"}},
                       {{"developerInfo", {{"name", "Fixture Works"}}},
                        {"entitlementInfo", {{"accountLinked", true}}},
                        {"productDetails", {{"releaseDate", 1480449925000}}},
                        {"title", "Fixture Trivia"}}}}};

    ordered_json socket = {{"applianceId", "uuid:Socket-1_0-FIXTURE01"},
                           {"manufacturerName", "FixtureWorks"},
                           {"modelName", "Smart Socket"},
                           {"version", "FW_1.0.10885"},
                           {"friendlyName", "white lamp 1"},
                           {"description", "Fixture smart socket"},
                           {"friendlyNameModifiedAt", 1481558860291},
                           {"applianceNetworkState",
                            {{"createdAt", 1481558860291}, {"reachable", true}}},
                           {"alexaDeviceSerialNumber", serial1},
                           {"alexaDeviceType", device_type}};
    ordered_json bridge = {{"applianceId", "AAA_SonarCloudService_FIXTURE02"},
                           {"manufacturerName", "Sonar"},
                           {"modelName", "Sonar Bridge"},
                           {"version", "2.1.0"},
                           {"friendlyName", "kitchen bridge"},
                           {"description", "Fixture bridge"},
                           {"friendlyNameModifiedAt", 1484764694422},
                           {"applianceNetworkState",
                            {{"createdAt", 1484160000000}, {"reachable", false}}},
                           {"alexaDeviceSerialNumber", serial2},
                           {"alexaDeviceType", device_type}};
    ordered_json appliance_details = ordered_json::object();
    appliance_details["uuid:Socket-1_0-FIXTURE01"] = socket;
    appliance_details["AAA_SonarCloudService_FIXTURE02"] = bridge;
    corpus.phenix = ordered_json::object();
    corpus.phenix["networkDetail"]["locationDetails"]["locationDetails"]["Default_Location"]
                 ["applianceDetails"]["applianceDetails"] = appliance_details;

    corpus.todos_task = ordered_json::array(
        {{{"complete", false},
          {"createdDate", 1480350314486},
          {"customerId", customer},
          {"deleted", false},
          {"lastUpdatedDate", 1480350314486},
          {"originalAudioId", audio_laundry},
          {"text", "do the laundry"},
          {"type", "TASK"},
          {"version", 1}},
         {{"complete", true},
          {"createdDate", 1484539000000},
          {"customerId", customer},
          {"deleted", false},
          {"lastUpdatedDate", 1484539060000},
          {"originalAudioId", ""},
          {"text", "renew driver license"},
          {"type", "TASK"},
          {"version", 2}}});

    corpus.todos_shopping = ordered_json::array({{{"complete", false},
                                                  {"createdDate", 1480350400000},
                                                  {"customerId", customer},
                                                  {"deleted", false},
                                                  {"lastUpdatedDate", 1480350400000},
                                                  {"originalAudioId", ""},
                                                  {"text", "buy muffins"},
                                                  {"type", "SHOPPING_ITEM"},
                                                  {"version", 1}}});

    corpus.notifications = {
        {"notifications",
         {{{"alarmTime", 1480363200000},
           {"createdDate", 1480355912857},
           {"deviceSerialNumber", serial1},
           {"deviceType", device_type},
           {"id", "fixture-notification-0001"},
           {"originalTime", "20:00:00.000"},
           {"remainingTime", 0},
           {"status", "ON"},
           {"type", "Alarm"}},
          {{"alarmTime", 0},
           {"createdDate", 1481558000000},
           {"deviceSerialNumber", serial2},
           {"deviceType", device_type},
           {"id", "fixture-notification-0002"},
           {"originalTime", nullptr},
           {"remainingTime", 600000},
           {"status", "OFF"},
           {"type", "Timer"}}}}};

    // Cards and activities are generated newest-first with strictly
    // decreasing timestamps, as the live service serves them.
    corpus.cards = ordered_json::array();
    const std::int64_t card_base = 1484539461678;
    for (int n = 0; n < options.card_count; ++n) {
        char id_buf[48];
        std::snprintf(id_buf, sizeof id_buf, "fixture-card-%04d", n);
        ordered_json card = {{"cardType", n % 3 == 0 ? "TextCard" : "StandardCard"},
                             {"creationTimestamp", card_base - 60000LL * n},
                             {"id", id_buf},
                             {"registeredCustomerId", customer},
                             {"sourceDevice",
                              {{"serialNumber", n % 2 == 0 ? serial1 : serial2},
                               {"type", device_type}}}};
        if (n == 0) {
            card["cardType"] = "TextCard";
            card["title"] = "Do you know the muffin man?";
            card["playbackAudioAction"] = {{"mainText", "do you know the muffin man"},
                                           {"url", utterance_url(audio_muffin)}};
        } else if (n == 1) {
            card["title"] = "Fixture card 1";
            card["playbackAudioAction"] = {{"mainText", "fixture purged utterance"},
                                           {"url", utterance_url(audio_purged)}};
        } else if (n == 2) {
            card["title"] = "Fixture card 2";
            card["playbackAudioAction"] = {{"mainText", "add driver license to to do list"},
                                           {"url", utterance_url(audio_license)}};
        } else {
            card["title"] = "Fixture card " + std::to_string(n);
        }
        corpus.cards.push_back(std::move(card));
    }

    corpus.activities = ordered_json::array();
    for (int n = 0; n < options.activity_count; ++n) {
        char id_buf[48];
        std::snprintf(id_buf, sizeof id_buf, "fixture-activity-%04d", n);
        ordered_json activity = {{"activityStatus", n % 7 == 3 ? "FAULT" : "SUCCESS"},
                                 {"id", id_buf},
                                 {"registeredCustomerId", customer},
                                 {"utteranceId", ""},
                                 {"version", 1}};
        if (n == 0) {
            activity["creationTimestamp"] = 1484640644175;
            activity["activityStatus"] = "SUCCESS";
            // The description document itself arrives string-encoded.
            ordered_json description = {{"summary", "add driver license to to do list"},
                                        {"firstUtteranceId", audio_license}};
            activity["description"] = description.dump();
            activity["utteranceId"] = audio_license;
            activity["sourceDeviceIds"] = {{{"deviceType", device_type},
                                            {"serialNumber", serial1}}};
        } else {
            activity["creationTimestamp"] = 1484542204396 - 45000LL * (n - 1);
            std::string summary = "fixture voice command " + std::to_string(n);
            if (n % 2 == 0) {
                activity["description"] = ordered_json{{"summary", summary}}.dump();
            } else {
                activity["description"] = ordered_json{{"summary", summary}};
            }
            activity["sourceDeviceIds"] = {{{"deviceType", device_type},
                                            {"serialNumber", n % 2 == 0 ? serial1 : serial2}}};
        }
        corpus.activities.push_back(std::move(activity));
    }

    corpus.media[serial1] = ordered_json::array(
        {{{"contentType", "TRACKS"},
          {"historicalId", "fixture-media-0001"},
          {"providerId", "CLOUD_PLAYER"},
          {"queueId", "fixture-queue-1"},
          {"startTime", 1484542090384},
          {"title", "80s 90s & Today - Fixture Mix"}},
         {{"contentType", "STATION"},
          {"historicalId", "fixture-media-0002"},
          {"providerId", "TUNE_IN"},
          {"queueId", "fixture-queue-2"},
          {"startTime", 1484540000000},
          {"title", "Fixture Radio"}}});
    corpus.media[serial2] = ordered_json::array({{{"contentType", "TRACKS"},
                                                  {"historicalId", "fixture-media-0003"},
                                                  {"providerId", "CLOUD_PLAYER"},
                                                  {"queueId", "fixture-queue-3"},
                                                  {"startTime", 1484541000000},
                                                  {"title", "Fixture Jazz"}}});
    return corpus;
}

struct MockAlexaService::Impl {
    MockOptions options;
    MockCorpus corpus;
    httplib::Server server;
    std::thread serve_thread;
    int port = 0;

    mutable std::mutex mutex;
    std::vector<RequestRecord> log;
    std::map<std::string, int> sessions;  // token -> remaining budget (-1: no limit)
    int token_counter = 0;

    explicit Impl(MockOptions opts) : options(std::move(opts)), corpus(build_corpus(options)) {
        install_routes();
    }

    std::string issue_token() {
        std::lock_guard<std::mutex> lock(mutex);
        std::string token = "fixture-session-" + std::to_string(++token_counter);
        sessions[token] = options.session_expires_after;
        return token;
    }

    static std::string cookie_token(const httplib::Request& req) {
        std::string cookie = req.get_header_value("Cookie");
        size_t pos = cookie.find("session=");
        if (pos == std::string::npos) return "";
        pos += 8;
        size_t end = cookie.find(';', pos);
        return cookie.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    }

    bool authorize(const httplib::Request& req, httplib::Response& res) {
        std::string token = cookie_token(req);
        bool ok = false;
        {
            std::lock_guard<std::mutex> lock(mutex);
            auto it = sessions.find(token);
            if (!token.empty() && it != sessions.end()) {
                ok = true;
                if (it->second > 0 && --it->second == 0) sessions.erase(it);
            }
        }
        if (ok) return true;
        if (options.auth_mode == AuthMode::RedirectLogin) {
            res.status = 302;
            res.set_header("Location", "/login");
        } else {
            res.status = 401;
            res.set_content("{\"message\":\"authentication required\"}", kJson);
        }
        return false;
    }

    void record(const httplib::Request& req) {
        if (req.path == "/_testlog") return;
        RequestRecord rec;
        rec.method = req.method;
        rec.path = req.path;
        if (size_t pos = req.target.find('?'); pos != std::string::npos)
            rec.query = req.target.substr(pos + 1);
        for (const auto& [name, value] : req.headers) {
            if (name == "REMOTE_ADDR" || name == "REMOTE_PORT" || name == "LOCAL_ADDR" ||
                name == "LOCAL_PORT")
                continue;
            rec.headers.emplace_back(name, value);
        }
        std::lock_guard<std::mutex> lock(mutex);
        log.push_back(std::move(rec));
    }

    void serve_json(httplib::Response& res, const ordered_json& body) {
        res.set_content(body.dump(), kJson);
    }

    void json_get(const std::string& path, ordered_json MockCorpus::*member) {
        server.Get(path, [this, member](const httplib::Request& req, httplib::Response& res) {
            if (!authorize(req, res)) return;
            serve_json(res, corpus.*member);
        });
    }

    void install_routes() {
        server.set_logger(
            [this](const httplib::Request& req, const httplib::Response&) { record(req); });

        server.Post("/login", [this](const httplib::Request& req, httplib::Response& res) {
            std::string email = req.get_param_value("email");
            std::string password = req.get_param_value("password");
            if (email != options.email || password != options.password) {
                res.status = 401;
                res.set_content("{\"message\":\"authentication failed\"}", kJson);
                return;
            }
            res.set_header("Set-Cookie", "session=" + issue_token() + "; Path=/; HttpOnly");
            if (options.auth_mode == AuthMode::RedirectLogin) {
                res.status = 302;
                res.set_header("Location", "/api/bootstrap");
            } else {
                res.set_content("{\"status\":\"authenticated\"}", kJson);
            }
        });
        server.Get("/login", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("<html><body>fixture login form</body></html>", "text/html");
        });

        json_get("/api/bootstrap", &MockCorpus::bootstrap);
        json_get("/api/authentication", &MockCorpus::authentication);
        json_get("/api/household", &MockCorpus::household);
        json_get("/api/devices/device", &MockCorpus::devices);
        json_get("/api/device-preferences", &MockCorpus::device_preferences);
        json_get("/api/wifi/configs", &MockCorpus::wifi);
        json_get("/api/bluetooth", &MockCorpus::bluetooth);
        json_get("/api/traffic/settings", &MockCorpus::traffic);
        json_get("/api/wake-word", &MockCorpus::wake_word);
        json_get("/api/third-party", &MockCorpus::third_party);
        json_get("/api/son/householdaccounts", &MockCorpus::calendar_accounts);
        json_get("/api/phenix", &MockCorpus::phenix);
        json_get("/api/notifications", &MockCorpus::notifications);

        server.Get("/app/secure/yourskills",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       if (!authorize(req, res)) return;
                       if (req.get_header_value("Accept") != kSkillsAccept) {
                           res.status = 406;
                           res.set_content("{\"message\":\"not acceptable\"}", kJson);
                           return;
                       }
                       serve_json(res, corpus.skills);
                   });

        server.Get("/api/todos", [this](const httplib::Request& req, httplib::Response& res) {
            if (!authorize(req, res)) return;
            std::string type = req.get_param_value("type");
            std::int64_t size = param_i64(req, "size", 100);
            const ordered_json& all =
                type == "SHOPPING_ITEM" ? corpus.todos_shopping : corpus.todos_task;
            ordered_json values = ordered_json::array();
            for (const auto& item : all) {
                if (static_cast<std::int64_t>(values.size()) >= size) break;
                values.push_back(item);
            }
            serve_json(res, ordered_json{{"values", values}});
        });

        // Cursor windowing: cards strictly older than beforeCreationTime,
        // newest first, one server-side page at a time.
        server.Get("/api/cards", [this](const httplib::Request& req, httplib::Response& res) {
            if (!authorize(req, res)) return;
            std::int64_t before = param_i64(req, "beforeCreationTime", INT64_MAX);
            ordered_json page = ordered_json::array();
            for (const auto& card : corpus.cards) {
                if (static_cast<std::int64_t>(page.size()) >= options.page_size) break;
                if (card.at("creationTimestamp").get<std::int64_t>() < before)
                    page.push_back(card);
            }
            serve_json(res, ordered_json{{"cards", page}});
        });

        server.Get("/api/activities", [this](const httplib::Request& req, httplib::Response& res) {
            if (!authorize(req, res)) return;
            std::int64_t start = param_i64(req, "startTime", INT64_MAX);
            std::int64_t size = param_i64(req, "size", 50);
            ordered_json page = ordered_json::array();
            for (const auto& activity : corpus.activities) {
                if (static_cast<std::int64_t>(page.size()) >= size) break;
                if (activity.at("creationTimestamp").get<std::int64_t>() <= start)
                    page.push_back(activity);
            }
            serve_json(res, ordered_json{{"activities", page}});
        });

        server.Get("/api/media/historical-queue",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       if (!authorize(req, res)) return;
                       std::string serial = req.get_param_value("deviceSerialNumber");
                       std::int64_t size = param_i64(req, "size", 50);
                       ordered_json page = ordered_json::array();
                       auto it = corpus.media.find(serial);
                       if (it != corpus.media.end()) {
                           for (const auto& item : it->second) {
                               if (static_cast<std::int64_t>(page.size()) >= size) break;
                               page.push_back(item);
                           }
                       }
                       serve_json(res, ordered_json{{"media", page}});
                   });

        server.Get("/api/utterance/audio/data",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       if (!authorize(req, res)) return;
                       std::string id = req.get_param_value("id");
                       auto it = corpus.audio.find(id);
                       if (it == corpus.audio.end()) {
                           res.status = 404;
                           res.set_content("{\"message\":\"no such utterance\"}", kJson);
                           return;
                       }
                       res.set_content(it->second, "audio/wav");
                   });

        server.Get("/_testlog", [this](const httplib::Request&, httplib::Response& res) {
            ordered_json entries = ordered_json::array();
            {
                std::lock_guard<std::mutex> lock(mutex);
                for (const auto& rec : log) {
                    ordered_json headers = ordered_json::object();
                    for (const auto& [name, value] : rec.headers) headers[name] = value;
                    entries.push_back({{"method", rec.method},
                                       {"path", rec.path},
                                       {"query", rec.query},
                                       {"headers", headers}});
                }
            }
            res.set_content(entries.dump(), kJson);
        });
    }
};

MockAlexaService::MockAlexaService(MockOptions options) : impl_(new Impl(std::move(options))) {}

MockAlexaService::~MockAlexaService() { stop(); }

int MockAlexaService::start(int port) {
    if (impl_->serve_thread.joinable()) return impl_->port;
    if (port == 0) {
        impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
        if (impl_->port <= 0) throw std::runtime_error("mock service: bind failed");
    } else {
        if (!impl_->server.bind_to_port("127.0.0.1", port))
            throw std::runtime_error("mock service: bind failed on port " + std::to_string(port));
        impl_->port = port;
    }
    impl_->serve_thread = std::thread([this]() { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return impl_->port;
}

void MockAlexaService::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->serve_thread.joinable()) impl_->serve_thread.join();
}

int MockAlexaService::port() const { return impl_->port; }

std::string MockAlexaService::base_url() const {
    return "http://127.0.0.1:" + std::to_string(impl_->port);
}

const MockOptions& MockAlexaService::options() const { return impl_->options; }

const MockCorpus& MockAlexaService::corpus() const { return impl_->corpus; }

std::vector<RequestRecord> MockAlexaService::request_log() const {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    return impl_->log;
}

void MockAlexaService::clear_request_log() {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    impl_->log.clear();
}

}  // namespace cift::mock
