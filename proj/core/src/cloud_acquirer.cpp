#include "cift/cloud_acquirer.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "cift/epoch.hpp"
#include "cift/normalizer.hpp"

namespace cift::cloud {
namespace {

using nlohmann::json;

constexpr int kMaxPages = 10000;  // cursor walk safety stop

struct HttpResponse {
    int status = 0;
    std::string body;
    std::string content_type;
    std::vector<std::string> set_cookies;
    std::string location;
};

bool split_origin(const std::string& url, std::string& origin, std::string& path_query) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) return false;
    const auto path_start = url.find('/', scheme_end + 3);
    origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    path_query = path_start == std::string::npos ? std::string("/") : url.substr(path_start);
    return true;
}

std::string host_of(const std::string& url) {
    std::string origin;
    std::string path;
    if (!split_origin(url, origin, path)) return "";
    const auto scheme_end = origin.find("://");
    std::string host = origin.substr(scheme_end + 3);
    if (!host.empty() && host.front() == '[') {
        const auto bracket = host.find(']');
        return bracket == std::string::npos ? host : host.substr(0, bracket + 1);
    }
    const auto colon = host.find(':');
    return colon == std::string::npos ? host : host.substr(0, colon);
}

bool is_loopback(const std::string& host) {
    return host == "127.0.0.1" || host == "localhost" || host == "::1" || host == "[::1]";
}

Result<bool> check_transport_policy(const std::string& url, bool allow_insecure) {
    if (url.rfind("https://", 0) == 0) {
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
        return Result<bool>::failure(ErrorKind::Configuration, "built without TLS support");
#else
        return true;
#endif
    }
    if (url.rfind("http://", 0) != 0)
        return Result<bool>::failure(ErrorKind::Configuration, "unsupported URL scheme: " + url);
    if (!allow_insecure && !is_loopback(host_of(url)))
        return Result<bool>::failure(
            ErrorKind::Configuration,
            "refusing plaintext HTTP to non-loopback host " + host_of(url) + "; use https");
    return true;
}

std::string cookie_header(const std::map<std::string, std::string>& cookies) {
    std::string header;
    for (const auto& [name, value] : cookies) {
        if (!header.empty()) header += "; ";
        header += name + "=" + value;
    }
    return header;
}

void absorb_cookies(const HttpResponse& response, std::map<std::string, std::string>& cookies) {
    for (const auto& line : response.set_cookies) {
        const auto semi = line.find(';');
        const std::string pair = line.substr(0, semi);
        const auto eq = pair.find('=');
        if (eq == std::string::npos) continue;
        std::string name = pair.substr(0, eq);
        while (!name.empty() && name.back() == ' ') name.pop_back();
        cookies[name] = pair.substr(eq + 1);
    }
}

HttpResponse collect(const httplib::Result& result) {
    HttpResponse response;
    response.status = result->status;
    response.body = result->body;
    response.content_type = result->get_header_value("Content-Type");
    response.location = result->get_header_value("Location");
    const std::size_t count = result->get_header_value_count("Set-Cookie");
    for (std::size_t i = 0; i < count; ++i)
        response.set_cookies.push_back(result->get_header_value("Set-Cookie", i));
    return response;
}

// One-shot GET. Stateless so concurrent fetches never touch the session.
Result<HttpResponse> http_get(const std::string& url, const std::string& cookies,
                              const std::map<std::string, std::string>& extra_headers) {
    std::string origin;
    std::string path_query;
    if (!split_origin(url, origin, path_query))
        return Result<HttpResponse>::failure(ErrorKind::Parameter, "not an absolute URL: " + url);
    httplib::Client client(origin);
    client.set_follow_location(false);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    httplib::Headers headers;
    if (!cookies.empty()) headers.emplace("Cookie", cookies);
    for (const auto& [name, value] : extra_headers) headers.emplace(name, value);
    auto result = client.Get(path_query, headers);
    if (!result)
        return Result<HttpResponse>::failure(ErrorKind::Transport,
                                             url + ": " + httplib::to_string(result.error()));
    return collect(result);
}

Result<HttpResponse> http_post_form(const std::string& url, const httplib::Params& params) {
    std::string origin;
    std::string path_query;
    if (!split_origin(url, origin, path_query))
        return Result<HttpResponse>::failure(ErrorKind::Parameter, "not an absolute URL: " + url);
    httplib::Client client(origin);
    client.set_follow_location(false);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    auto result = client.Post(path_query, params);
    if (!result)
        return Result<HttpResponse>::failure(ErrorKind::Transport,
                                             url + ": " + httplib::to_string(result.error()));
    return collect(result);
}

Result<bool> post_login(Session& session) {
    if (session.email.empty() || session.password.empty())
        return Result<bool>::failure(ErrorKind::Parameter, "login requires email and password");
    auto response = http_post_form(session.base_url + "/login",
                                   {{"email", session.email}, {"password", session.password}});
    if (!response.ok()) return Result<bool>::failure(response.error().kind, response.error().message);
    const HttpResponse& r = response.value();
    if (r.status == 401 || r.status == 403)
        return Result<bool>::failure(ErrorKind::AuthFailed,
                                     "credentials rejected (HTTP " + std::to_string(r.status) + ")");
    if (r.status >= 300 && r.status < 400 && r.set_cookies.empty())
        return Result<bool>::failure(ErrorKind::AuthFailed,
                                     "login redirected to " + r.location + " without a session cookie");
    if (r.set_cookies.empty())
        return Result<bool>::failure(ErrorKind::AuthFailed, "login returned no session cookie");
    absorb_cookies(r, session.cookies);
    return true;
}

Result<bool> import_cookie_file(const std::string& path, Session& session) {
    std::ifstream in(path);
    if (!in) return Result<bool>::failure(ErrorKind::Configuration, "cannot read cookie file " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r\n");
        const std::string trimmed = line.substr(first, last - first + 1);
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos || eq == 0)
            return Result<bool>::failure(ErrorKind::Configuration,
                                         "cookie file line is not name=value: " + trimmed);
        session.cookies[trimmed.substr(0, eq)] = trimmed.substr(eq + 1);
    }
    if (session.cookies.empty())
        return Result<bool>::failure(ErrorKind::Configuration, "cookie file holds no cookies: " + path);
    return true;
}

std::string url_path_of(std::string_view url) {
    const auto scheme_end = url.find("://");
    std::string_view rest = scheme_end == std::string_view::npos ? url : url.substr(scheme_end + 3);
    const auto slash = rest.find('/');
    std::string_view path = slash == std::string_view::npos ? "/" : rest.substr(slash);
    const auto query = path.find('?');
    return std::string(query == std::string_view::npos ? path : path.substr(0, query));
}

std::string title_case_words(std::string_view text) {
    std::string out;
    bool start_word = true;
    for (char c : text) {
        if (c == '/' || c == '-' || c == '_' || c == ' ') {
            if (!out.empty() && out.back() != ' ') out += ' ';
            start_word = true;
            continue;
        }
        out += start_word ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                          : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        start_word = false;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

const char* category_title(catalog::Category category) {
    switch (category) {
        case catalog::Category::Account: return "Account";
        case catalog::Category::AlexaDevice: return "Alexa Device";
        case catalog::Category::CustomerSetting: return "Customer Setting";
        case catalog::Category::Skill: return "Skill";
        case catalog::Category::CompatibleDevice: return "Compatible Device";
        case catalog::Category::UserActivity: return "User Activity";
        case catalog::Category::Etc: return "Etc";
    }
    return "Etc";
}

// Keeps the worse of two outcomes; Skipped is the empty state.
void merge_outcome(EndpointOutcome& slot, Outcome outcome, int status = 0) {
    static const auto rank = [](Outcome o) {
        switch (o) {
            case Outcome::AuthFailed: return 4;
            case Outcome::HttpError: return 3;
            case Outcome::ParseWarning: return 2;
            case Outcome::Ok: return 1;
            case Outcome::Skipped: return 0;
        }
        return 0;
    };
    if (rank(outcome) > rank(slot.outcome)) {
        slot.outcome = outcome;
        if (status) slot.http_status = status;
    }
}

// Item count and minimum creationTimestamp of a paginated payload.
std::int64_t min_creation_ms(const std::string& body, const char* key, std::size_t& count) {
    count = 0;
    const json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains(key) || !parsed[key].is_array())
        return -1;
    std::int64_t minimum = std::numeric_limits<std::int64_t>::max();
    for (const auto& item : parsed[key]) {
        ++count;
        if (item.is_object() && item.contains("creationTimestamp") &&
            item["creationTimestamp"].is_number())
            minimum = std::min(minimum, item["creationTimestamp"].get<std::int64_t>());
    }
    return minimum == std::numeric_limits<std::int64_t>::max() ? -1 : minimum;
}

std::string audio_extension(const std::string& content_type) {
    if (content_type.find("mpeg") != std::string::npos) return "mp3";
    if (content_type.find("mp4") != std::string::npos) return "m4a";
    if (content_type.find("ogg") != std::string::npos) return "ogg";
    return "wav";
}

// Shared state for one acquisition run: session, destination, and the
// normalization context threaded through every endpoint.
class Acquirer {
public:
    Acquirer(Session& session, evidence::CaseDatabase& casedb, const AcquireOptions& options)
        : session_(session), casedb_(casedb), options_(options) {
        hosts_.base_url = session.base_url;
        hosts_.skills_base_url = session.skills_base_url;
        ctx_.operation = evidence::Operation::Cloud;
        ctx_.zone_label = casedb.get_meta("zone_label", "UTC");
        ctx_.default_user =
            session.customer_id.empty() ? casedb.get_meta("customer_id") : session.customer_id;
    }

    // GET with the session cookie and a single re-login on expiry. Not for
    // concurrent use; parallel phases call http_get directly and route any
    // 401 back through here sequentially.
    Result<HttpResponse> fetch(const std::string& url,
                               const std::map<std::string, std::string>& headers) {
        if (auth_dead_)
            return Result<HttpResponse>::failure(ErrorKind::AuthFailed,
                                                 "session expired and re-login already spent");
        auto response = http_get(url, cookie_header(session_.cookies), headers);
        if (!response.ok()) return response;
        if (response.value().status != 401 && response.value().status != 403) return response;
        if (!session_.can_relogin || session_.relogin_spent) {
            auth_dead_ = true;
            return response;
        }
        session_.relogin_spent = true;
        auto login = post_login(session_);
        if (!login.ok()) {
            auth_dead_ = true;
            return response;
        }
        auto retry = http_get(url, cookie_header(session_.cookies), headers);
        if (retry.ok() && (retry.value().status == 401 || retry.value().status == 403))
            auth_dead_ = true;
        return retry;
    }

    // Preserve + normalize + insert one response. True when the page was
    // stored (even if normalization warned).
    bool ingest_response(EndpointOutcome& slot, const catalog::ApiDescriptor& descriptor,
                         const std::string& url, const HttpResponse& response,
                         const std::string& desc) {
        if (response.status != 200) {
            const bool auth = response.status == 401 || response.status == 403;
            merge_outcome(slot, auth ? Outcome::AuthFailed : Outcome::HttpError, response.status);
            slot.diagnostics.push_back(desc + ": HTTP " + std::to_string(response.status));
            return false;
        }
        const auto* bytes = reinterpret_cast<const std::uint8_t*>(response.body.data());
        auto artifact = casedb_.store_raw_artifact(evidence::Operation::Cloud, url, desc,
                                                   {bytes, response.body.size()}, "json");
        if (!artifact.ok()) {
            merge_outcome(slot, Outcome::HttpError, 0);
            slot.diagnostics.push_back(desc + ": " + artifact.error().message);
            return false;
        }
        ++slot.pages;
        ++artifacts_;
        ctx_.filename = artifact.value().saved_path;
        auto normalized = normalize::normalize({bytes, response.body.size()}, descriptor,
                                               artifact.value().id, ctx_);
        if (!normalized.ok()) {
            merge_outcome(slot, Outcome::ParseWarning);
            slot.diagnostics.push_back(desc + ": " + normalized.error().message);
            return true;
        }
        const normalize::Normalized& result = normalized.value();
        slot.items += static_cast<std::int64_t>(result.records.size() + result.events.size());
        for (const auto& warning : result.warnings) {
            merge_outcome(slot, Outcome::ParseWarning);
            slot.diagnostics.push_back(warning);
        }
        const auto counts = normalize::apply(casedb_, result);
        content_rows_ += counts.records;
        events_ += counts.events;
        for (const auto& id : result.audio_ids) {
            if (audio_seen_.insert(id).second) audio_order_.push_back(id);
        }
        if (!result.zone_label.empty() && result.zone_label != ctx_.zone_label) {
            ctx_.zone_label = result.zone_label;
            casedb_.set_meta("zone_label", result.zone_label);
            zone_discovered_ = true;
        }
        if (!result.customer_id.empty()) {
            casedb_.set_meta("customer_id", result.customer_id);
            if (ctx_.default_user.empty()) ctx_.default_user = result.customer_id;
            if (session_.customer_id.empty()) session_.customer_id = result.customer_id;
        }
        merge_outcome(slot, Outcome::Ok);
        return true;
    }

    // Non-paginated endpoint: the main URL plus any alternates.
    void run_simple(EndpointOutcome& slot, const catalog::ApiDescriptor& descriptor) {
        auto resolved = catalog::resolve(descriptor, hosts_, {});
        if (!resolved.ok()) {
            merge_outcome(slot, Outcome::HttpError, 0);
            slot.diagnostics.push_back(resolved.error().message);
            return;
        }
        std::vector<std::string> urls{resolved.value()};
        for (const auto& alt : descriptor.alt_urls)
            urls.push_back(catalog::apply_host_override(alt, hosts_.base_url));
        for (const auto& url : urls) fetch_one(slot, descriptor, url, artifact_desc(descriptor, url));
    }

    void run_sized(EndpointOutcome& slot, const catalog::ApiDescriptor& descriptor) {
        auto resolved =
            catalog::resolve(descriptor, hosts_, {{"size", std::to_string(options_.list_size)}});
        if (!resolved.ok()) {
            merge_outcome(slot, Outcome::HttpError, 0);
            slot.diagnostics.push_back(resolved.error().message);
            return;
        }
        fetch_one(slot, descriptor, resolved.value(), artifact_desc(descriptor, resolved.value()));
    }

    // Cards walk: cursor starts at "now", then strictly decreases to the
    // oldest seen minus one. Stops on an empty page or a repeated minimum.
    void run_cards(EndpointOutcome& slot, const catalog::ApiDescriptor& descriptor) {
        std::int64_t cursor = epoch_ms_now();
        std::int64_t previous_min = std::numeric_limits<std::int64_t>::min();
        for (int page = 1; page <= kMaxPages; ++page) {
            auto resolved =
                catalog::resolve(descriptor, hosts_, {{"beforeCreationTime", std::to_string(cursor)}});
            if (!resolved.ok()) {
                merge_outcome(slot, Outcome::HttpError, 0);
                slot.diagnostics.push_back(resolved.error().message);
                return;
            }
            const std::string desc =
                artifact_desc(descriptor, resolved.value()) + " (page " + std::to_string(page) + ")";
            auto response = fetch(resolved.value(), descriptor.extra_headers);
            if (!response.ok()) {
                merge_outcome(slot, failure_outcome(response.error()), 0);
                slot.diagnostics.push_back(response.error().message);
                return;
            }
            if (!ingest_response(slot, descriptor, resolved.value(), response.value(), desc)) return;
            std::size_t count = 0;
            const std::int64_t minimum = min_creation_ms(response.value().body, "cards", count);
            if (count == 0 || minimum < 0) return;
            if (minimum == previous_min) {
                slot.diagnostics.push_back("cursor stalled at " + std::to_string(minimum));
                return;
            }
            previous_min = minimum;
            cursor = minimum - 1;
        }
    }

    // Activities walk: startTime is empty on the first call, then the oldest
    // creationTimestamp minus one; offset is pinned by the template.
    void run_activities(EndpointOutcome& slot, const catalog::ApiDescriptor& descriptor) {
        std::string cursor;
        std::int64_t previous_min = std::numeric_limits<std::int64_t>::min();
        for (int page = 1; page <= kMaxPages; ++page) {
            auto resolved = catalog::resolve(
                descriptor, hosts_,
                {{"startTime", cursor}, {"size", std::to_string(options_.page_size)}});
            if (!resolved.ok()) {
                merge_outcome(slot, Outcome::HttpError, 0);
                slot.diagnostics.push_back(resolved.error().message);
                return;
            }
            const std::string desc =
                artifact_desc(descriptor, resolved.value()) + " (page " + std::to_string(page) + ")";
            auto response = fetch(resolved.value(), descriptor.extra_headers);
            if (!response.ok()) {
                merge_outcome(slot, failure_outcome(response.error()), 0);
                slot.diagnostics.push_back(response.error().message);
                return;
            }
            if (!ingest_response(slot, descriptor, resolved.value(), response.value(), desc)) return;
            std::size_t count = 0;
            const std::int64_t minimum = min_creation_ms(response.value().body, "activities", count);
            if (count == 0 || minimum < 0) return;
            if (minimum == previous_min) {
                slot.diagnostics.push_back("cursor stalled at " + std::to_string(minimum));
                return;
            }
            previous_min = minimum;
            cursor = std::to_string(minimum - 1);
        }
    }

    void run_media(EndpointOutcome& slot, const catalog::ApiDescriptor& descriptor) {
        if (devices_.empty()) {
            merge_outcome(slot, Outcome::Skipped);
            slot.diagnostics.push_back("no devices discovered; nothing to fetch");
            return;
        }
        for (const auto& [serial, type] : devices_) {
            auto resolved = catalog::resolve(descriptor, hosts_,
                                             {{"deviceSerialNumber", serial},
                                              {"deviceType", type},
                                              {"size", std::to_string(options_.page_size)}});
            if (!resolved.ok()) {
                merge_outcome(slot, Outcome::HttpError, 0);
                slot.diagnostics.push_back(resolved.error().message);
                continue;
            }
            const std::string desc = artifact_desc(descriptor, resolved.value()) + " (" + serial + ")";
            ctx_.host_hint = serial;
            fetch_one(slot, descriptor, resolved.value(), desc);
            ctx_.host_hint.clear();
        }
    }

    // Voice recordings referenced by cards, activities, and to-dos.
    void run_audio(EndpointOutcome& slot, const catalog::ApiDescriptor& descriptor) {
        if (audio_order_.empty()) {
            merge_outcome(slot, Outcome::Skipped);
            slot.diagnostics.push_back("no utterance ids referenced");
            return;
        }
        struct Download {
            std::string id;
            std::string url;
            std::map<std::string, std::string> headers;
            Result<HttpResponse> response = Result<HttpResponse>::failure(ErrorKind::Transport, "");
        };
        std::vector<Download> downloads;
        for (const auto& id : audio_order_) {
            auto resolved = catalog::resolve(descriptor, hosts_, {{"id", id}});
            if (!resolved.ok()) {
                slot.diagnostics.push_back(id + ": " + resolved.error().message);
                continue;
            }
            downloads.push_back({id, resolved.value(), descriptor.extra_headers,
                                 Result<HttpResponse>::failure(ErrorKind::Transport, "pending")});
        }
        parallel_fetch(downloads.begin(), downloads.end());
        for (auto& download : downloads) {
            // Route expiries through the sequential retry path.
            if (download.response.ok() &&
                (download.response.value().status == 401 || download.response.value().status == 403))
                download.response = fetch(download.url, descriptor.extra_headers);
            if (!download.response.ok()) {
                merge_outcome(slot, failure_outcome(download.response.error()), 0);
                slot.diagnostics.push_back(download.id + ": " + download.response.error().message);
                continue;
            }
            const HttpResponse& response = download.response.value();
            if (response.status != 200) {
                const bool auth = response.status == 401 || response.status == 403;
                merge_outcome(slot, auth ? Outcome::AuthFailed : Outcome::HttpError, response.status);
                slot.diagnostics.push_back(download.id + ": HTTP " + std::to_string(response.status));
                continue;
            }
            const auto* bytes = reinterpret_cast<const std::uint8_t*>(response.body.data());
            auto artifact = casedb_.store_raw_artifact(evidence::Operation::Cloud, download.url,
                                                       "utterance audio", {bytes, response.body.size()},
                                                       audio_extension(response.content_type));
            if (!artifact.ok()) {
                merge_outcome(slot, Outcome::HttpError, 0);
                slot.diagnostics.push_back(download.id + ": " + artifact.error().message);
                continue;
            }
            ++slot.pages;
            ++slot.items;
            ++artifacts_;
            ++audio_files_;
            merge_outcome(slot, Outcome::Ok);
        }
    }

    // Concurrent GETs, bounded by max_parallel. Tasks carry their own url,
    // headers, and response slot; the session is never touched from threads.
    template <typename Iterator>
    void parallel_fetch(Iterator begin, Iterator end) {
        const std::string cookies = cookie_header(session_.cookies);
        const int bound = std::max(1, options_.max_parallel);
        for (Iterator chunk = begin; chunk != end;) {
            std::vector<std::thread> workers;
            for (int i = 0; i < bound && chunk != end; ++i, ++chunk) {
                workers.emplace_back([item = &*chunk, &cookies] {
                    item->response = http_get(item->url, cookies, item->headers);
                });
            }
            for (auto& worker : workers) worker.join();
        }
    }

    void fetch_one(EndpointOutcome& slot, const catalog::ApiDescriptor& descriptor,
                   const std::string& url, const std::string& desc) {
        auto response = fetch(url, descriptor.extra_headers);
        if (!response.ok()) {
            merge_outcome(slot, failure_outcome(response.error()), 0);
            slot.diagnostics.push_back(response.error().message);
            return;
        }
        if (ingest_response(slot, descriptor, url, response.value(), desc) &&
            descriptor.name == "devices/device")
            collect_devices(response.value().body);
    }

    void collect_devices(const std::string& body) {
        const json parsed = json::parse(body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("devices") || !parsed["devices"].is_array())
            return;
        for (const auto& device : parsed["devices"]) {
            if (!device.is_object() || !device.contains("serialNumber")) continue;
            const std::string serial = device.value("serialNumber", "");
            const std::string type = device.value("deviceType", "");
            if (serial.empty()) continue;
            if (std::none_of(devices_.begin(), devices_.end(),
                             [&](const auto& d) { return d.first == serial; }))
                devices_.emplace_back(serial, type);
        }
    }

    static Outcome failure_outcome(const Error& error) {
        return error.kind == ErrorKind::AuthFailed ? Outcome::AuthFailed : Outcome::HttpError;
    }

    Session& session_;
    evidence::CaseDatabase& casedb_;
    AcquireOptions options_;
    catalog::HostConfig hosts_;
    normalize::NormalizeContext ctx_;
    bool auth_dead_ = false;
    bool zone_discovered_ = false;
    std::vector<std::pair<std::string, std::string>> devices_;
    std::vector<std::string> audio_order_;
    std::set<std::string> audio_seen_;
    std::int64_t artifacts_ = 0;
    std::int64_t content_rows_ = 0;
    std::int64_t events_ = 0;
    std::int64_t audio_files_ = 0;

    friend AcquisitionReport acquire_all(Session&, evidence::CaseDatabase&, const AcquireOptions&);
    friend Result<std::int64_t> paginate_cards(Session&, evidence::CaseDatabase&,
                                               const AcquireOptions&);
    friend Result<std::int64_t> paginate_activities(Session&, evidence::CaseDatabase&,
                                                    const AcquireOptions&);
};

}  // namespace

const char* to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::Ok: return "OK";
        case Outcome::AuthFailed: return "AUTH_FAILED";
        case Outcome::HttpError: return "HTTP_ERROR";
        case Outcome::ParseWarning: return "PARSE_WARNING";
        case Outcome::Skipped: return "SKIPPED";
    }
    return "UNKNOWN";
}

bool AcquisitionReport::all_ok() const {
    return std::all_of(endpoints.begin(), endpoints.end(), [](const EndpointOutcome& e) {
        return e.outcome == Outcome::Ok || e.outcome == Outcome::Skipped;
    });
}

std::string AcquisitionReport::to_text() const {
    std::string out = "endpoint                                outcome           pages  items\n";
    for (const auto& endpoint : endpoints) {
        std::string outcome = to_string(endpoint.outcome);
        if (endpoint.outcome == Outcome::HttpError && endpoint.http_status)
            outcome += "(" + std::to_string(endpoint.http_status) + ")";
        char line[160];
        std::snprintf(line, sizeof line, "%-38s  %-16s %6lld %6lld\n", endpoint.endpoint.c_str(),
                      outcome.c_str(), static_cast<long long>(endpoint.pages),
                      static_cast<long long>(endpoint.items));
        out += line;
    }
    char totals[200];
    std::snprintf(totals, sizeof totals,
                  "totals: %lld files preserved, %lld content rows, %lld timeline events, "
                  "%lld audio files\n",
                  static_cast<long long>(artifacts), static_cast<long long>(content_rows),
                  static_cast<long long>(events), static_cast<long long>(audio_files));
    out += totals;
    return out;
}

Result<Session> create_session(const SessionOptions& options) {
    Session session;
    session.base_url = options.base_url;
    while (!session.base_url.empty() && session.base_url.back() == '/') session.base_url.pop_back();
    session.skills_base_url =
        options.skills_base_url.empty() ? session.base_url : options.skills_base_url;
    while (!session.skills_base_url.empty() && session.skills_base_url.back() == '/')
        session.skills_base_url.pop_back();
    if (session.base_url.empty())
        return Result<Session>::failure(ErrorKind::Parameter, "base URL is required");
    auto policy = check_transport_policy(session.base_url, options.allow_insecure_http);
    if (!policy.ok()) return Result<Session>::failure(policy.error().kind, policy.error().message);
    policy = check_transport_policy(session.skills_base_url, options.allow_insecure_http);
    if (!policy.ok()) return Result<Session>::failure(policy.error().kind, policy.error().message);

    if (!options.cookie_file.empty()) {
        auto imported = import_cookie_file(options.cookie_file, session);
        if (!imported.ok())
            return Result<Session>::failure(imported.error().kind, imported.error().message);
        session.can_relogin = false;
    } else {
        session.email = options.email;
        session.password = options.password;
        auto login = post_login(session);
        if (!login.ok()) return Result<Session>::failure(login.error().kind, login.error().message);
        session.can_relogin = true;
    }

    // Probe: the bootstrap endpoint proves the session works and names the
    // account we are acquiring.
    const auto* bootstrap = catalog::ApiCatalog::builtin().find("bootstrap");
    if (bootstrap) {
        catalog::HostConfig hosts{session.base_url, session.skills_base_url};
        auto url = catalog::resolve(*bootstrap, hosts, {});
        if (url.ok()) {
            auto probe = http_get(url.value(), cookie_header(session.cookies), {});
            if (!probe.ok())
                return Result<Session>::failure(probe.error().kind, probe.error().message);
            if (probe.value().status != 200)
                return Result<Session>::failure(
                    ErrorKind::AuthFailed,
                    "session probe returned HTTP " + std::to_string(probe.value().status));
            const json parsed = json::parse(probe.value().body, nullptr, false);
            if (!parsed.is_discarded() && parsed.contains("authentication") &&
                parsed["authentication"].is_object())
                session.customer_id = parsed["authentication"].value("customerId", "");
        }
    }
    return session;
}

Result<Session> create_session(std::string_view base_url, std::string_view email,
                               std::string_view password) {
    SessionOptions options;
    options.base_url = std::string(base_url);
    options.email = std::string(email);
    options.password = std::string(password);
    return create_session(options);
}

std::string artifact_desc(const catalog::ApiDescriptor& descriptor, std::string_view url) {
    std::string words = descriptor.name;
    const std::string path = url_path_of(url);
    for (const auto& alt : descriptor.alt_urls) {
        if (url_path_of(alt) != path) continue;
        const auto slash = path.rfind('/');
        words = slash == std::string::npos ? path : path.substr(slash + 1);
        break;
    }
    return "A " + title_case_words(words) + " " + category_title(descriptor.category);
}

AcquisitionReport acquire_all(Session& session, evidence::CaseDatabase& casedb,
                              const AcquireOptions& options) {
    const auto& descriptors = catalog::ApiCatalog::builtin().descriptors();
    AcquisitionReport report;
    report.endpoints.resize(descriptors.size());
    for (std::size_t i = 0; i < descriptors.size(); ++i)
        report.endpoints[i].endpoint = descriptors[i].name;
    auto slot_of = [&](std::string_view name) -> EndpointOutcome& {
        for (std::size_t i = 0; i < descriptors.size(); ++i)
            if (descriptors[i].name == name) return report.endpoints[i];
        throw CaseError(ErrorKind::Configuration, "catalog lacks endpoint " + std::string(name));
    };

    Acquirer acquirer(session, casedb, options);

    // Account and device endpoints run first: they provide the customer id,
    // the timezone label, and the device list the later phases depend on.
    for (const char* name : {"bootstrap", "household", "devices/device", "device-preferences"}) {
        const auto* descriptor = catalog::ApiCatalog::builtin().find(name);
        if (descriptor) acquirer.run_simple(slot_of(name), *descriptor);
    }

    // Independent setting endpoints: fetched concurrently, ingested in
    // catalog order so row ids stay deterministic.
    {
        struct Fetch {
            const catalog::ApiDescriptor* descriptor = nullptr;
            std::string url;
            std::map<std::string, std::string> headers;
            Result<HttpResponse> response = Result<HttpResponse>::failure(ErrorKind::Transport, "");
        };
        std::vector<Fetch> fetches;
        catalog::HostConfig hosts{session.base_url, session.skills_base_url};
        for (const char* name : {"wifi/configs", "bluetooth", "traffic/settings", "wake-word",
                                 "third-party", "son/householdaccounts", "yourskills", "phenix",
                                 "notifications"}) {
            const auto* descriptor = catalog::ApiCatalog::builtin().find(name);
            if (!descriptor) continue;
            auto url = catalog::resolve(*descriptor, hosts, {});
            if (!url.ok()) {
                merge_outcome(slot_of(name), Outcome::HttpError, 0);
                slot_of(name).diagnostics.push_back(url.error().message);
                continue;
            }
            fetches.push_back({descriptor, url.value(), descriptor->extra_headers,
                               Result<HttpResponse>::failure(ErrorKind::Transport, "pending")});
        }
        acquirer.parallel_fetch(fetches.begin(), fetches.end());
        for (auto& fetched : fetches) {
            EndpointOutcome& slot = slot_of(fetched.descriptor->name);
            // An expired session surfaces here; route it through the
            // sequential path so re-login happens at most once.
            const bool expired = fetched.response.ok() && (fetched.response.value().status == 401 ||
                                                           fetched.response.value().status == 403);
            if (expired) fetched.response = acquirer.fetch(fetched.url, fetched.descriptor->extra_headers);
            if (!fetched.response.ok()) {
                merge_outcome(slot, Acquirer::failure_outcome(fetched.response.error()), 0);
                slot.diagnostics.push_back(fetched.response.error().message);
                continue;
            }
            acquirer.ingest_response(slot, *fetched.descriptor, fetched.url, fetched.response.value(),
                                     artifact_desc(*fetched.descriptor, fetched.url));
        }
    }

    // Activity histories: sized lists and cursor walks, newest first.
    for (const char* name : {"todos TASK", "todos SHOPPING_ITEM"}) {
        const auto* descriptor = catalog::ApiCatalog::builtin().find(name);
        if (descriptor) acquirer.run_sized(slot_of(name), *descriptor);
    }
    if (const auto* cards = catalog::ApiCatalog::builtin().find("cards"))
        acquirer.run_cards(slot_of("cards"), *cards);
    if (const auto* activities = catalog::ApiCatalog::builtin().find("activities"))
        acquirer.run_activities(slot_of("activities"), *activities);
    if (const auto* media = catalog::ApiCatalog::builtin().find("media/historical-queue"))
        acquirer.run_media(slot_of("media/historical-queue"), *media);
    if (const auto* audio = catalog::ApiCatalog::builtin().find("utterance/audio/data"))
        acquirer.run_audio(slot_of("utterance/audio/data"), *audio);

    // The timezone label arrives with device-preferences, after ACCOUNT rows
    // exist; propagate it now.
    if (acquirer.zone_discovered_)
        casedb.execute("UPDATE ACCOUNT SET timezone = ?1", {acquirer.ctx_.zone_label});

    report.artifacts = acquirer.artifacts_;
    report.content_rows = acquirer.content_rows_;
    report.events = acquirer.events_;
    report.audio_files = acquirer.audio_files_;
    return report;
}

Result<std::int64_t> paginate_cards(Session& session, evidence::CaseDatabase& casedb,
                                    const AcquireOptions& options) {
    const auto* descriptor = catalog::ApiCatalog::builtin().find("cards");
    if (!descriptor)
        return Result<std::int64_t>::failure(ErrorKind::Configuration, "catalog lacks cards");
    Acquirer acquirer(session, casedb, options);
    EndpointOutcome slot;
    slot.endpoint = descriptor->name;
    acquirer.run_cards(slot, *descriptor);
    if (slot.pages == 0 && slot.outcome != Outcome::Ok)
        return Result<std::int64_t>::failure(
            slot.outcome == Outcome::AuthFailed ? ErrorKind::AuthFailed : ErrorKind::Transport,
            slot.diagnostics.empty() ? "card pagination failed" : slot.diagnostics.front());
    return slot.items;
}

Result<std::int64_t> paginate_activities(Session& session, evidence::CaseDatabase& casedb,
                                         const AcquireOptions& options) {
    const auto* descriptor = catalog::ApiCatalog::builtin().find("activities");
    if (!descriptor)
        return Result<std::int64_t>::failure(ErrorKind::Configuration, "catalog lacks activities");
    Acquirer acquirer(session, casedb, options);
    EndpointOutcome slot;
    slot.endpoint = descriptor->name;
    acquirer.run_activities(slot, *descriptor);
    if (slot.pages == 0 && slot.outcome != Outcome::Ok)
        return Result<std::int64_t>::failure(
            slot.outcome == Outcome::AuthFailed ? ErrorKind::AuthFailed : ErrorKind::Transport,
            slot.diagnostics.empty() ? "activity pagination failed" : slot.diagnostics.front());
    return slot.items;
}

Result<evidence::RawArtifact> download_utterance(Session& session, std::string_view audio_id,
                                                 evidence::CaseDatabase& casedb) {
    if (audio_id.empty())
        return Result<evidence::RawArtifact>::failure(ErrorKind::Parameter, "empty utterance id");
    const auto* descriptor = catalog::ApiCatalog::builtin().find("utterance/audio/data");
    if (!descriptor)
        return Result<evidence::RawArtifact>::failure(ErrorKind::Configuration,
                                                      "catalog lacks the utterance endpoint");
    catalog::HostConfig hosts{session.base_url, session.skills_base_url};
    auto url = catalog::resolve(*descriptor, hosts, {{"id", std::string(audio_id)}});
    if (!url.ok())
        return Result<evidence::RawArtifact>::failure(url.error().kind, url.error().message);
    Acquirer acquirer(session, casedb, {});
    auto response = acquirer.fetch(url.value(), descriptor->extra_headers);
    if (!response.ok())
        return Result<evidence::RawArtifact>::failure(response.error().kind,
                                                      response.error().message);
    if (response.value().status != 200) {
        const bool auth = response.value().status == 401 || response.value().status == 403;
        return Result<evidence::RawArtifact>::failure(
            auth ? ErrorKind::AuthFailed : ErrorKind::Transport,
            "utterance fetch returned HTTP " + std::to_string(response.value().status));
    }
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(response.value().body.data());
    return casedb.store_raw_artifact(evidence::Operation::Cloud, url.value(), "utterance audio",
                                     {bytes, response.value().body.size()},
                                     audio_extension(response.value().content_type));
}

}  // namespace cift::cloud
