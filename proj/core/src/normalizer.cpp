#include "cift/normalizer.hpp"

#include <set>

#include "cift/epoch.hpp"
#include "cift/hash.hpp"
#include "json.hpp"

namespace cift::normalize {

using nlohmann::json;

namespace {

std::string text_of(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_boolean()) return value.get<bool>() ? "True" : "False";
    if (value.is_null()) return "";
    return value.dump();
}

std::string field(const json& object, const char* key) {
    if (!object.is_object() || !object.contains(key)) return "";
    return text_of(object.at(key));
}

// Epoch value as carried by the payloads: ms integers, or numeric strings for
// the skills endpoint. -1 when absent or non-numeric.
std::int64_t epoch_field(const json& object, const char* key) {
    if (!object.is_object() || !object.contains(key)) return -1;
    const json& value = object.at(key);
    if (value.is_number_integer()) return value.get<std::int64_t>();
    if (value.is_number_unsigned()) return static_cast<std::int64_t>(value.get<std::uint64_t>());
    if (value.is_number_float()) return static_cast<std::int64_t>(value.get<double>());
    if (value.is_string()) {
        const std::string& text = value.get_ref<const std::string&>();
        if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) return -1;
        return std::strtoll(text.c_str(), nullptr, 10);
    }
    return -1;
}

// List payloads are usually arrays, but some excerpts show a single object in
// the same position; treat that as a one-element list.
std::vector<json> items_of(const json& body, const char* key) {
    std::vector<json> items;
    if (!body.is_object() || !body.contains(key)) return items;
    const json& node = body.at(key);
    if (node.is_array())
        for (const json& item : node) items.push_back(item);
    else if (node.is_object())
        items.push_back(node);
    return items;
}

TimelineEvent base_event(std::int64_t source_id, const NormalizeContext& ctx) {
    TimelineEvent event;
    event.source_id = source_id;
    event.timezone = ctx.zone_label.empty() ? "UTC" : ctx.zone_label;
    event.source = evidence::to_string(ctx.operation);
    event.filename = ctx.filename;
    return event;
}

// Renders the timestamp into the event; a bad value drops the event with a
// warning instead of poisoning the whole payload.
bool stamp(TimelineEvent& event, std::int64_t value, const char* what, Normalized& out) {
    auto ts = epoch_to_utc(value, EpochUnit::Auto);
    if (!ts.ok()) {
        out.warnings.push_back(std::string(what) + ": " + ts.error().message);
        return false;
    }
    event.date = ts.value().date;
    event.time = ts.value().time;
    return true;
}

std::string timestamp_string(std::int64_t value, const char* what, Normalized& out) {
    auto ts = epoch_to_utc(value, EpochUnit::Auto);
    if (!ts.ok()) {
        out.warnings.push_back(std::string(what) + ": " + ts.error().message);
        return "";
    }
    return ts.value().date + " " + ts.value().time;
}

// Dotted expected-key paths; "name[]" matches any array element (an empty
// list vacuously carries the key) and "*" any descendant object at any depth,
// matching the recursive walk the phenix normalizer performs.
bool path_exists(const json& node, std::string_view path) {
    if (path.empty()) return true;
    auto dot = path.find('.');
    std::string_view head = path.substr(0, dot);
    std::string_view rest = dot == std::string_view::npos ? std::string_view{}
                                                          : path.substr(dot + 1);
    if (head == "*") {
        if (node.is_array()) {
            for (const json& element : node)
                if (path_exists(element, path)) return true;
            return false;
        }
        if (!node.is_object()) return false;
        if (node.empty()) return true;
        for (const auto& member : node.items())
            if (path_exists(member.value(), rest) || path_exists(member.value(), path))
                return true;
        return false;
    }
    bool any_element = head.size() > 2 && head.substr(head.size() - 2) == "[]";
    std::string key(any_element ? head.substr(0, head.size() - 2) : head);
    if (!node.is_object() || !node.contains(key)) return false;
    const json& child = node.at(key);
    if (!any_element) return path_exists(child, rest);
    if (child.is_array()) {
        if (child.empty()) return true;
        for (const json& element : child)
            if (path_exists(element, rest)) return true;
        return false;
    }
    if (child.is_object()) return path_exists(child, rest);
    return false;
}

void check_expected_keys(const json& body, const catalog::ApiDescriptor& descriptor,
                         Normalized& out) {
    for (const std::string& path : descriptor.expected_keys)
        if (!path_exists(body, path))
            out.warnings.push_back(descriptor.name + ": missing expected key " + path);
}

void add_misc(Normalized& out, std::int64_t source_id, const std::string& name,
              const json& value) {
    NormalizedRecord record;
    record.table = "SETTING_MISC";
    record.source_id = source_id;
    record.columns = {{"name", name}, {"value", value.dump()}};
    out.records.push_back(std::move(record));
}

void normalize_bootstrap(const json& body, std::int64_t source_id, Normalized& out) {
    const json auth = body.is_object() && body.contains("authentication") ? body.at("authentication")
                                                                          : json::object();
    NormalizedRecord record;
    record.table = "ACCOUNT";
    record.source_id = source_id;
    record.columns = {{"timezone", ""},
                      {"customer_email", field(auth, "customerEmail")},
                      {"customer_name", field(auth, "customerName")},
                      {"customer_id", field(auth, "customerId")}};
    out.customer_id = field(auth, "customerId");
    out.records.push_back(std::move(record));
}

void normalize_household(const json& body, std::int64_t source_id, Normalized& out) {
    for (const json& account : items_of(body, "accounts")) {
        NormalizedRecord record;
        record.table = "ACCOUNT";
        record.source_id = source_id;
        record.columns = {{"timezone", ""},
                          {"customer_email", field(account, "email")},
                          {"customer_name", field(account, "fullName")},
                          {"customer_id", field(account, "id")}};
        out.records.push_back(std::move(record));
    }
}

void normalize_devices(const json& body, std::int64_t source_id, Normalized& out) {
    for (const json& device : items_of(body, "devices")) {
        NormalizedRecord record;
        record.table = "ALEXA_DEVICE";
        record.source_id = source_id;
        record.columns = {{"device_account_name", field(device, "accountName")},
                          {"device_account_id", field(device, "deviceAccountId")},
                          {"customer_id", field(device, "deviceOwnerCustomerId")},
                          {"device_serial_number", field(device, "serialNumber")},
                          {"device_type", field(device, "deviceType")},
                          {"sw_version", field(device, "softwareVersion")},
                          {"mac_address", field(device, "macAddress")}};
        out.records.push_back(std::move(record));
    }
}

void normalize_device_preferences(const json& body, std::int64_t source_id, Normalized& out) {
    for (const json& preference : items_of(body, "devicePreferences")) {
        NormalizedRecord record;
        record.table = "ALEXA_DEVICE";
        record.source_id = source_id;
        record.columns = {{"device_serial_number", field(preference, "deviceSerialNumber")},
                          {"address", field(preference, "deviceAddress")},
                          {"postal_code", field(preference, "postalCode")},
                          {"locale", field(preference, "locale")},
                          {"timezone", field(preference, "timeZoneId")}};
        if (out.zone_label.empty()) out.zone_label = field(preference, "timeZoneId");
        out.records.push_back(std::move(record));
    }
}

void normalize_wifi(const json& body, std::int64_t source_id, Normalized& out) {
    for (const json& config : items_of(body, "values")) {
        NormalizedRecord record;
        record.table = "SETTING_WIFI";
        record.source_id = source_id;
        record.columns = {{"ssid", field(config, "ssid")},
                          {"security_method", field(config, "securityMethod")},
                          {"pre_shared_key", field(config, "preSharedKey")}};
        out.records.push_back(std::move(record));
    }
}

void normalize_bluetooth(const json& body, std::int64_t source_id, Normalized& out) {
    for (const json& state : items_of(body, "bluetoothStates"))
        for (const json& paired : items_of(state, "pairedDeviceList"))
            add_misc(out, source_id, "bluetooth_paired_device", paired);
}

void normalize_traffic(const json& body, std::int64_t source_id, Normalized& out) {
    json route = json::object();
    if (body.is_object() && body.contains("origin")) route["origin"] = body.at("origin");
    if (body.is_object() && body.contains("destination"))
        route["destination"] = body.at("destination");
    if (!route.empty()) add_misc(out, source_id, "traffic_route", route);
}

void normalize_wake_word(const json& body, std::int64_t source_id, Normalized& out) {
    for (const json& word : items_of(body, "wakeWords"))
        add_misc(out, source_id, "wake_word", word);
}

void normalize_third_party(const json& body, std::int64_t source_id, Normalized& out) {
    for (const json& service : items_of(body, "services"))
        add_misc(out, source_id, "third_party_service", service);
}

void normalize_calendars(const json& body, std::int64_t source_id, Normalized& out) {
    for (const json& account : items_of(body, "accounts"))
        add_misc(out, source_id, "calendar_account", account);
}

void normalize_skills(const json& body, std::int64_t source_id, Normalized& out) {
    for (const json& skill : items_of(body, "skills")) {
        const json details = skill.contains("productDetails") ? skill.at("productDetails")
                                                              : json::object();
        const json developer = skill.contains("developerInfo") ? skill.at("developerInfo")
                                                               : json::object();
        const json entitlement = skill.contains("entitlementInfo") ? skill.at("entitlementInfo")
                                                                   : json::object();
        std::string release;
        if (std::int64_t raw = epoch_field(details, "releaseDate"); raw >= 0)
            release = timestamp_string(raw, "releaseDate", out);

        NormalizedRecord record;
        record.table = "SKILL";
        record.source_id = source_id;
        record.columns = {{"title", field(skill, "title")},
                          {"developer_name", field(developer, "name")},
                          {"account_linked", field(entitlement, "accountLinked")},
                          {"release_date", release}};
        out.records.push_back(std::move(record));
    }
}

void normalize_appliance(const json& appliance, std::int64_t source_id,
                         const NormalizeContext& ctx, Normalized& out) {
    const json network = appliance.contains("applianceNetworkState")
                             ? appliance.at("applianceNetworkState")
                             : json::object();
    std::int64_t created = epoch_field(network, "createdAt");
    if (created < 0) created = epoch_field(appliance, "createdAt");
    std::int64_t modified = epoch_field(appliance, "friendlyNameModifiedAt");

    NormalizedRecord record;
    record.table = "COMPATIBLE_DEVICE";
    record.source_id = source_id;
    record.columns = {{"name", field(appliance, "friendlyName")},
                      {"manufacture", field(appliance, "manufacturerName")},
                      {"model", field(appliance, "modelName")},
                      {"created", created >= 0 ? timestamp_string(created, "createdAt", out) : ""},
                      {"name_modified", modified >= 0
                                            ? timestamp_string(modified, "friendlyNameModifiedAt", out)
                                            : ""},
                      {"desc", field(appliance, "description")},
                      {"type", field(appliance, "deviceType")},
                      {"reachable", field(network, "reachable")},
                      {"firmware_version", field(appliance, "version")},
                      {"appliance_id", field(appliance, "applianceId")},
                      {"alexa_device_serial_number", field(appliance, "alexaDeviceSerialNumber")},
                      {"alexa_device_type", field(appliance, "alexaDeviceType")}};
    out.records.push_back(std::move(record));

    // Both detection timestamps become events, even when they carry the same
    // instant: dropping one would hide which field the value came from.
    if (created >= 0) {
        TimelineEvent event = base_event(source_id, ctx);
        if (stamp(event, created, "phenix createdAt", out)) {
            event.macb = "...B";
            event.type = "Created";
            event.sourcetype = "Compatible Device";
            event.short_text = "Compatible device";
            event.desc = field(appliance, "friendlyName");
            event.host = field(appliance, "alexaDeviceSerialNumber");
            event.user = ctx.default_user;
            out.events.push_back(std::move(event));
        }
    }
    if (modified >= 0) {
        TimelineEvent event = base_event(source_id, ctx);
        if (stamp(event, modified, "phenix friendlyNameModifiedAt", out)) {
            event.macb = "M...";
            event.type = "Modified";
            event.sourcetype = "Compatible Device";
            event.short_text = "Compatible device";
            event.desc = field(appliance, "friendlyName");
            event.host = field(appliance, "alexaDeviceSerialNumber");
            event.user = ctx.default_user;
            out.events.push_back(std::move(event));
        }
    }
}

// The phenix document nests appliance objects under uid keys; walk the tree
// and treat anything carrying a friendlyName as an appliance.
void collect_appliances(const json& node, std::int64_t source_id, const NormalizeContext& ctx,
                        Normalized& out) {
    if (node.is_object()) {
        if (node.contains("friendlyName")) {
            normalize_appliance(node, source_id, ctx, out);
            return;
        }
        for (const auto& member : node.items())
            collect_appliances(member.value(), source_id, ctx, out);
    } else if (node.is_array()) {
        for (const json& element : node) collect_appliances(element, source_id, ctx, out);
    }
}

void normalize_todos(const json& body, const catalog::ApiDescriptor& descriptor,
                     std::int64_t source_id, const NormalizeContext& ctx, Normalized& out) {
    bool default_shopping = descriptor.name == "todos SHOPPING_ITEM";
    for (const json& value : items_of(body, "values")) {
        TodoItem item;
        item.text = field(value, "text");
        item.created_ms = epoch_field(value, "createdDate");
        item.updated_ms = epoch_field(value, "lastUpdatedDate");
        item.customer_id = field(value, "customerId");
        item.audio_id = audio_id_from(field(value, "originalAudioId"));
        std::string type = field(value, "type");
        item.shopping = type.empty() ? default_shopping : type == "SHOPPING_ITEM";
        normalize_todo_item(item, source_id, ctx, out);
    }
}

void normalize_notifications(const json& body, std::int64_t source_id,
                             const NormalizeContext& ctx, Normalized& out) {
    for (const json& notification : items_of(body, "notifications")) {
        std::string kind = field(notification, "type");
        std::string status = field(notification, "status");
        std::string desc = kind + (status.empty() ? "" : " " + status);

        auto fill = [&](TimelineEvent& event) {
            event.sourcetype = "Notification";
            event.short_text = "Notification";
            event.desc = desc;
            event.host = field(notification, "deviceSerialNumber");
            event.user = ctx.default_user;
        };

        if (std::int64_t created = epoch_field(notification, "createdDate"); created >= 0) {
            TimelineEvent event = base_event(source_id, ctx);
            if (stamp(event, created, "notification createdDate", out)) {
                event.macb = "...B";
                event.type = "Created";
                fill(event);
                out.events.push_back(std::move(event));
            }
        }
        if (std::int64_t alarm = epoch_field(notification, "alarmTime"); alarm >= 0) {
            TimelineEvent event = base_event(source_id, ctx);
            if (stamp(event, alarm, "notification alarmTime", out)) {
                event.macb = "...B";
                event.type = "Alarm time";
                fill(event);
                out.events.push_back(std::move(event));
            }
        }
    }
}

void normalize_cards(const json& body, std::int64_t source_id, const NormalizeContext& ctx,
                     Normalized& out) {
    for (const json& card : items_of(body, "cards")) {
        std::int64_t created = epoch_field(card, "creationTimestamp");
        if (created < 0) continue;
        TimelineEvent event = base_event(source_id, ctx);
        if (!stamp(event, created, "card creationTimestamp", out)) continue;
        event.macb = "...B";
        event.type = "Created";
        event.sourcetype = "Card";
        event.short_text = "Card";
        event.desc = field(card, "title");
        const json playback = card.contains("playbackAudioAction") ? card.at("playbackAudioAction")
                                                                   : json::object();
        event.notes = field(playback, "mainText");
        std::string audio_id = audio_id_from(field(playback, "url"));
        if (!audio_id.empty()) {
            event.extra = utterance_url(audio_id);
            out.audio_ids.push_back(audio_id);
        }
        const json source_device = card.contains("sourceDevice") ? card.at("sourceDevice")
                                                                 : json::object();
        event.host = field(source_device, "serialNumber");
        std::string user = field(card, "registeredCustomerId");
        event.user = user.empty() ? ctx.default_user : user;
        out.events.push_back(std::move(event));
    }
}

// The activity description is itself JSON (sometimes string-encoded); the
// summary inside is what Alexa heard.
std::string activity_summary(const json& activity) {
    if (!activity.is_object() || !activity.contains("description")) return "";
    const json& description = activity.at("description");
    if (description.is_object()) return field(description, "summary");
    if (description.is_string()) {
        const std::string& text = description.get_ref<const std::string&>();
        json parsed = json::parse(text, nullptr, false);
        if (parsed.is_object() && parsed.contains("summary")) return field(parsed, "summary");
        return text;
    }
    return text_of(description);
}

void normalize_activities(const json& body, std::int64_t source_id, const NormalizeContext& ctx,
                          Normalized& out) {
    for (const json& activity : items_of(body, "activities")) {
        std::int64_t created = epoch_field(activity, "creationTimestamp");
        if (created < 0) continue;
        TimelineEvent event = base_event(source_id, ctx);
        if (!stamp(event, created, "activity creationTimestamp", out)) continue;
        event.macb = "...B";
        event.type = "Created";
        event.sourcetype = "Activity History";
        event.short_text = "History";
        event.desc = activity_summary(activity);
        event.notes = field(activity, "activityStatus");
        std::string user = field(activity, "registeredCustomerId");
        event.user = user.empty() ? ctx.default_user : user;

        if (activity.contains("sourceDeviceIds")) {
            const json& ids = activity.at("sourceDeviceIds");
            if (ids.is_object()) {
                event.host = field(ids, "serialNumber");
            } else if (ids.is_array() && !ids.empty()) {
                event.host = field(ids.front(), "serialNumber");
            }
        }
        std::string audio_id = audio_id_from(field(activity, "utteranceId"));
        if (!audio_id.empty()) {
            event.extra = utterance_url(audio_id);
            out.audio_ids.push_back(audio_id);
        }
        out.events.push_back(std::move(event));
    }
}

void normalize_media(const json& body, std::int64_t source_id, const NormalizeContext& ctx,
                     Normalized& out) {
    for (const json& item : items_of(body, "media")) {
        std::int64_t started = epoch_field(item, "startTime");
        if (started < 0) continue;
        TimelineEvent event = base_event(source_id, ctx);
        if (!stamp(event, started, "media startTime", out)) continue;
        event.macb = "...B";
        event.type = "Start time";
        event.sourcetype = "Media History";
        event.short_text = "Media";
        event.desc = field(item, "title");
        event.notes = field(item, "providerId");
        std::string host = field(item, "deviceSerialNumber");
        event.host = host.empty() ? ctx.host_hint : host;
        event.user = ctx.default_user;
        out.events.push_back(std::move(event));
    }
}

}  // namespace

std::string utterance_url(std::string_view audio_id) {
    return "https://pitangui.amazon.com/api/utterance/audio/data?id=" + std::string(audio_id);
}

std::string audio_id_from(std::string_view value) {
    while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
        value.remove_prefix(1);
    while (!value.empty() && (value.back() == ' ' || value.back() == '\t')) value.remove_suffix(1);
    if (auto pos = value.find("id="); pos != std::string_view::npos &&
                                      value.substr(0, 4).find("http") == 0)
        return std::string(value.substr(pos + 3));
    return std::string(value);
}

void normalize_todo_item(const TodoItem& item, std::int64_t source_id,
                         const NormalizeContext& ctx, Normalized& out) {
    std::string user = item.customer_id.empty() ? ctx.default_user : item.customer_id;
    std::string extra;
    if (!item.audio_id.empty()) {
        extra = utterance_url(item.audio_id);
        out.audio_ids.push_back(item.audio_id);
    }

    auto fill = [&](TimelineEvent& event) {
        event.sourcetype = "To-do/Shopping";
        event.short_text = item.shopping ? "Shopping" : "To-do";
        event.desc = item.text;
        event.user = user;
        event.extra = extra;
    };

    if (item.created_ms >= 0) {
        TimelineEvent event = base_event(source_id, ctx);
        if (stamp(event, item.created_ms, "todo createdDate", out)) {
            event.macb = "...B";
            event.type = "Created";
            fill(event);
            out.events.push_back(std::move(event));
        }
    }
    // An update stamp equal to creation adds no information; only a genuine
    // modification becomes an M event.
    if (item.updated_ms >= 0 && item.updated_ms != item.created_ms) {
        TimelineEvent event = base_event(source_id, ctx);
        if (stamp(event, item.updated_ms, "todo lastUpdatedDate", out)) {
            event.macb = "M...";
            event.type = "Modified";
            fill(event);
            out.events.push_back(std::move(event));
        }
    }
}

Result<Normalized> normalize(std::span<const std::uint8_t> payload,
                             const catalog::ApiDescriptor& descriptor, std::int64_t source_id,
                             const NormalizeContext& ctx) {
    json body = json::parse(payload.begin(), payload.end(), nullptr, false);
    if (body.is_discarded())
        return Result<Normalized>::failure(ErrorKind::Parse,
                                           descriptor.name + ": payload is not valid JSON");

    Normalized out;
    const std::string& name = descriptor.name;
    if (name == "bootstrap") {
        normalize_bootstrap(body, source_id, out);
    } else if (name == "household") {
        normalize_household(body, source_id, out);
    } else if (name == "devices/device") {
        normalize_devices(body, source_id, out);
    } else if (name == "device-preferences") {
        normalize_device_preferences(body, source_id, out);
    } else if (name == "wifi/configs") {
        normalize_wifi(body, source_id, out);
    } else if (name == "bluetooth") {
        normalize_bluetooth(body, source_id, out);
    } else if (name == "traffic/settings") {
        normalize_traffic(body, source_id, out);
    } else if (name == "wake-word") {
        normalize_wake_word(body, source_id, out);
    } else if (name == "third-party") {
        normalize_third_party(body, source_id, out);
    } else if (name == "son/householdaccounts") {
        normalize_calendars(body, source_id, out);
    } else if (name == "yourskills") {
        normalize_skills(body, source_id, out);
    } else if (name == "phenix") {
        collect_appliances(body, source_id, ctx, out);
    } else if (name == "todos TASK" || name == "todos SHOPPING_ITEM") {
        normalize_todos(body, descriptor, source_id, ctx, out);
    } else if (name == "notifications") {
        normalize_notifications(body, source_id, ctx, out);
    } else if (name == "cards") {
        normalize_cards(body, source_id, ctx, out);
    } else if (name == "activities") {
        normalize_activities(body, source_id, ctx, out);
    } else if (name == "media/historical-queue") {
        normalize_media(body, source_id, ctx, out);
    }
    // utterance/audio/data and anything future-unknown: preserved, no rows.

    check_expected_keys(body, descriptor, out);
    return out;
}

ApplyCounts apply(evidence::CaseDatabase& casedb, const Normalized& normalized) {
    ApplyCounts counts;
    for (const NormalizedRecord& record : normalized.records) {
        evidence::CaseDatabase::Row row;
        row.emplace_back("source_id", std::to_string(record.source_id));
        for (const auto& column : record.columns) row.push_back(column);
        if (record.table == "ALEXA_DEVICE") {
            if (casedb.upsert_alexa_device(row)) ++counts.records;
        } else if (casedb.insert_row(record.table, row)) {
            ++counts.records;
        }
    }
    for (const TimelineEvent& event : normalized.events) {
        evidence::CaseDatabase::Row row = {
            {"source_id", std::to_string(event.source_id)},
            {"date", event.date},
            {"time", event.time},
            {"timezone", event.timezone},
            {"MACB", event.macb},
            {"source", event.source},
            {"sourcetype", event.sourcetype},
            {"type", event.type},
            {"user", event.user},
            {"host", event.host},
            {"short", event.short_text},
            {"desc", event.desc},
            {"filename", event.filename},
            {"notes", event.notes},
            {"format", event.format},
            {"extra", event.extra},
        };
        if (casedb.insert_row("TIMELINE", row)) ++counts.events;
    }
    return counts;
}

std::int64_t correlate(evidence::CaseDatabase& casedb) {
    auto rows = casedb.query(
        "SELECT rowid, date, time, sourcetype, host, \"desc\", source FROM TIMELINE");

    auto key_of = [](const evidence::CaseDatabase::Row& row) {
        const std::string& date = row[1].second;
        const std::string& time = row[2].second;
        auto epoch = utc_strings_to_epoch_ms(date, time);
        std::string stamp = epoch.ok() ? std::to_string(epoch.value()) : date + "T" + time;
        return row[3].second + "\x1f" + stamp + "\x1f" + row[4].second + "\x1f" +
               sha1_hex(row[5].second);
    };

    std::set<std::string> cloud_keys;
    for (const auto& row : rows)
        if (row[6].second == "CLOUD") cloud_keys.insert(key_of(row));

    // Recomputed from scratch on every run so the flag stays consistent with
    // whatever was ingested since.
    casedb.execute("UPDATE TIMELINE SET client_only = 0");
    std::int64_t flagged = 0;
    for (const auto& row : rows) {
        if (row[6].second == "CLOUD") continue;
        if (cloud_keys.count(key_of(row))) continue;
        casedb.execute("UPDATE TIMELINE SET client_only = 1 WHERE rowid = ?1", {row[0].second});
        ++flagged;
    }
    return flagged;
}

}  // namespace cift::normalize
