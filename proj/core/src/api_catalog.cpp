#include "cift/api_catalog.hpp"

#include <algorithm>
#include <cstdio>

#include "cift/blockfile.hpp"

namespace cift::embedded {
// Generated from core/data/alexa_apis.conf at configure time.
extern const unsigned char kAlexaApis[];
extern const unsigned long kAlexaApisSize;
}  // namespace cift::embedded

namespace cift::catalog {

namespace {

struct CategoryName {
    Category category;
    const char* text;
};

constexpr CategoryName kCategoryNames[] = {
    {Category::Account, "ACCOUNT"},
    {Category::AlexaDevice, "ALEXA_DEVICE"},
    {Category::CustomerSetting, "CUSTOMER_SETTING"},
    {Category::Skill, "SKILL"},
    {Category::CompatibleDevice, "COMPATIBLE_DEVICE"},
    {Category::UserActivity, "USER_ACTIVITY"},
    {Category::Etc, "ETC"},
};

struct PaginationName {
    Pagination pagination;
    const char* text;
};

constexpr PaginationName kPaginationNames[] = {
    {Pagination::None, "NONE"},
    {Pagination::BeforeCreationTime, "BEFORE_CREATION_TIME"},
    {Pagination::StartTimeSizeOffset, "START_TIME_SIZE_OFFSET"},
    {Pagination::SizeOnly, "SIZE_ONLY"},
    {Pagination::DeviceQueue, "DEVICE_QUEUE"},
};

// Parameter names implied by each pagination scheme, in placeholder order.
std::vector<std::string> scheme_params(Pagination pagination) {
    switch (pagination) {
        case Pagination::None:
            return {};
        case Pagination::BeforeCreationTime:
            return {"beforeCreationTime"};
        case Pagination::StartTimeSizeOffset:
            return {"startTime", "size"};
        case Pagination::SizeOnly:
            return {"size"};
        case Pagination::DeviceQueue:
            return {"deviceSerialNumber", "deviceType", "size"};
    }
    return {};
}

std::size_t count_placeholders(std::string_view text) {
    std::size_t count = 0;
    for (std::size_t pos = 0; (pos = text.find("{}", pos)) != std::string_view::npos; pos += 2)
        ++count;
    return count;
}

// Path part of an absolute URL: everything from the first '/' after the
// authority up to (not including) '?'.
std::string_view url_path(std::string_view url) {
    std::size_t start = 0;
    if (auto scheme = url.find("://"); scheme != std::string_view::npos)
        start = url.find('/', scheme + 3);
    else
        start = url.find('/');
    if (start == std::string_view::npos) return "/";
    auto end = url.find('?', start);
    return url.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
}

std::string_view url_query(std::string_view url) {
    auto pos = url.find('?');
    if (pos == std::string_view::npos) return {};
    auto fragment = url.find('#', pos);
    return url.substr(pos + 1, fragment == std::string_view::npos ? std::string_view::npos
                                                                  : fragment - pos - 1);
}

std::string query_param(std::string_view url, std::string_view name) {
    std::string_view query = url_query(url);
    while (!query.empty()) {
        auto amp = query.find('&');
        std::string_view pair = query.substr(0, amp);
        query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
        auto eq = pair.find('=');
        if (eq != std::string_view::npos && pair.substr(0, eq) == name)
            return std::string(pair.substr(eq + 1));
    }
    return "";
}

}  // namespace

const char* to_string(Category category) {
    for (const auto& entry : kCategoryNames)
        if (entry.category == category) return entry.text;
    return "ETC";
}

const char* to_string(Pagination pagination) {
    for (const auto& entry : kPaginationNames)
        if (entry.pagination == pagination) return entry.text;
    return "NONE";
}

Result<Category> category_from_string(std::string_view text) {
    for (const auto& entry : kCategoryNames)
        if (text == entry.text) return entry.category;
    return Result<Category>::failure(ErrorKind::Parse,
                                     "unknown category \"" + std::string(text) + "\"");
}

Result<Pagination> pagination_from_string(std::string_view text) {
    for (const auto& entry : kPaginationNames)
        if (text == entry.text) return entry.pagination;
    return Result<Pagination>::failure(ErrorKind::Parse,
                                       "unknown pagination scheme \"" + std::string(text) + "\"");
}

std::size_t ApiDescriptor::placeholder_count() const {
    return count_placeholders(url_template);
}

std::string url_encode(std::string_view value) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(value.size());
    for (unsigned char c : value) {
        bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                          (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' || c == '~';
        if (unreserved) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0x0F]);
        }
    }
    return out;
}

std::string apply_host_override(std::string_view url, std::string_view base) {
    if (base.empty()) return std::string(url);
    std::string out(base);
    while (!out.empty() && out.back() == '/') out.pop_back();
    out += url_path(url);
    if (auto query = url_query(url); !query.empty()) {
        out += '?';
        out += query;
    }
    return out;
}

Result<std::string> resolve(const ApiDescriptor& descriptor, const HostConfig& hosts,
                            const std::map<std::string, std::string>& params) {
    const std::string& host =
        descriptor.skills_host ? hosts.skills_base_url : hosts.base_url;
    std::string url = apply_host_override(descriptor.url_template, host);

    std::string out;
    out.reserve(url.size());
    std::size_t index = 0;
    std::size_t pos = 0;
    while (true) {
        auto brace = url.find("{}", pos);
        if (brace == std::string::npos) {
            out.append(url, pos, std::string::npos);
            break;
        }
        out.append(url, pos, brace - pos);
        if (index >= descriptor.param_names.size())
            return Result<std::string>::failure(
                ErrorKind::Parameter,
                descriptor.name + ": template has more placeholders than declared parameters");
        const std::string& param = descriptor.param_names[index];
        auto it = params.find(param);
        if (it == params.end())
            return Result<std::string>::failure(
                ErrorKind::Parameter, descriptor.name + ": missing parameter \"" + param + "\"");
        out += url_encode(it->second);
        ++index;
        pos = brace + 2;
    }
    return out;
}

Result<std::string> resolve(const ApiDescriptor& descriptor, std::string_view base_url,
                            const std::map<std::string, std::string>& params) {
    // Single-host convenience: skills descriptors keep their catalog host.
    HostConfig hosts;
    hosts.base_url = std::string(base_url);
    if (descriptor.skills_host) hosts.skills_base_url = std::string(base_url);
    return resolve(descriptor, hosts, params);
}

Result<ApiCatalog> ApiCatalog::load(std::string_view document) {
    auto blocks = parse_block_document(document);
    if (!blocks.ok()) return blocks.error();

    ApiCatalog catalog;
    for (const ConfigBlock& block : blocks.value()) {
        ApiDescriptor descriptor;
        descriptor.name = block.name;
        descriptor.name_aliases = block.get_all("alias");
        descriptor.url_template = block.get("url");
        descriptor.alt_urls = block.get_all("alt_url");
        descriptor.description = block.get("desc");
        descriptor.skills_host = block.get("host") == "skills";
        descriptor.expected_keys = block.get_all("expect");
        descriptor.normalization_targets = block.get_all("targets");

        if (descriptor.url_template.empty())
            return Result<ApiCatalog>::failure(ErrorKind::Parse,
                                               "[" + block.name + "] has no url");

        auto category = category_from_string(block.get("category", "ETC"));
        if (!category.ok())
            return Result<ApiCatalog>::failure(ErrorKind::Parse,
                                               "[" + block.name + "]: " + category.error().message);
        descriptor.category = category.value();

        auto pagination = pagination_from_string(block.get("pagination", "NONE"));
        if (!pagination.ok())
            return Result<ApiCatalog>::failure(
                ErrorKind::Parse, "[" + block.name + "]: " + pagination.error().message);
        descriptor.pagination = pagination.value();

        descriptor.param_names = block.get_all("param");
        if (descriptor.param_names.empty())
            descriptor.param_names = scheme_params(descriptor.pagination);

        for (const std::string& header : block.get_all("header")) {
            auto colon = header.find(':');
            if (colon == std::string::npos)
                return Result<ApiCatalog>::failure(
                    ErrorKind::Parse, "[" + block.name + "] malformed header \"" + header + "\"");
            std::string name = header.substr(0, colon);
            std::string value = header.substr(colon + 1);
            while (!value.empty() && value.front() == ' ') value.erase(value.begin());
            descriptor.extra_headers[name] = value;
        }

        if (descriptor.placeholder_count() != descriptor.param_names.size())
            return Result<ApiCatalog>::failure(
                ErrorKind::Parse,
                "[" + block.name + "] placeholder count does not match its parameter scheme");

        catalog.descriptors_.push_back(std::move(descriptor));
    }
    return catalog;
}

const ApiCatalog& ApiCatalog::builtin() {
    static const ApiCatalog instance = [] {
        std::string_view document(reinterpret_cast<const char*>(embedded::kAlexaApis),
                                  embedded::kAlexaApisSize);
        auto loaded = load(document);
        if (!loaded.ok())
            throw CaseError(ErrorKind::Configuration,
                            "embedded API catalog is invalid: " + loaded.error().message);
        return loaded.value();
    }();
    return instance;
}

const ApiDescriptor* ApiCatalog::find(std::string_view name) const {
    for (const ApiDescriptor& descriptor : descriptors_) {
        if (descriptor.name == name) return &descriptor;
        if (std::find(descriptor.name_aliases.begin(), descriptor.name_aliases.end(), name) !=
            descriptor.name_aliases.end())
            return &descriptor;
    }
    return nullptr;
}

const ApiDescriptor* ApiCatalog::match_url(std::string_view url) const {
    std::string_view path = url_path(url);
    const ApiDescriptor* path_match = nullptr;
    for (const ApiDescriptor& descriptor : descriptors_) {
        std::vector<std::string_view> candidates{descriptor.url_template};
        for (const std::string& alt : descriptor.alt_urls) candidates.push_back(alt);
        for (std::string_view candidate : candidates) {
            if (url_path(candidate) != path) continue;
            // Both todos variants share a path; the `type` query parameter
            // disambiguates.
            std::string want = query_param(candidate, "type");
            if (!want.empty() && query_param(url, "type") != want) continue;
            if (!path_match || !want.empty()) path_match = &descriptor;
        }
    }
    return path_match;
}

}  // namespace cift::catalog
