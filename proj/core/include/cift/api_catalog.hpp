#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cift/error.hpp"

namespace cift::catalog {

// The seven data categories the cloud endpoints fall into.
enum class Category {
    Account,
    AlexaDevice,
    CustomerSetting,
    Skill,
    CompatibleDevice,
    UserActivity,
    Etc,
};

enum class Pagination {
    None,
    BeforeCreationTime,   // cards: strictly-decreasing epoch-ms cursor
    StartTimeSizeOffset,  // activities: startTime cursor + size, offset pinned to -1
    SizeOnly,             // todos: single fetch, size parameter
    DeviceQueue,          // media: per-device fetch (serial, type, size)
};

const char* to_string(Category category);
const char* to_string(Pagination pagination);
Result<Category> category_from_string(std::string_view text);
Result<Pagination> pagination_from_string(std::string_view text);

// One entry of the endpoint catalog: URL template, parameter scheme, and how
// responses are normalized.
struct ApiDescriptor {
    std::string name;
    std::vector<std::string> name_aliases;
    std::string url_template;            // absolute URL with `{}` placeholders
    std::vector<std::string> alt_urls;   // additional URLs fetched and normalized identically
    Category category = Category::Etc;
    Pagination pagination = Pagination::None;
    std::vector<std::string> param_names;  // one per `{}` placeholder, in order
    std::map<std::string, std::string> extra_headers;
    std::vector<std::string> expected_keys;        // dotted JSON paths ([] = any element)
    std::vector<std::string> normalization_targets;
    std::string description;
    bool skills_host = false;  // pinned to the alternate skills host

    std::size_t placeholder_count() const;
};

// Host overrides applied at resolve time. Empty strings keep the catalog's
// own hosts.
struct HostConfig {
    std::string base_url;
    std::string skills_base_url;
};

// Fills the descriptor's `{}` placeholders from `params` (keyed by
// param_names) and applies the host override. Values are URL-encoded.
Result<std::string> resolve(const ApiDescriptor& descriptor, const HostConfig& hosts,
                            const std::map<std::string, std::string>& params);
Result<std::string> resolve(const ApiDescriptor& descriptor, std::string_view base_url,
                            const std::map<std::string, std::string>& params);

// Replaces scheme://host of `url` with `base`; keeps path and query.
std::string apply_host_override(std::string_view url, std::string_view base);

std::string url_encode(std::string_view value);

class ApiCatalog {
public:
    static Result<ApiCatalog> load(std::string_view document);

    // The catalog shipped inside the binary. Endpoints live in a data file so
    // they can be updated without a rebuild; this is its compiled-in copy.
    static const ApiCatalog& builtin();

    const std::vector<ApiDescriptor>& descriptors() const { return descriptors_; }

    // Lookup by name or accepted alias; nullptr when absent.
    const ApiDescriptor* find(std::string_view name) const;

    // Maps a concrete URL (e.g. the key of a recovered cache entry) back to
    // its descriptor by path, disambiguating todos by the `type` query
    // parameter. nullptr when no endpoint matches.
    const ApiDescriptor* match_url(std::string_view url) const;

private:
    std::vector<ApiDescriptor> descriptors_;
};

}  // namespace cift::catalog
