#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cift/error.hpp"

namespace cift {

// One `[name]` block of a key/value document. Keys may repeat; order is
// preserved.
struct ConfigBlock {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    // First value for `key`, or `fallback`.
    std::string get(std::string_view key, std::string_view fallback = "") const;
    std::vector<std::string> get_all(std::string_view key) const;
    bool has(std::string_view key) const;
};

// Parses the human-readable block format used by the API catalog and the
// companion database mappings:
//
//   # comment
//   [block-name]
//   key = value
//   key = another value
//
// Whitespace around keys and values is trimmed. Lines outside a block or
// without '=' are rejected.
Result<std::vector<ConfigBlock>> parse_block_document(std::string_view text);

}  // namespace cift
