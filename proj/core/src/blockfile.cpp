#include "cift/blockfile.hpp"

namespace cift {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

std::string ConfigBlock::get(std::string_view key, std::string_view fallback) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return v;
    }
    return std::string(fallback);
}

std::vector<std::string> ConfigBlock::get_all(std::string_view key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries) {
        if (k == key) out.push_back(v);
    }
    return out;
}

bool ConfigBlock::has(std::string_view key) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return true;
    }
    return false;
}

Result<std::vector<ConfigBlock>> parse_block_document(std::string_view text) {
    using R = Result<std::vector<ConfigBlock>>;

    std::vector<ConfigBlock> blocks;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                               : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        line = trim(line);
        if (line.empty() || line.front() == '#') continue;

        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                return R::failure(ErrorKind::Parse,
                                  "line " + std::to_string(line_no) + ": malformed block header");
            }
            blocks.push_back(ConfigBlock{std::string(trim(line.substr(1, line.size() - 2))), {}});
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            return R::failure(ErrorKind::Parse,
                              "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        if (blocks.empty()) {
            return R::failure(ErrorKind::Parse,
                              "line " + std::to_string(line_no) + ": entry outside any [block]");
        }
        blocks.back().entries.emplace_back(std::string(trim(line.substr(0, eq))),
                                           std::string(trim(line.substr(eq + 1))));
    }
    return blocks;
}

}  // namespace cift
