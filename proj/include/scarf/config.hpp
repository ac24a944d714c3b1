#pragma once

// Key-value text configuration:
//
//   # comment
//   gamma = 3%
//   snapshot = data/stress.csv
//
// Keys are [a-z0-9_]+, values run to end of line with surrounding blanks
// trimmed. A repeated key is an error.

#include <cctype>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scarf/csv.hpp"
#include "scarf/error.hpp"

namespace scarf {

/// Splits a comma-separated list, trimming blanks and dropping empty items.
[[nodiscard]] inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto end = s.find(',', pos);
        if (end == std::string_view::npos) end = s.size();
        auto item = csv::detail::trim(s.substr(pos, end - pos));
        if (!item.empty()) out.emplace_back(item);
        pos = end + 1;
    }
    return out;
}

class KeyValueConfig {
  public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(std::string_view text) {
        KeyValueConfig cfg;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos < text.size()) {
            auto end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            auto line = csv::detail::trim(text.substr(pos, end - pos));
            pos = end + 1;
            ++line_no;
            if (!line.empty() && line.back() == '\r') line = csv::detail::trim(line.substr(0, line.size() - 1));
            if (line.empty() || line.front() == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
            const auto key = std::string(csv::detail::trim(line.substr(0, eq)));
            const auto value = std::string(csv::detail::trim(line.substr(eq + 1)));
            if (key.empty()) throw ParseError(line_no, "empty key");
            for (char c : key) {
                const auto u = static_cast<unsigned char>(c);
                if (!(std::islower(u) || std::isdigit(u) || c == '_')) {
                    throw ParseError(line_no, "invalid key '" + key + "'");
                }
            }
            if (!cfg.values_.emplace(key, value).second) throw ParseError(line_no, "duplicate key '" + key + "'");
        }
        return cfg;
    }

    static KeyValueConfig load(const std::filesystem::path& path) {
        const auto text = csv::read_file(path);
        return csv::with_source(path, [&] { return parse(text); });
    }

    [[nodiscard]] std::optional<std::string> get(std::string_view key) const {
        const auto it = values_.find(std::string(key));
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    [[nodiscard]] const std::map<std::string, std::string>& values() const noexcept { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

} // namespace scarf
