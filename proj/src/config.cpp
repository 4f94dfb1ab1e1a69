#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ssqa/error.hpp"
#include "ssqa/rules.hpp"

namespace ssqa {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

long long parse_integer(std::string_view value, std::size_t line, long long min) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError(line, "expected an integer, got '" + std::string(value) + "'");
    if (out < min) throw ConfigError(line, "value must be at least " + std::to_string(min));
    return out;
}

double parse_fraction(std::string_view value, std::size_t line) {
    double out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError(line, "expected a number, got '" + std::string(value) + "'");
    if (!(out >= 0.0 && out <= 1.0)) throw ConfigError(line, "value must lie in [0, 1]");
    return out;
}

}  // namespace

std::set<RuleId> parse_rule_list(std::string_view text) {
    std::set<RuleId> out;
    for (const auto& item : split_list(text)) {
        auto id = parse_rule_id(item);
        if (!id) throw ConfigError(0, "unknown rule '" + item + "'");
        out.insert(*id);
    }
    if (out.empty()) throw ConfigError(0, "empty rule list");
    return out;
}

AnalyzerConfig parse_config(std::string_view text) {
    AnalyzerConfig cfg;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));

        if (key == "penalty.error") {
            cfg.error_penalty = static_cast<int>(parse_integer(value, line_no, 1));
        } else if (key == "penalty.warning") {
            cfg.warning_penalty = static_cast<int>(parse_integer(value, line_no, 1));
        } else if (key == "threshold.cohesion") {
            cfg.cohesion_threshold = parse_fraction(value, line_no);
        } else if (key == "threshold.density") {
            cfg.density_threshold = parse_fraction(value, line_no);
        } else if (key == "threshold.interleaving") {
            cfg.interleaving_min = static_cast<std::size_t>(parse_integer(value, line_no, 1));
        } else if (key == "range-cap") {
            cfg.range_cap = static_cast<std::uint64_t>(parse_integer(value, line_no, 1));
        } else if (key == "trivial-functions") {
            cfg.trivial_functions.clear();
            for (auto& f : split_list(value)) {
                for (auto& c : f) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
                cfg.trivial_functions.insert(std::move(f));
            }
        } else if (key == "keywords.inputs") {
            cfg.keywords.inputs = split_list(value);
        } else if (key == "keywords.computations") {
            cfg.keywords.computations = split_list(value);
        } else if (key == "keywords.reports") {
            cfg.keywords.reports = split_list(value);
        } else if (key == "rules") {
            try {
                cfg.enabled = parse_rule_list(value);
            } catch (const ConfigError& e) {
                throw ConfigError(line_no, e.detail());
            }
        } else {
            throw ConfigError(line_no, "unknown key '" + std::string(key) + "'");
        }
    }
    return cfg;
}

AnalyzerConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(0, "cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string(), e.line(), e.detail());
    }
}

}  // namespace ssqa
