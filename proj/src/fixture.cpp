#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "formula_lexer.hpp"
#include "ssqa/error.hpp"
#include "ssqa/ingest.hpp"

namespace ssqa {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

struct PendingName {
    std::string name;
    Region region;
    std::size_t line;
};

class FixtureReader {
public:
    explicit FixtureReader(std::string source) : source_(std::move(source)) {}

    IngestReport read(std::string_view text) {
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto nl = text.find('\n', pos);
            auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            ++line_no;
            line(trim(raw), line_no);
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
        for (const auto& n : names_) {
            if (!builder_.has_sheet(n.region.sheet))
                fail(n.line, "defined name '" + n.name + "' refers to unknown sheet '" + n.region.sheet + "'");
            try {
                builder_.define_name(n.name, n.region);
            } catch (const WorkbookError& e) {
                fail(n.line, e.what());
            }
        }
        return IngestReport{std::move(builder_).build(), {}};
    }

private:
    [[noreturn]] void fail(std::size_t line, const std::string& msg) const { throw IngestError(source_, line, msg); }

    void line(std::string_view s, std::size_t n) {
        if (s.empty() || s.front() == '#') return;
        if (s.front() == '[') return directive(s, n);
        auto eq = s.find('=');
        if (eq == std::string_view::npos) fail(n, "expected '<address> = <value>'");
        if (!sheet_) fail(n, "cell defined before any [sheet: ...] header");
        auto addr_text = trim(s.substr(0, eq));
        auto payload = trim(s.substr(eq + 1));
        if (addr_text.empty()) fail(n, "missing cell address");
        if (addr_text.find('!') != std::string_view::npos) fail(n, "cell addresses in a sheet block are unqualified");
        CellAddress addr;
        try {
            addr = parse_a1(addr_text, *sheet_);
        } catch (const AddressError& e) {
            fail(n, e.what());
        }
        try {
            cell(addr, payload, n);
        } catch (const WorkbookError& e) {
            fail(n, e.what());
        }
    }

    void cell(const CellAddress& addr, std::string_view payload, std::size_t n) {
        if (payload.empty()) fail(n, "missing value");
        if (payload.front() == '=') {
            auto body = trim(payload.substr(1));
            if (body.empty()) fail(n, "empty formula");
            builder_.set_formula(addr, std::string(body));
            return;
        }
        if (payload.front() == '"') {
            if (payload.size() < 2 || payload.back() != '"') fail(n, "unterminated text value");
            std::string value;
            auto inner = payload.substr(1, payload.size() - 2);
            for (std::size_t i = 0; i < inner.size(); ++i) {
                if (inner[i] == '"') {
                    if (i + 1 < inner.size() && inner[i + 1] == '"') {
                        value += '"';
                        ++i;
                        continue;
                    }
                    fail(n, "unescaped '\"' inside text value");
                }
                value += inner[i];
            }
            builder_.set_cell(addr, Text{std::move(value)});
            return;
        }
        if (names_equal(payload, "true") || names_equal(payload, "false")) {
            builder_.set_cell(addr, names_equal(payload, "true"));
            return;
        }
        if (detail::is_error_literal(payload)) {
            builder_.set_cell(addr, ErrorLiteral{std::string(payload)});
            return;
        }
        double v = 0;
        auto r = std::from_chars(payload.data(), payload.data() + payload.size(), v);
        if (r.ec != std::errc{} || r.ptr != payload.data() + payload.size())
            fail(n, "invalid value '" + std::string(payload) + "'");
        builder_.set_cell(addr, v);
    }

    void directive(std::string_view s, std::size_t n) {
        if (s.back() != ']') fail(n, "unterminated directive");
        auto body = trim(s.substr(1, s.size() - 2));
        if (names_equal(body, "pivot")) {
            builder_.set_pivot_tables(true);
            return;
        }
        if (names_equal(body, "autofilter")) {
            builder_.set_autofilters(true);
            return;
        }
        auto colon = body.find(':');
        if (colon == std::string_view::npos) fail(n, "unknown directive '" + std::string(body) + "'");
        auto key = trim(body.substr(0, colon));
        auto value = trim(body.substr(colon + 1));
        if (names_equal(key, "sheet")) {
            if (value.empty()) fail(n, "empty sheet name");
            try {
                builder_.add_sheet(std::string(value));
            } catch (const WorkbookError& e) {
                fail(n, e.what());
            }
            sheet_ = std::string(value);
            return;
        }
        if (names_equal(key, "name")) {
            auto eq = value.find('=');
            if (eq == std::string_view::npos) fail(n, "expected [name: <name> = <Sheet!region>]");
            auto name = trim(value.substr(0, eq));
            if (name.empty()) fail(n, "empty defined name");
            try {
                names_.push_back({std::string(name), parse_region(trim(value.substr(eq + 1))), n});
            } catch (const AddressError& e) {
                fail(n, e.what());
            }
            return;
        }
        fail(n, "unknown directive '" + std::string(key) + "'");
    }

    std::string source_;
    WorkbookBuilder builder_;
    std::optional<std::string> sheet_;
    std::vector<PendingName> names_;
};

}  // namespace

IngestReport parse_fixture(std::string_view text, const std::string& source_name) {
    return FixtureReader(source_name).read(text);
}

IngestReport load_fixture(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError(path.string(), 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_fixture(buf.str(), path.string());
}

IngestReport load_workbook(const std::filesystem::path& path) {
    auto ext = fold_name(path.extension().string());
    if (ext == ".xlsx" || ext == ".xlsm") return load_xlsx(path);
    return load_fixture(path);
}

}  // namespace ssqa
