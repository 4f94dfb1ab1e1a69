#include "ssqa/address.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "ssqa/error.hpp"

namespace ssqa {

namespace {

char fold(char c) noexcept {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

bool is_plain_sheet_char(char c) noexcept {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '.' || u >= 0x80;
}

struct A1Parts {
    std::int32_t column = 0;
    std::int32_t row = 0;
};

// Parses "$A$1" style text; the whole input must be consumed.
std::optional<A1Parts> parse_cell_part(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && s[i] == '$') ++i;
    std::size_t letters_begin = i;
    while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
    auto column = column_index(s.substr(letters_begin, i - letters_begin));
    if (!column) return std::nullopt;
    if (i < s.size() && s[i] == '$') ++i;
    std::size_t digits_begin = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i != s.size() || digits_begin == i || i - digits_begin > 7) return std::nullopt;
    std::int32_t row = 0;
    std::from_chars(s.data() + digits_begin, s.data() + i, row);
    if (row < 1 || row > kMaxRow) return std::nullopt;
    return A1Parts{*column, row};
}

}  // namespace

std::weak_ordering compare_names(std::string_view a, std::string_view b) noexcept {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        char x = fold(a[i]);
        char y = fold(b[i]);
        if (x != y) return x < y ? std::weak_ordering::less : std::weak_ordering::greater;
    }
    return a.size() <=> b.size();
}

bool names_equal(std::string_view a, std::string_view b) noexcept {
    return a.size() == b.size() && compare_names(a, b) == 0;
}

std::string fold_name(std::string_view name) {
    std::string out(name);
    std::transform(out.begin(), out.end(), out.begin(), fold);
    return out;
}

bool Region::contains(const CellAddress& addr) const noexcept {
    if (!names_equal(sheet, addr.sheet)) return false;
    if (!rect) return true;
    return addr.column >= rect->first_column && addr.column <= rect->last_column &&
           addr.row >= rect->first_row && addr.row <= rect->last_row;
}

bool region_contains(const Region& region, const CellAddress& addr) noexcept {
    return region.contains(addr);
}

std::string column_letters(std::int32_t column) {
    std::string out;
    while (column > 0) {
        int rem = (column - 1) % 26;
        out.insert(out.begin(), static_cast<char>('A' + rem));
        column = (column - 1) / 26;
    }
    return out;
}

std::optional<std::int32_t> column_index(std::string_view letters) noexcept {
    if (letters.empty() || letters.size() > 3) return std::nullopt;
    std::int32_t value = 0;
    for (char c : letters) {
        if (!std::isalpha(static_cast<unsigned char>(c))) return std::nullopt;
        value = value * 26 + (std::toupper(static_cast<unsigned char>(c)) - 'A' + 1);
    }
    if (value > kMaxColumn) return std::nullopt;
    return value;
}

std::string quote_sheet_name(std::string_view sheet) {
    bool plain = !sheet.empty() && !std::isdigit(static_cast<unsigned char>(sheet.front())) &&
                 std::all_of(sheet.begin(), sheet.end(), is_plain_sheet_char);
    // A name that reads as a cell reference ("A1") or R1C1 token must be quoted.
    if (plain) {
        std::size_t i = 0;
        while (i < sheet.size() && std::isalpha(static_cast<unsigned char>(sheet[i]))) ++i;
        auto digits = sheet.substr(i);
        bool all_digits = !digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c)) != 0;
        });
        if (i > 0 && all_digits) {
            auto col = column_index(sheet.substr(0, i));
            bool row_ok = digits.size() <= 7 && std::stol(std::string(digits)) <= kMaxRow;
            if (col && row_ok) plain = false;
        }
        // R1C1-style tokens: R, C, R2, C3, R2C3.
        std::size_t j = 0;
        auto skip_digits = [&] {
            while (j < sheet.size() && std::isdigit(static_cast<unsigned char>(sheet[j]))) ++j;
        };
        if (j < sheet.size() && (sheet[j] == 'R' || sheet[j] == 'r')) {
            ++j;
            skip_digits();
        }
        if (j < sheet.size() && (sheet[j] == 'C' || sheet[j] == 'c')) {
            ++j;
            skip_digits();
        }
        if (j > 0 && j == sheet.size()) plain = false;
        if (names_equal(sheet, "TRUE") || names_equal(sheet, "FALSE")) plain = false;
    }
    if (plain) return std::string(sheet);
    std::string out = "'";
    for (char c : sheet) {
        if (c == '\'') out += '\'';
        out += c;
    }
    out += '\'';
    return out;
}

std::string to_a1(std::int32_t column, std::int32_t row) {
    return column_letters(column) + std::to_string(row);
}

std::string to_string(const CellAddress& addr) {
    return quote_sheet_name(addr.sheet) + "!" + to_a1(addr.column, addr.row);
}

std::string to_string(const Region& region) {
    std::string out = quote_sheet_name(region.sheet) + "!";
    if (!region.rect) return out + "*";
    const Rect& r = *region.rect;
    out += to_a1(r.first_column, r.first_row);
    if (r.first_column != r.last_column || r.first_row != r.last_row)
        out += ":" + to_a1(r.last_column, r.last_row);
    return out;
}

SheetPrefix split_sheet_prefix(std::string_view text) {
    if (!text.empty() && text.front() == '\'') {
        std::string name;
        std::size_t i = 1;
        while (true) {
            if (i >= text.size()) throw AddressError("unterminated quote in '" + std::string(text) + "'");
            if (text[i] == '\'') {
                if (i + 1 < text.size() && text[i + 1] == '\'') {
                    name += '\'';
                    i += 2;
                    continue;
                }
                break;
            }
            name += text[i++];
        }
        if (i + 1 >= text.size() || text[i + 1] != '!')
            throw AddressError("expected '!' after quoted sheet name in '" + std::string(text) + "'");
        if (name.empty()) throw AddressError("empty sheet name in '" + std::string(text) + "'");
        return {std::move(name), text.substr(i + 2)};
    }
    auto bang = text.rfind('!');
    if (bang == std::string_view::npos) return {std::nullopt, text};
    if (bang == 0) throw AddressError("empty sheet name in '" + std::string(text) + "'");
    return {std::string(text.substr(0, bang)), text.substr(bang + 1)};
}

CellAddress parse_a1(std::string_view text, std::string_view default_sheet) {
    if (text.empty()) throw AddressError("empty cell address");
    auto prefix = split_sheet_prefix(text);
    auto parts = parse_cell_part(prefix.rest);
    if (!parts) throw AddressError("malformed cell address '" + std::string(text) + "'");
    std::string sheet = prefix.sheet ? *prefix.sheet : std::string(default_sheet);
    if (sheet.empty()) throw AddressError("no sheet for cell address '" + std::string(text) + "'");
    return CellAddress{std::move(sheet), parts->column, parts->row};
}

Region parse_region(std::string_view text) {
    auto prefix = split_sheet_prefix(text);
    if (!prefix.sheet) throw AddressError("region '" + std::string(text) + "' needs a sheet name");
    std::string_view rest = prefix.rest;
    if (rest == "*") return Region{*prefix.sheet, std::nullopt};
    auto colon = rest.find(':');
    auto first = parse_cell_part(rest.substr(0, colon));
    auto last = colon == std::string_view::npos ? first : parse_cell_part(rest.substr(colon + 1));
    if (!first || !last) throw AddressError("malformed region '" + std::string(text) + "'");
    Rect r{std::min(first->column, last->column), std::min(first->row, last->row),
           std::max(first->column, last->column), std::max(first->row, last->row)};
    return Region{*prefix.sheet, r};
}

}  // namespace ssqa

std::size_t std::hash<ssqa::CellAddress>::operator()(const ssqa::CellAddress& a) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (char c : a.sheet) {
        h ^= static_cast<unsigned char>(std::tolower(static_cast<unsigned char>(c)));
        h *= 1099511628211ull;
    }
    h ^= static_cast<std::size_t>(a.column) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::size_t>(a.row) + (h << 6) + (h >> 2);
    return h;
}
