#include "formula_lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "ssqa/address.hpp"
#include "ssqa/error.hpp"

namespace ssqa::detail {

namespace {

constexpr std::array<std::string_view, 15> kErrorLiterals = {
    "#NULL!", "#DIV/0!", "#VALUE!", "#REF!",   "#NAME?",   "#NUM!",   "#N/A",  "#GETTING_DATA",
    "#SPILL!", "#CALC!", "#FIELD!", "#BLOCKED!", "#UNKNOWN!", "#CONNECT!", "#BUSY!"};

bool is_alpha(char c) noexcept { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) noexcept { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool is_word_char(char c) noexcept {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '.' || c == '$' || c == '\\' || u >= 0x80;
}

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](char c) { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); });
    return out;
}

// "$AB$12" → parts; whole input must match.
std::optional<RefPart> match_cell(std::string_view w) {
    RefPart p;
    std::size_t i = 0;
    if (i < w.size() && w[i] == '$') {
        p.column_absolute = true;
        ++i;
    }
    std::size_t lb = i;
    while (i < w.size() && is_alpha(w[i])) ++i;
    auto col = column_index(w.substr(lb, i - lb));
    if (!col) return std::nullopt;
    if (i < w.size() && w[i] == '$') {
        p.row_absolute = true;
        ++i;
    }
    std::size_t db = i;
    while (i < w.size() && is_digit(w[i])) ++i;
    if (i != w.size() || db == i || i - db > 7) return std::nullopt;
    std::int32_t row = 0;
    std::from_chars(w.data() + db, w.data() + i, row);
    if (row < 1 || row > kMaxRow) return std::nullopt;
    p.column = *col;
    p.row = row;
    return p;
}

// "$AB" → column part.
std::optional<RefPart> match_column(std::string_view w) {
    RefPart p;
    if (!w.empty() && w.front() == '$') {
        p.column_absolute = true;
        w.remove_prefix(1);
    }
    if (!std::all_of(w.begin(), w.end(), is_alpha)) return std::nullopt;
    auto col = column_index(w);
    if (!col) return std::nullopt;
    p.column = *col;
    return p;
}

// "$12" → row part.
std::optional<RefPart> match_row(std::string_view w) {
    RefPart p;
    if (!w.empty() && w.front() == '$') {
        p.row_absolute = true;
        w.remove_prefix(1);
    }
    if (w.empty() || w.size() > 7 || !std::all_of(w.begin(), w.end(), is_digit)) return std::nullopt;
    std::int32_t row = 0;
    std::from_chars(w.data(), w.data() + w.size(), row);
    if (row < 1 || row > kMaxRow) return std::nullopt;
    p.row = row;
    return p;
}

bool looks_r1c1(std::string_view w) {
    if (w.empty() || (w[0] != 'R' && w[0] != 'r' && w[0] != 'C' && w[0] != 'c')) return false;
    std::size_t i = 0;
    bool any = false;
    if (w[i] == 'R' || w[i] == 'r') {
        ++i;
        any = true;
        while (i < w.size() && is_digit(w[i])) ++i;
    }
    if (i < w.size() && (w[i] == 'C' || w[i] == 'c')) {
        ++i;
        any = true;
        while (i < w.size() && is_digit(w[i])) ++i;
    }
    return any && i == w.size();
}

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    std::vector<Token> run() {
        while (true) {
            skip_space();
            if (i_ >= s_.size()) {
                Token t;
                t.kind = TokenKind::End;
                t.begin = t.end = t.ref_begin = s_.size();
                out_.push_back(std::move(t));
                return std::move(out_);
            }
            next();
        }
    }

private:
    [[noreturn]] void fail(std::size_t at, const std::string& msg) const { throw FormulaError(at, msg); }

    void skip_space() {
        while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\n' || s_[i_] == '\r')) ++i_;
    }

    char peek(std::size_t k = 0) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }

    void push(TokenKind kind, std::size_t begin, std::string text = {}) {
        Token t;
        t.kind = kind;
        t.begin = t.ref_begin = begin;
        t.end = i_;
        t.text = std::move(text);
        out_.push_back(std::move(t));
    }

    bool previous_is_reference() const {
        if (out_.empty()) return false;
        auto k = out_.back().kind;
        return (k == TokenKind::Cell || k == TokenKind::ColumnRange || k == TokenKind::RowRange ||
                k == TokenKind::Name || k == TokenKind::RParen) &&
               out_.back().end == i_;
    }

    void next() {
        std::size_t b = i_;
        char c = s_[i_];
        switch (c) {
        case '"': return lex_string();
        case '\'': return lex_quoted_prefix();
        case '[': return lex_external(b, std::nullopt);
        case '#': return lex_error_literal();
        case '{': fail(b, "array literals are not supported");
        case '@': fail(b, "implicit intersection operator '@' is not supported");
        case ';': fail(b, "';' is not a supported argument separator");
        case '(': ++i_; return push(TokenKind::LParen, b, "(");
        case ')': ++i_; return push(TokenKind::RParen, b, ")");
        case ',': ++i_; return push(TokenKind::Comma, b, ",");
        case ':': ++i_; return push(TokenKind::Colon, b, ":");
        case '+': case '-': case '*': case '/': case '^': case '&': case '%': case '=':
            ++i_;
            return push(TokenKind::Op, b, std::string(1, c));
        case '<':
            ++i_;
            if (peek() == '=' || peek() == '>') {
                ++i_;
                return push(TokenKind::Op, b, std::string(s_.substr(b, 2)));
            }
            return push(TokenKind::Op, b, "<");
        case '>':
            ++i_;
            if (peek() == '=') {
                ++i_;
                return push(TokenKind::Op, b, ">=");
            }
            return push(TokenKind::Op, b, ">");
        default: break;
        }
        if (is_digit(c) || (c == '.' && is_digit(peek(1)))) return lex_number_or_rows();
        if (c == '$' && is_digit(peek(1))) return lex_number_or_rows();
        auto u = static_cast<unsigned char>(c);
        if (is_alpha(c) || c == '_' || c == '\\' || c == '$' || u >= 0x80) return lex_word();
        fail(b, std::string("unexpected character '") + c + "'");
    }

    void lex_string() {
        std::size_t b = i_++;
        std::string value;
        while (true) {
            if (i_ >= s_.size()) fail(b, "unterminated string literal");
            if (s_[i_] == '"') {
                if (peek(1) == '"') {
                    value += '"';
                    i_ += 2;
                    continue;
                }
                ++i_;
                break;
            }
            value += s_[i_++];
        }
        push(TokenKind::String, b, std::move(value));
    }

    void lex_error_literal() {
        std::size_t b = i_;
        for (auto lit : kErrorLiterals) {
            if (s_.size() - i_ >= lit.size() && upper(s_.substr(i_, lit.size())) == lit) {
                i_ += lit.size();
                return push(TokenKind::Error, b, std::string(lit));
            }
        }
        if (previous_is_reference()) fail(b, "spill reference operator '#' is not supported");
        fail(b, "unknown error literal");
    }

    std::size_t word_end(std::size_t from) const {
        std::size_t j = from;
        while (j < s_.size() && is_word_char(s_[j])) ++j;
        return j;
    }

    void lex_number_or_rows() {
        std::size_t b = i_;
        // Row range "3:5" / "$3:$5".
        std::size_t j = word_end(b);
        if (j < s_.size() && s_[j] == ':') {
            auto first = match_row(s_.substr(b, j - b));
            std::size_t k = word_end(j + 1);
            auto second = first ? match_row(s_.substr(j + 1, k - j - 1)) : std::nullopt;
            if (first && second) {
                i_ = k;
                return push_rows(b, b, std::nullopt, *first, *second);
            }
        }
        if (s_[i_] == '$') fail(b, "malformed row reference");
        std::size_t e = i_;
        while (e < s_.size() && is_digit(s_[e])) ++e;
        if (e < s_.size() && s_[e] == '.') {
            ++e;
            while (e < s_.size() && is_digit(s_[e])) ++e;
        }
        if (e < s_.size() && (s_[e] == 'e' || s_[e] == 'E')) {
            std::size_t x = e + 1;
            if (x < s_.size() && (s_[x] == '+' || s_[x] == '-')) ++x;
            if (x >= s_.size() || !is_digit(s_[x])) fail(b, "malformed number exponent");
            while (x < s_.size() && is_digit(s_[x])) ++x;
            e = x;
        }
        if (e < s_.size() && (is_word_char(s_[e]))) fail(b, "malformed number");
        double v = 0;
        auto r = std::from_chars(s_.data() + b, s_.data() + e, v);
        if (r.ec != std::errc{} || r.ptr != s_.data() + e) fail(b, "malformed number");
        i_ = e;
        Token t;
        t.kind = TokenKind::Number;
        t.begin = t.ref_begin = b;
        t.end = e;
        t.number = v;
        t.text = std::string(s_.substr(b, e - b));
        out_.push_back(std::move(t));
    }

    void push_ref(TokenKind kind, std::size_t begin, std::size_t ref_begin, std::optional<std::string> sheet,
                  RefPart first, RefPart second = {}) {
        Token t;
        t.kind = kind;
        t.begin = begin;
        t.ref_begin = ref_begin;
        t.end = i_;
        t.sheet = std::move(sheet);
        t.first = first;
        t.second = second;
        out_.push_back(std::move(t));
    }

    void push_rows(std::size_t begin, std::size_t ref_begin, std::optional<std::string> sheet, RefPart a,
                   RefPart b) {
        push_ref(TokenKind::RowRange, begin, ref_begin, std::move(sheet), a, b);
    }

    // Column range "A:C" starting at i_; returns false without consuming if absent.
    bool try_column_range(std::size_t begin, std::size_t ref_begin, const std::optional<std::string>& sheet) {
        std::size_t j = word_end(i_);
        if (j >= s_.size() || s_[j] != ':') return false;
        auto first = match_column(s_.substr(i_, j - i_));
        if (!first) return false;
        std::size_t k = word_end(j + 1);
        auto second = match_column(s_.substr(j + 1, k - j - 1));
        if (!second) return false;
        i_ = k;
        push_ref(TokenKind::ColumnRange, begin, ref_begin, sheet, *first, *second);
        return true;
    }

    // Reference following "Sheet!" whose prefix started at `begin`.
    void lex_after_prefix(std::size_t begin, std::string sheet) {
        std::size_t rb = i_;
        if (s_.size() - i_ >= 5 && upper(s_.substr(i_, 5)) == "#REF!") {
            i_ += 5;
            Token t;
            t.kind = TokenKind::Error;
            t.begin = begin;
            t.ref_begin = rb;
            t.end = i_;
            t.text = "#REF!";
            out_.push_back(std::move(t));
            return;
        }
        if (try_column_range(begin, rb, sheet)) return;
        std::size_t j = word_end(i_);
        if (j < s_.size() && s_[j] == ':' && (is_digit(peek()) || peek() == '$')) {
            auto first = match_row(s_.substr(i_, j - i_));
            std::size_t k = word_end(j + 1);
            auto second = first ? match_row(s_.substr(j + 1, k - j - 1)) : std::nullopt;
            if (first && second) {
                i_ = k;
                return push_rows(begin, rb, std::move(sheet), *first, *second);
            }
        }
        std::string_view w = s_.substr(i_, j - i_);
        if (auto cell = match_cell(w)) {
            i_ = j;
            return push_ref(TokenKind::Cell, begin, rb, std::move(sheet), *cell);
        }
        if (looks_r1c1(w)) fail(rb, "R1C1 references are not supported");
        if (!w.empty() && (is_alpha(w.front()) || w.front() == '_') && w.find('$') == std::string_view::npos) {
            // Sheet-scoped defined name, e.g. Inputs!Rate.
            i_ = j;
            Token t;
            t.kind = TokenKind::Name;
            t.begin = begin;
            t.ref_begin = rb;
            t.end = i_;
            t.text = std::string(w);
            t.sheet = std::move(sheet);
            out_.push_back(std::move(t));
            return;
        }
        fail(rb, "expected a cell reference after sheet name");
    }

    void lex_quoted_prefix() {
        std::size_t b = i_++;
        std::string name;
        while (true) {
            if (i_ >= s_.size()) fail(b, "unterminated quoted sheet name");
            if (s_[i_] == '\'') {
                if (peek(1) == '\'') {
                    name += '\'';
                    i_ += 2;
                    continue;
                }
                ++i_;
                break;
            }
            name += s_[i_++];
        }
        if (peek() != '!') fail(i_, "expected '!' after quoted sheet name");
        ++i_;
        auto lb = name.find('[');
        auto rb = name.find(']');
        if (lb != std::string::npos && rb != std::string::npos && lb < rb)
            return lex_external(b, name.substr(lb + 1, rb - lb - 1));
        if (name.empty()) fail(b, "empty sheet name");
        lex_after_prefix(b, std::move(name));
    }

    // External workbook reference. For the bare "[1]Sheet!A1" form the
    // locator is read here; quoted forms pass it in.
    void lex_external(std::size_t b, std::optional<std::string> locator) {
        if (!locator) {
            std::size_t close = s_.find(']', i_);
            if (close == std::string_view::npos) fail(b, "unterminated '[' in reference");
            locator = std::string(s_.substr(i_ + 1, close - i_ - 1));
            i_ = close + 1;
        }
        while (i_ < s_.size() && (is_word_char(s_[i_]) || s_[i_] == '!' || s_[i_] == ':' || s_[i_] == '#' ||
                                  s_[i_] == '/' || s_[i_] == '?'))
            ++i_;
        Token t;
        t.kind = TokenKind::External;
        t.begin = t.ref_begin = b;
        t.end = i_;
        t.text = std::move(*locator);
        out_.push_back(std::move(t));
    }

    void lex_word() {
        std::size_t b = i_;
        std::size_t j = word_end(b);
        std::string_view w = s_.substr(b, j - b);
        char after = j < s_.size() ? s_[j] : '\0';
        if (after == '!') {
            if (w.find('$') != std::string_view::npos) fail(b, "malformed sheet name");
            i_ = j + 1;
            return lex_after_prefix(b, std::string(w));
        }
        if (after == '(') {
            if (w.find('$') != std::string_view::npos) fail(b, "malformed function name");
            i_ = j;
            return push(TokenKind::Function, b, upper(w));
        }
        if (after == '[') {
            if (looks_r1c1(w)) fail(b, "R1C1 references are not supported");
            fail(j, "structured table references are not supported");
        }
        if (try_column_range(b, b, std::nullopt)) return;
        if (auto cell = match_cell(w)) {
            i_ = j;
            return push_ref(TokenKind::Cell, b, b, std::nullopt, *cell);
        }
        std::string up = upper(w);
        if (up == "TRUE" || up == "FALSE") {
            i_ = j;
            Token t;
            t.kind = TokenKind::Bool;
            t.begin = t.ref_begin = b;
            t.end = j;
            t.boolean = up == "TRUE";
            t.text = up;
            out_.push_back(std::move(t));
            return;
        }
        if (looks_r1c1(w)) fail(b, "R1C1 references are not supported");
        if (w.find('$') != std::string_view::npos) fail(b, "malformed reference '" + std::string(w) + "'");
        i_ = j;
        push(TokenKind::Name, b, std::string(w));
    }

    std::string_view s_;
    std::size_t i_ = 0;
    std::vector<Token> out_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

bool is_error_literal(std::string_view text) noexcept {
    return std::find(kErrorLiterals.begin(), kErrorLiterals.end(), text) != kErrorLiterals.end();
}

}  // namespace ssqa::detail
