#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ssqa::detail {

enum class TokenKind : std::uint8_t {
    Number,
    String,
    Bool,
    Error,
    Cell,
    ColumnRange,
    RowRange,
    Name,
    Function,
    External,
    Op,
    LParen,
    RParen,
    Comma,
    Colon,
    End,
};

struct RefPart {
    std::int32_t column = 0;
    std::int32_t row = 0;
    bool column_absolute = false;
    bool row_absolute = false;
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::size_t begin = 0;  // offset of the first character, sheet prefix included
    std::size_t end = 0;
    std::size_t ref_begin = 0;  // offset of the reference part after any "Sheet!"
    std::string text;           // operator, name, string value, error code, external locator
    double number = 0;
    bool boolean = false;
    std::optional<std::string> sheet;
    RefPart first;   // Cell; first column/row of a ColumnRange/RowRange
    RefPart second;  // last column/row of a ColumnRange/RowRange
};

/// Splits formula text into tokens. Throws FormulaError for unsupported or
/// malformed input (R1C1, array literals, structured references, spill).
std::vector<Token> tokenize(std::string_view text);

/// Error literals recognized in formulas and stored values.
bool is_error_literal(std::string_view text) noexcept;

}  // namespace ssqa::detail
