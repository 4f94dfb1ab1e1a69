#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ssqa {

inline constexpr std::int32_t kMaxColumn = 16384;
inline constexpr std::int32_t kMaxRow = 1048576;

/// ASCII case-insensitive ordering used for sheet and defined names.
std::weak_ordering compare_names(std::string_view a, std::string_view b) noexcept;
bool names_equal(std::string_view a, std::string_view b) noexcept;
std::string fold_name(std::string_view name);

/// A single cell. Sheet comparison ignores case; the stored spelling is kept
/// for display.
struct CellAddress {
    std::string sheet;
    std::int32_t column = 1;
    std::int32_t row = 1;

    friend bool operator==(const CellAddress& a, const CellAddress& b) noexcept {
        return a.row == b.row && a.column == b.column && names_equal(a.sheet, b.sheet);
    }
    /// Sheet, then row, then column: reading order within a sheet.
    friend std::weak_ordering operator<=>(const CellAddress& a, const CellAddress& b) noexcept {
        if (auto c = compare_names(a.sheet, b.sheet); c != 0) return c;
        if (auto c = a.row <=> b.row; c != 0) return c;
        return a.column <=> b.column;
    }
};

/// Rectangle bounds, inclusive on both ends.
struct Rect {
    std::int32_t first_column = 1;
    std::int32_t first_row = 1;
    std::int32_t last_column = 1;
    std::int32_t last_row = 1;

    friend bool operator==(const Rect&, const Rect&) = default;
    friend auto operator<=>(const Rect&, const Rect&) = default;

    std::uint64_t cell_count() const noexcept {
        return static_cast<std::uint64_t>(last_column - first_column + 1) *
               static_cast<std::uint64_t>(last_row - first_row + 1);
    }
};

/// A rectangle on one sheet, or the whole sheet when `rect` is empty.
struct Region {
    std::string sheet;
    std::optional<Rect> rect;

    bool whole_sheet() const noexcept { return !rect.has_value(); }
    bool contains(const CellAddress& addr) const noexcept;

    friend bool operator==(const Region& a, const Region& b) noexcept {
        return names_equal(a.sheet, b.sheet) && a.rect == b.rect;
    }
};

bool region_contains(const Region& region, const CellAddress& addr) noexcept;

/// Column letters for a 1-based column index (1 -> "A", 27 -> "AA").
std::string column_letters(std::int32_t column);
/// Inverse of column_letters; nullopt for empty, non-letter or out-of-grid input.
std::optional<std::int32_t> column_index(std::string_view letters) noexcept;

/// Sheet name as it must appear before '!' in a reference, quoted when needed.
std::string quote_sheet_name(std::string_view sheet);

/// "B3" style text without the sheet.
std::string to_a1(std::int32_t column, std::int32_t row);
/// Sheet-qualified A1 text, e.g. "Inputs!B3" or "'My Sheet'!A1".
std::string to_string(const CellAddress& addr);
/// "Inputs!A1:C10", "Inputs!B2" for a one-cell rectangle, or "Inputs!*".
std::string to_string(const Region& region);

/// Parses "B3", "$AA$10", "Sheet2!B3" or "'My Sheet'!B3". Unqualified text
/// resolves to `default_sheet`. Throws AddressError naming the text.
CellAddress parse_a1(std::string_view text, std::string_view default_sheet);

/// Parses "Sheet!A1:C10", "Sheet!B2" or "Sheet!*". The sheet part is required.
Region parse_region(std::string_view text);

/// Splits an optional "Sheet!" or "'Quoted ''Sheet'''!" prefix. Returns the
/// unquoted sheet name (nullopt if unqualified) and the remainder.
struct SheetPrefix {
    std::optional<std::string> sheet;
    std::string_view rest;
};
SheetPrefix split_sheet_prefix(std::string_view text);

}  // namespace ssqa

template <>
struct std::hash<ssqa::CellAddress> {
    std::size_t operator()(const ssqa::CellAddress& a) const noexcept;
};
