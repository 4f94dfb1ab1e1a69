#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ssqa/address.hpp"

namespace ssqa {

struct Blank {
    friend bool operator==(Blank, Blank) noexcept { return true; }
};
struct Text {
    std::string value;
    friend bool operator==(const Text&, const Text&) = default;
};
/// Stored error value such as "#REF!".
struct ErrorLiteral {
    std::string code;
    friend bool operator==(const ErrorLiteral&, const ErrorLiteral&) = default;
};

/// Number (dates arrive as their serial numbers), Text, Boolean, Blank or
/// ErrorLiteral.
using CellValue = std::variant<Blank, double, Text, bool, ErrorLiteral>;

struct Constant {
    CellValue value;
    friend bool operator==(const Constant&, const Constant&) = default;
};

/// Formula body without the leading '='; never empty.
struct Formula {
    std::string text;
    friend bool operator==(const Formula&, const Formula&) = default;
};

struct Cell {
    CellAddress address;
    std::variant<Constant, Formula> content;

    bool is_formula() const noexcept { return std::holds_alternative<Formula>(content); }
    bool is_blank() const noexcept;
    bool is_text() const noexcept;
    const Formula* formula() const noexcept { return std::get_if<Formula>(&content); }
    const Constant* constant() const noexcept { return std::get_if<Constant>(&content); }

    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Row-major key; iteration over a sheet's cells is reading order.
using GridKey = std::pair<std::int32_t, std::int32_t>;

struct Sheet {
    std::string name;
    std::map<GridKey, Cell> cells;

    friend bool operator==(const Sheet&, const Sheet&) = default;
};

struct FeatureFlags {
    bool has_pivot_tables = false;
    bool has_autofilters = false;
    friend bool operator==(const FeatureFlags&, const FeatureFlags&) = default;
};

/// Immutable parsed artifact. Only non-blank cells are stored; reads of any
/// other in-grid address synthesize a Blank constant.
class Workbook {
public:
    Workbook() = default;

    const std::vector<Sheet>& sheets() const noexcept { return sheets_; }
    const std::map<std::string, Region>& defined_names() const noexcept { return names_; }
    const FeatureFlags& features() const noexcept { return features_; }

    /// Index of the sheet with this name (case-insensitive).
    std::optional<std::size_t> find_sheet(std::string_view name) const noexcept;
    const Sheet* sheet(std::string_view name) const noexcept;
    /// Defined name lookup, case-insensitive.
    const Region* defined_name(std::string_view name) const noexcept;

    /// Stored cell or nullptr. Unknown sheets yield nullptr.
    const Cell* find(const CellAddress& addr) const noexcept;
    /// Stored cell, or a synthesized Blank. Throws LookupError for an unknown sheet.
    Cell lookup(const CellAddress& addr) const;

    std::size_t cell_count() const noexcept;
    std::size_t formula_count() const noexcept;

    friend bool operator==(const Workbook&, const Workbook&) = default;

private:
    friend class WorkbookBuilder;

    std::vector<Sheet> sheets_;
    // Keyed by folded name; the value keeps the region as written.
    std::map<std::string, Region> names_;
    std::map<std::string, std::string> name_spelling_;
    FeatureFlags features_;
};

Cell lookup(const Workbook& workbook, const CellAddress& addr);

/// Accumulates sheets and cells and enforces the workbook invariants: unique
/// sheet names, unique cell addresses, in-grid coordinates, non-empty formulas.
class WorkbookBuilder {
public:
    /// Returns the new sheet's index. Throws WorkbookError on a duplicate name.
    std::size_t add_sheet(std::string name);
    bool has_sheet(std::string_view name) const noexcept;

    /// Blank constants are accepted and not stored. Throws WorkbookError on a
    /// duplicate address or unknown sheet.
    void set_cell(const CellAddress& addr, CellValue value);
    void set_formula(const CellAddress& addr, std::string body);

    void define_name(std::string name, Region region);
    bool has_name(std::string_view name) const noexcept;

    void set_pivot_tables(bool on) noexcept { wb_.features_.has_pivot_tables = on; }
    void set_autofilters(bool on) noexcept { wb_.features_.has_autofilters = on; }

    Workbook build() &&;

private:
    Sheet& sheet_for(const CellAddress& addr);
    void insert(const CellAddress& addr, Cell cell);

    Workbook wb_;
};

}  // namespace ssqa
