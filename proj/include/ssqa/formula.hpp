#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ssqa/address.hpp"

namespace ssqa {

class Workbook;

struct Node;
/// Nodes are immutable once built, so subtrees are shared freely.
using NodePtr = std::shared_ptr<const Node>;

struct NumberLit {
    double value = 0;
};
struct TextLit {
    std::string value;
};
struct BoolLit {
    bool value = false;
};
struct ErrorLit {
    std::string code;
};
/// Empty argument slot, as in IF(A1,,0).
struct MissingArg {};

struct CellRef {
    CellAddress address;
    bool column_absolute = false;
    bool row_absolute = false;
};

enum class RangeForm : std::uint8_t { Cells, Columns, Rows };

/// Rectangular range. Whole-column ("A:C") and whole-row ("2:5") forms keep
/// their spelling; the region always carries concrete bounds.
struct RangeRef {
    std::string sheet;
    Rect rect;
    RangeForm form = RangeForm::Cells;
    bool first_column_absolute = false;
    bool first_row_absolute = false;
    bool last_column_absolute = false;
    bool last_row_absolute = false;

    Region region() const { return Region{sheet, rect}; }
};

/// Defined-name use. `target` is empty when the name is not defined.
struct NameRef {
    std::string name;
    std::optional<Region> target;
};

struct FunctionCall {
    std::string name;  // upper-cased as written, e.g. "SUM" or "_XLFN.XLOOKUP"
    std::vector<NodePtr> args;
};

enum class BinaryOperator : std::uint8_t { Add, Sub, Mul, Div, Pow, Concat, Eq, Ne, Lt, Le, Gt, Ge };
enum class UnaryOperator : std::uint8_t { Negate, Plus, Percent };

struct BinaryOp {
    BinaryOperator op;
    NodePtr lhs;
    NodePtr rhs;
};

struct UnaryOp {
    UnaryOperator op;
    NodePtr operand;
};

/// Reference into another workbook, e.g. "[1]Rates!B2" or "'[Book.xlsx]S'!A1".
struct ExternalRef {
    std::string locator;
    std::string text;
};

struct Node {
    std::variant<NumberLit, TextLit, BoolLit, ErrorLit, MissingArg, CellRef, RangeRef, NameRef, FunctionCall,
                 BinaryOp, UnaryOp, ExternalRef>
        value;
};

/// Structural equality; sheet names compare case-insensitively.
bool same_tree(const Node& a, const Node& b);

std::string_view operator_text(BinaryOperator op) noexcept;
std::string_view operator_text(UnaryOperator op) noexcept;

struct FormulaAst {
    NodePtr root;
    std::string default_sheet;

    /// Bare reference or literal has depth 1.
    std::size_t depth() const;
    friend bool operator==(const FormulaAst& a, const FormulaAst& b) {
        return a.root && b.root && same_tree(*a.root, *b.root);
    }
};

/// Function name with any "_xlfn." / "_xlws." storage prefix removed.
std::string_view canonical_function_name(std::string_view name) noexcept;

/// Name → region map used while parsing. Built from a workbook or by hand.
class NameTable {
public:
    NameTable() = default;
    explicit NameTable(const Workbook& workbook);
    void add(std::string_view name, Region region);
    const Region* find(std::string_view name) const noexcept;

private:
    std::vector<std::pair<std::string, Region>> entries_;  // folded name, target
};

/// Parses a formula body (leading '=' already stripped). Unqualified
/// references resolve to `default_sheet`. Throws FormulaError with the
/// character offset of the problem.
FormulaAst parse_formula(std::string_view text, std::string_view default_sheet, const NameTable& names = {});

/// Renders an AST back to formula text (no leading '='). References on the
/// default sheet stay unqualified; parentheses appear only where precedence
/// requires them.
std::string render_formula(const FormulaAst& ast);
std::string render_node(const Node& node, std::string_view default_sheet);

enum class UnanalyzableReason : std::uint8_t { Indirect, Offset, ExternalWorkbook, UnresolvedName, RangeCap };
std::string_view to_string(UnanalyzableReason reason) noexcept;

struct Unanalyzable {
    UnanalyzableReason reason;
    std::string text;
    friend bool operator==(const Unanalyzable&, const Unanalyzable&) = default;
};

struct RefSet {
    std::set<CellAddress> cells;
    std::vector<Unanalyzable> unanalyzable;
    /// Ranges above the expansion cap, kept whole.
    std::vector<Region> large_ranges;
};

inline constexpr std::uint64_t kDefaultRangeCap = 65536;

/// Collects every statically derivable precedent. Ranges up to `range_cap`
/// cells are expanded; larger ones are reported region-level. INDIRECT and
/// OFFSET arguments are still walked, and the call is recorded as unanalyzable.
RefSet extract_refs(const FormulaAst& ast, std::uint64_t range_cap = kDefaultRangeCap);

/// True for a pure link (single cell reference) or for one allowlisted
/// function wrapping exactly one reference plus literal arguments.
bool is_trivial(const FormulaAst& ast, const std::set<std::string>& allowlist);
const std::set<std::string>& default_trivial_functions();

/// True iff the AST is a single cell reference (or a name bound to one cell).
std::optional<CellAddress> pure_link_target(const FormulaAst& ast);

/// Rewrites relative references in formula text as if the formula were
/// copied `rows` down and `columns` right; absolute parts stay put. References
/// pushed off the grid become #REF!. Text outside references is preserved.
std::string shift_formula(std::string_view text, std::int32_t rows, std::int32_t columns);

}  // namespace ssqa
