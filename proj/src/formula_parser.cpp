#include <algorithm>
#include <charconv>
#include <cmath>

#include "formula_lexer.hpp"
#include "ssqa/error.hpp"
#include "ssqa/formula.hpp"
#include "ssqa/workbook.hpp"

namespace ssqa {

using detail::Token;
using detail::TokenKind;

namespace {

template <class T>
NodePtr make(T value) {
    return std::make_shared<const Node>(Node{std::move(value)});
}

// Binding strength, higher binds tighter. Prefix sign sits between the
// multiplicative operators and '^', so -A1^2 is -(A1^2).
constexpr int kCompare = 1;
constexpr int kConcat = 2;
constexpr int kAdditive = 3;
constexpr int kMultiplicative = 4;
constexpr int kPrefix = 5;
constexpr int kPower = 6;
constexpr int kPostfix = 7;
constexpr int kAtom = 8;

int precedence(BinaryOperator op) noexcept {
    switch (op) {
    case BinaryOperator::Eq:
    case BinaryOperator::Ne:
    case BinaryOperator::Lt:
    case BinaryOperator::Le:
    case BinaryOperator::Gt:
    case BinaryOperator::Ge: return kCompare;
    case BinaryOperator::Concat: return kConcat;
    case BinaryOperator::Add:
    case BinaryOperator::Sub: return kAdditive;
    case BinaryOperator::Mul:
    case BinaryOperator::Div: return kMultiplicative;
    case BinaryOperator::Pow: return kPower;
    }
    return kAtom;
}

int precedence(const Node& n) noexcept {
    if (const auto* b = std::get_if<BinaryOp>(&n.value)) return precedence(b->op);
    if (const auto* u = std::get_if<UnaryOp>(&n.value))
        return u->op == UnaryOperator::Percent ? kPostfix : kPrefix;
    if (const auto* num = std::get_if<NumberLit>(&n.value); num && std::signbit(num->value)) return kPrefix;
    return kAtom;
}

std::optional<BinaryOperator> binary_operator(const Token& t) {
    if (t.kind != TokenKind::Op) return std::nullopt;
    static const std::pair<std::string_view, BinaryOperator> table[] = {
        {"+", BinaryOperator::Add},    {"-", BinaryOperator::Sub},     {"*", BinaryOperator::Mul},
        {"/", BinaryOperator::Div},    {"^", BinaryOperator::Pow},     {"&", BinaryOperator::Concat},
        {"=", BinaryOperator::Eq},     {"<>", BinaryOperator::Ne},     {"<", BinaryOperator::Lt},
        {"<=", BinaryOperator::Le},    {">", BinaryOperator::Gt},      {">=", BinaryOperator::Ge}};
    for (const auto& [text, op] : table)
        if (t.text == text) return op;
    return std::nullopt;
}

class Parser {
public:
    Parser(std::string_view text, std::string_view default_sheet, const NameTable& names)
        : text_(text), toks_(detail::tokenize(text)), sheet_(default_sheet), names_(names) {}

    NodePtr parse() {
        if (toks_.front().kind == TokenKind::End) throw FormulaError(0, "empty formula");
        NodePtr n = binary(kCompare);
        if (cur().kind != TokenKind::End) fail("unexpected '" + token_text(cur()) + "'");
        return n;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_++]; }
    [[noreturn]] void fail(const std::string& msg) const { throw FormulaError(cur().begin, msg); }

    static std::string token_text(const Token& t) {
        if (t.kind == TokenKind::End) return "end of formula";
        if (!t.text.empty()) return t.text;
        return "reference";
    }

    bool at_op(std::string_view text) const { return cur().kind == TokenKind::Op && cur().text == text; }

    NodePtr binary(int level) {
        if (level == kPrefix) return prefix();
        NodePtr lhs = binary(level + 1);
        while (true) {
            auto op = binary_operator(cur());
            if (!op || precedence(*op) != level) return lhs;
            advance();
            NodePtr rhs = binary(level + 1);
            lhs = make(BinaryOp{*op, std::move(lhs), std::move(rhs)});
        }
    }

    NodePtr prefix() {
        if (at_op("-") || at_op("+")) {
            auto op = advance().text == "-" ? UnaryOperator::Negate : UnaryOperator::Plus;
            return make(UnaryOp{op, prefix()});
        }
        return power();
    }

    NodePtr power() {
        NodePtr lhs = postfix();
        while (at_op("^")) {
            advance();
            lhs = make(BinaryOp{BinaryOperator::Pow, std::move(lhs), power_operand()});
        }
        return lhs;
    }

    // Exponents may carry their own sign: 2^-1.
    NodePtr power_operand() {
        if (at_op("-") || at_op("+")) {
            auto op = advance().text == "-" ? UnaryOperator::Negate : UnaryOperator::Plus;
            return make(UnaryOp{op, power_operand()});
        }
        return postfix();
    }

    NodePtr postfix() {
        NodePtr n = primary();
        while (at_op("%")) {
            advance();
            n = make(UnaryOp{UnaryOperator::Percent, std::move(n)});
        }
        return n;
    }

    std::string sheet_of(const Token& t) const { return t.sheet ? *t.sheet : sheet_; }

    NodePtr cell_or_range() {
        const Token& a = advance();
        if (cur().kind != TokenKind::Colon) {
            return make(CellRef{CellAddress{sheet_of(a), a.first.column, a.first.row}, a.first.column_absolute,
                                a.first.row_absolute});
        }
        advance();
        if (cur().kind != TokenKind::Cell) fail("unsupported range operand");
        const Token& b = advance();
        if (b.sheet && !names_equal(*b.sheet, sheet_of(a)))
            throw FormulaError(b.begin, "range corners on different sheets");
        RangeRef r;
        r.sheet = sheet_of(a);
        r.form = RangeForm::Cells;
        r.rect = Rect{std::min(a.first.column, b.first.column), std::min(a.first.row, b.first.row),
                      std::max(a.first.column, b.first.column), std::max(a.first.row, b.first.row)};
        r.first_column_absolute = a.first.column_absolute;
        r.first_row_absolute = a.first.row_absolute;
        r.last_column_absolute = b.first.column_absolute;
        r.last_row_absolute = b.first.row_absolute;
        return make(std::move(r));
    }

    NodePtr line_range(const Token& t) {
        RangeRef r;
        r.sheet = sheet_of(t);
        r.first_column_absolute = t.first.column_absolute;
        r.first_row_absolute = t.first.row_absolute;
        r.last_column_absolute = t.second.column_absolute;
        r.last_row_absolute = t.second.row_absolute;
        if (t.kind == TokenKind::ColumnRange) {
            r.form = RangeForm::Columns;
            r.rect = Rect{std::min(t.first.column, t.second.column), 1, std::max(t.first.column, t.second.column),
                          kMaxRow};
        } else {
            r.form = RangeForm::Rows;
            r.rect = Rect{1, std::min(t.first.row, t.second.row), kMaxColumn, std::max(t.first.row, t.second.row)};
        }
        return make(std::move(r));
    }

    NodePtr function_call() {
        std::string name = advance().text;
        advance();  // '('
        FunctionCall call{std::move(name), {}};
        if (cur().kind == TokenKind::RParen) {
            advance();
            return make(std::move(call));
        }
        while (true) {
            if (cur().kind == TokenKind::Comma || cur().kind == TokenKind::RParen)
                call.args.push_back(make(MissingArg{}));
            else
                call.args.push_back(binary(kCompare));
            if (cur().kind == TokenKind::Comma) {
                advance();
                continue;
            }
            if (cur().kind == TokenKind::RParen) {
                advance();
                return make(std::move(call));
            }
            if (cur().kind == TokenKind::End) fail("missing ')' to close " + call.name + "(");
            fail("expected ',' or ')' in arguments of " + call.name);
        }
    }

    NodePtr primary() {
        const Token& t = cur();
        switch (t.kind) {
        case TokenKind::Number: advance(); return make(NumberLit{t.number});
        case TokenKind::String: advance(); return make(TextLit{t.text});
        case TokenKind::Bool: advance(); return make(BoolLit{t.boolean});
        case TokenKind::Error: advance(); return make(ErrorLit{t.text});
        case TokenKind::Cell: return cell_or_range();
        case TokenKind::ColumnRange:
        case TokenKind::RowRange: advance(); return line_range(t);
        case TokenKind::Function: return function_call();
        case TokenKind::External: {
            advance();
            return make(ExternalRef{t.text, std::string(source_text(t))});
        }
        case TokenKind::Name: {
            advance();
            const Region* target = names_.find(t.text);
            return make(NameRef{t.text, target ? std::optional<Region>(*target) : std::nullopt});
        }
        case TokenKind::LParen: {
            advance();
            NodePtr inner = binary(kCompare);
            if (cur().kind != TokenKind::RParen) fail("missing ')'");
            advance();
            return inner;
        }
        case TokenKind::End: fail("expected an operand at end of formula");
        default: fail("expected an operand before '" + token_text(t) + "'");
        }
    }

    std::string_view source_text(const Token& t) const { return text_.substr(t.begin, t.end - t.begin); }

    std::string_view text_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::string sheet_;
    const NameTable& names_;
};

std::size_t node_depth(const Node& n) {
    return std::visit(
        [](const auto& v) -> std::size_t {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FunctionCall>) {
                std::size_t d = 0;
                for (const auto& a : v.args) d = std::max(d, node_depth(*a));
                return d + 1;
            } else if constexpr (std::is_same_v<T, BinaryOp>) {
                return 1 + std::max(node_depth(*v.lhs), node_depth(*v.rhs));
            } else if constexpr (std::is_same_v<T, UnaryOp>) {
                return 1 + node_depth(*v.operand);
            } else {
                return 1;
            }
        },
        n.value);
}

std::string render_number(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string render_text_literal(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string ref_part(std::int32_t column, std::int32_t row, bool col_abs, bool row_abs) {
    return (col_abs ? "$" : "") + column_letters(column) + (row_abs ? "$" : "") + std::to_string(row);
}

class Renderer {
public:
    explicit Renderer(std::string_view default_sheet) : sheet_(default_sheet) {}

    std::string render(const Node& n) const {
        return std::visit([this](const auto& v) { return this->visit(v); }, n.value);
    }

private:
    std::string prefix(const std::string& sheet) const {
        return names_equal(sheet, sheet_) ? std::string() : quote_sheet_name(sheet) + "!";
    }

    std::string visit(const NumberLit& v) const { return render_number(v.value); }
    std::string visit(const TextLit& v) const { return render_text_literal(v.value); }
    std::string visit(const BoolLit& v) const { return v.value ? "TRUE" : "FALSE"; }
    std::string visit(const ErrorLit& v) const { return v.code; }
    std::string visit(const MissingArg&) const { return {}; }
    std::string visit(const ExternalRef& v) const { return v.text; }

    std::string visit(const CellRef& v) const {
        return prefix(v.address.sheet) + ref_part(v.address.column, v.address.row, v.column_absolute, v.row_absolute);
    }

    std::string visit(const RangeRef& v) const {
        std::string out = prefix(v.sheet);
        const Rect& r = v.rect;
        switch (v.form) {
        case RangeForm::Cells:
            return out + ref_part(r.first_column, r.first_row, v.first_column_absolute, v.first_row_absolute) + ":" +
                   ref_part(r.last_column, r.last_row, v.last_column_absolute, v.last_row_absolute);
        case RangeForm::Columns:
            return out + (v.first_column_absolute ? "$" : "") + column_letters(r.first_column) + ":" +
                   (v.last_column_absolute ? "$" : "") + column_letters(r.last_column);
        case RangeForm::Rows:
            return out + (v.first_row_absolute ? "$" : "") + std::to_string(r.first_row) + ":" +
                   (v.last_row_absolute ? "$" : "") + std::to_string(r.last_row);
        }
        return out;
    }

    std::string visit(const NameRef& v) const { return v.name; }

    std::string visit(const FunctionCall& v) const {
        std::string out = v.name + "(";
        for (std::size_t i = 0; i < v.args.size(); ++i) {
            if (i) out += ",";
            out += render(*v.args[i]);
        }
        return out + ")";
    }

    std::string wrap(const Node& n, bool parens) const {
        return parens ? "(" + render(n) + ")" : render(n);
    }

    std::string visit(const BinaryOp& v) const {
        int p = precedence(v.op);
        // Left-associative throughout: equal precedence on the right needs parens.
        bool left_parens = precedence(*v.lhs) < p;
        bool right_parens = precedence(*v.rhs) <= p;
        return wrap(*v.lhs, left_parens) + std::string(operator_text(v.op)) + wrap(*v.rhs, right_parens);
    }

    std::string visit(const UnaryOp& v) const {
        if (v.op == UnaryOperator::Percent) return wrap(*v.operand, precedence(*v.operand) < kPostfix) + "%";
        return std::string(operator_text(v.op)) + wrap(*v.operand, precedence(*v.operand) < kPrefix);
    }

    std::string sheet_;
};

bool same_ptr(const NodePtr& a, const NodePtr& b) { return a && b && same_tree(*a, *b); }

bool same_value(const NumberLit& a, const NumberLit& b) { return a.value == b.value; }
bool same_value(const TextLit& a, const TextLit& b) { return a.value == b.value; }
bool same_value(const BoolLit& a, const BoolLit& b) { return a.value == b.value; }
bool same_value(const ErrorLit& a, const ErrorLit& b) { return a.code == b.code; }
bool same_value(const MissingArg&, const MissingArg&) { return true; }
bool same_value(const CellRef& a, const CellRef& b) {
    return a.address == b.address && a.column_absolute == b.column_absolute && a.row_absolute == b.row_absolute;
}
bool same_value(const RangeRef& a, const RangeRef& b) {
    return names_equal(a.sheet, b.sheet) && a.rect == b.rect && a.form == b.form &&
           a.first_column_absolute == b.first_column_absolute && a.first_row_absolute == b.first_row_absolute &&
           a.last_column_absolute == b.last_column_absolute && a.last_row_absolute == b.last_row_absolute;
}
bool same_value(const NameRef& a, const NameRef& b) { return names_equal(a.name, b.name) && a.target == b.target; }
bool same_value(const FunctionCall& a, const FunctionCall& b) {
    if (a.name != b.name || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same_ptr(a.args[i], b.args[i])) return false;
    return true;
}
bool same_value(const BinaryOp& a, const BinaryOp& b) {
    return a.op == b.op && same_ptr(a.lhs, b.lhs) && same_ptr(a.rhs, b.rhs);
}
bool same_value(const UnaryOp& a, const UnaryOp& b) { return a.op == b.op && same_ptr(a.operand, b.operand); }
bool same_value(const ExternalRef& a, const ExternalRef& b) { return a.locator == b.locator && a.text == b.text; }

}  // namespace

bool same_tree(const Node& a, const Node& b) {
    if (a.value.index() != b.value.index()) return false;
    return std::visit(
        [&b](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            return same_value(x, std::get<T>(b.value));
        },
        a.value);
}

std::string_view operator_text(BinaryOperator op) noexcept {
    switch (op) {
    case BinaryOperator::Add: return "+";
    case BinaryOperator::Sub: return "-";
    case BinaryOperator::Mul: return "*";
    case BinaryOperator::Div: return "/";
    case BinaryOperator::Pow: return "^";
    case BinaryOperator::Concat: return "&";
    case BinaryOperator::Eq: return "=";
    case BinaryOperator::Ne: return "<>";
    case BinaryOperator::Lt: return "<";
    case BinaryOperator::Le: return "<=";
    case BinaryOperator::Gt: return ">";
    case BinaryOperator::Ge: return ">=";
    }
    return "?";
}

std::string_view operator_text(UnaryOperator op) noexcept {
    switch (op) {
    case UnaryOperator::Negate: return "-";
    case UnaryOperator::Plus: return "+";
    case UnaryOperator::Percent: return "%";
    }
    return "?";
}

std::size_t FormulaAst::depth() const { return root ? node_depth(*root) : 0; }

std::string_view canonical_function_name(std::string_view name) noexcept {
    for (std::string_view p : {"_XLFN._XLWS.", "_XLFN.", "_XLWS."}) {
        if (name.size() > p.size() && names_equal(name.substr(0, p.size()), p)) return name.substr(p.size());
    }
    return name;
}

NameTable::NameTable(const Workbook& workbook) {
    for (const auto& [key, region] : workbook.defined_names()) entries_.emplace_back(key, region);
}

void NameTable::add(std::string_view name, Region region) { entries_.emplace_back(fold_name(name), std::move(region)); }

const Region* NameTable::find(std::string_view name) const noexcept {
    for (const auto& [key, region] : entries_)
        if (names_equal(key, name)) return &region;
    return nullptr;
}

FormulaAst parse_formula(std::string_view text, std::string_view default_sheet, const NameTable& names) {
    return FormulaAst{Parser(text, default_sheet, names).parse(), std::string(default_sheet)};
}

std::string render_node(const Node& node, std::string_view default_sheet) {
    return Renderer(default_sheet).render(node);
}

std::string render_formula(const FormulaAst& ast) {
    return ast.root ? render_node(*ast.root, ast.default_sheet) : std::string();
}

}  // namespace ssqa
