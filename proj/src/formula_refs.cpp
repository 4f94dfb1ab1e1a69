#include <algorithm>

#include "formula_lexer.hpp"
#include "ssqa/error.hpp"
#include "ssqa/formula.hpp"

namespace ssqa {

namespace {

class RefCollector {
public:
    RefCollector(std::string_view default_sheet, std::uint64_t cap) : sheet_(default_sheet), cap_(cap) {}

    void walk(const Node& n) {
        std::visit([this](const auto& v) { this->visit(v); }, n.value);
    }

    RefSet take() { return std::move(out_); }

private:
    template <class T>
    void visit(const T&) {}

    void visit(const CellRef& v) { out_.cells.insert(v.address); }

    void visit(const RangeRef& v) { add_region(v.region(), render_node(Node{v}, sheet_)); }

    void visit(const NameRef& v) {
        if (!v.target) {
            out_.unanalyzable.push_back({UnanalyzableReason::UnresolvedName, v.name});
            return;
        }
        add_region(*v.target, v.name);
    }

    void visit(const ExternalRef& v) { out_.unanalyzable.push_back({UnanalyzableReason::ExternalWorkbook, v.text}); }

    void visit(const FunctionCall& v) {
        auto name = canonical_function_name(v.name);
        if (name == "INDIRECT" || name == "OFFSET") {
            std::string args;
            for (std::size_t i = 0; i < v.args.size(); ++i) {
                if (i) args += ", ";
                args += render_node(*v.args[i], sheet_);
            }
            out_.unanalyzable.push_back(
                {name == "INDIRECT" ? UnanalyzableReason::Indirect : UnanalyzableReason::Offset, std::move(args)});
        }
        for (const auto& a : v.args) walk(*a);
    }

    void visit(const BinaryOp& v) {
        walk(*v.lhs);
        walk(*v.rhs);
    }

    void visit(const UnaryOp& v) { walk(*v.operand); }

    void add_region(const Region& region, std::string text) {
        if (!region.rect || region.rect->cell_count() > cap_) {
            out_.large_ranges.push_back(region);
            out_.unanalyzable.push_back({UnanalyzableReason::RangeCap, std::move(text)});
            return;
        }
        const Rect& r = *region.rect;
        for (std::int32_t row = r.first_row; row <= r.last_row; ++row)
            for (std::int32_t col = r.first_column; col <= r.last_column; ++col)
                out_.cells.insert(CellAddress{region.sheet, col, row});
    }

    std::string sheet_;
    std::uint64_t cap_;
    RefSet out_;
};

bool is_literal(const Node& n) {
    if (std::holds_alternative<NumberLit>(n.value) || std::holds_alternative<TextLit>(n.value) ||
        std::holds_alternative<BoolLit>(n.value) || std::holds_alternative<MissingArg>(n.value))
        return true;
    // ROUND(x, -2): a signed numeric literal.
    if (const auto* u = std::get_if<UnaryOp>(&n.value))
        return u->op != UnaryOperator::Percent && std::holds_alternative<NumberLit>(u->operand->value);
    return false;
}

bool is_reference(const Node& n) {
    if (std::holds_alternative<CellRef>(n.value) || std::holds_alternative<RangeRef>(n.value)) return true;
    const auto* name = std::get_if<NameRef>(&n.value);
    return name != nullptr && name->target.has_value();
}

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](char c) { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); });
    return out;
}

}  // namespace

std::string_view to_string(UnanalyzableReason reason) noexcept {
    switch (reason) {
    case UnanalyzableReason::Indirect: return "INDIRECT";
    case UnanalyzableReason::Offset: return "OFFSET";
    case UnanalyzableReason::ExternalWorkbook: return "external-workbook";
    case UnanalyzableReason::UnresolvedName: return "unresolved-name";
    case UnanalyzableReason::RangeCap: return "range-cap";
    }
    return "?";
}

RefSet extract_refs(const FormulaAst& ast, std::uint64_t range_cap) {
    RefCollector c(ast.default_sheet, range_cap);
    if (ast.root) c.walk(*ast.root);
    return c.take();
}

std::optional<CellAddress> pure_link_target(const FormulaAst& ast) {
    if (!ast.root) return std::nullopt;
    if (const auto* c = std::get_if<CellRef>(&ast.root->value)) return c->address;
    if (const auto* n = std::get_if<NameRef>(&ast.root->value); n && n->target && n->target->rect &&
                                                                  n->target->rect->cell_count() == 1)
        return CellAddress{n->target->sheet, n->target->rect->first_column, n->target->rect->first_row};
    return std::nullopt;
}

const std::set<std::string>& default_trivial_functions() {
    static const std::set<std::string> names{"ROUND", "TEXT", "ABS"};
    return names;
}

bool is_trivial(const FormulaAst& ast, const std::set<std::string>& allowlist) {
    if (pure_link_target(ast)) return true;
    if (!ast.root) return false;
    const auto* call = std::get_if<FunctionCall>(&ast.root->value);
    if (call == nullptr) return false;
    if (allowlist.count(upper(canonical_function_name(call->name))) == 0) return false;
    std::size_t refs = 0;
    for (const auto& arg : call->args) {
        if (is_reference(*arg))
            ++refs;
        else if (!is_literal(*arg))
            return false;
    }
    return refs == 1;
}

std::string shift_formula(std::string_view text, std::int32_t rows, std::int32_t columns) {
    std::vector<detail::Token> tokens;
    try {
        tokens = detail::tokenize(text);
    } catch (const FormulaError&) {
        return std::string(text);
    }
    std::string out;
    std::size_t copied = 0;
    auto shift_col = [&](const detail::RefPart& p) { return p.column_absolute ? p.column : p.column + columns; };
    auto shift_row = [&](const detail::RefPart& p) { return p.row_absolute ? p.row : p.row + rows; };
    auto col_ok = [](std::int32_t c) { return c >= 1 && c <= kMaxColumn; };
    auto row_ok = [](std::int32_t r) { return r >= 1 && r <= kMaxRow; };
    auto col_text = [](const detail::RefPart& p, std::int32_t c) {
        return (p.column_absolute ? "$" : "") + column_letters(c);
    };
    auto row_text = [](const detail::RefPart& p, std::int32_t r) {
        return (p.row_absolute ? "$" : "") + std::to_string(r);
    };

    for (const auto& t : tokens) {
        std::string replacement;
        bool invalid = false;
        switch (t.kind) {
        case detail::TokenKind::Cell: {
            auto c = shift_col(t.first);
            auto r = shift_row(t.first);
            invalid = !col_ok(c) || !row_ok(r);
            if (!invalid) replacement = col_text(t.first, c) + row_text(t.first, r);
            break;
        }
        case detail::TokenKind::ColumnRange: {
            auto a = shift_col(t.first);
            auto b = shift_col(t.second);
            invalid = !col_ok(a) || !col_ok(b);
            if (!invalid) replacement = col_text(t.first, a) + ":" + col_text(t.second, b);
            break;
        }
        case detail::TokenKind::RowRange: {
            auto a = shift_row(t.first);
            auto b = shift_row(t.second);
            invalid = !row_ok(a) || !row_ok(b);
            if (!invalid) replacement = row_text(t.first, a) + ":" + row_text(t.second, b);
            break;
        }
        default: continue;
        }
        if (invalid) {
            out.append(text.substr(copied, t.begin - copied));
            out += "#REF!";
        } else {
            out.append(text.substr(copied, t.ref_begin - copied));
            out += replacement;
        }
        copied = t.end;
    }
    out.append(text.substr(copied));
    return out;
}

}  // namespace ssqa
