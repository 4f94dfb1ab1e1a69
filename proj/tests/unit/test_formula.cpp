#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "formula_corpus.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "ssqa/error.hpp"
#include "ssqa/formula.hpp"
#include "ssqa/ingest.hpp"

using namespace ssqa;

namespace {

NameTable corpus_names() {
    NameTable t;
    t.add("Rate", parse_region("S!B1"));
    t.add("Block", parse_region("S!C1:D2"));
    t.add("Whole", parse_region("Data!*"));
    return t;
}

std::map<std::string, Region> oracle_names() {
    return {{"rate", parse_region("S!B1")}, {"block", parse_region("S!C1:D2")}, {"whole", parse_region("Data!*")}};
}

FormulaAst parse(std::string_view text) { return parse_formula(text, "S", corpus_names()); }

template <class T>
const T& root_as(const FormulaAst& ast) {
    const T* p = std::get_if<T>(&ast.root->value);
    REQUIRE(p != nullptr);
    return *p;
}

std::vector<std::string> region_strings(const std::vector<Region>& regions) {
    std::vector<std::string> out;
    for (const auto& r : regions) out.push_back(fold_name(to_string(r)));
    std::sort(out.begin(), out.end());
    return out;
}

void check_refs_match_oracle(std::string_view text, const std::string& sheet, const NameTable& names,
                             const std::map<std::string, Region>& onames, std::uint64_t cap) {
    CAPTURE(text);
    auto ast = parse_formula(text, sheet, names);
    RefSet refs = extract_refs(ast, cap);
    oracle::ScannedRefs scanned = oracle::scan_refs(std::string(text), sheet, onames, cap);
    CHECK(refs.cells == scanned.cells);
    CHECK(region_strings(refs.large_ranges) == region_strings(scanned.large));
}

}  // namespace

TEST_CASE("operator precedence and associativity") {
    CHECK(render_formula(parse("1+2*3")) == "1+2*3");
    CHECK(render_formula(parse("(1+2)*3")) == "(1+2)*3");
    CHECK(render_formula(parse("((A1))")) == "A1");
    CHECK(render_formula(parse("A1/(B1/C1)")) == "A1/(B1/C1)");
    CHECK(render_formula(parse("(A1/B1)/C1")) == "A1/B1/C1");
    CHECK(render_formula(parse("1+2&3")) == "1+2&3");

    // Unary minus binds looser than ^: -A1^2 is -(A1^2).
    auto neg = parse("-A1^2");
    const auto& minus = root_as<UnaryOp>(neg);
    CHECK(minus.op == UnaryOperator::Negate);
    CHECK(std::get<BinaryOp>(minus.operand->value).op == BinaryOperator::Pow);
    CHECK(render_formula(parse("(-A1)^2")) == "(-A1)^2");
    CHECK(render_formula(neg) == "-A1^2");

    auto sum = root_as<BinaryOp>(parse("A1+B2*3"));
    CHECK(sum.op == BinaryOperator::Add);
    CHECK(std::get<BinaryOp>(sum.rhs->value).op == BinaryOperator::Mul);

    // ^ is left-associative.
    auto chain = parse("2^3^2");
    const auto& outer = root_as<BinaryOp>(chain);
    CHECK(std::holds_alternative<BinaryOp>(outer.lhs->value));
    CHECK(std::holds_alternative<NumberLit>(outer.rhs->value));

    // Comparison is the loosest.
    CHECK(root_as<BinaryOp>(parse("A1&B1=C1")).op == BinaryOperator::Eq);
    CHECK(root_as<UnaryOp>(parse("A1%")).op == UnaryOperator::Percent);
}

TEST_CASE("references and names") {
    auto cell = root_as<CellRef>(parse("$B3"));
    CHECK(cell.address == CellAddress{"S", 2, 3});
    CHECK(cell.column_absolute);
    CHECK_FALSE(cell.row_absolute);

    auto range = root_as<RangeRef>(parse("'My Sheet'!C9:A1"));
    CHECK(range.sheet == "My Sheet");
    CHECK(range.rect == Rect{1, 1, 3, 9});

    auto cols = root_as<RangeRef>(parse("B:C"));
    CHECK(cols.form == RangeForm::Columns);
    CHECK(cols.rect == Rect{2, 1, 3, kMaxRow});

    auto rows = root_as<RangeRef>(parse("2:5"));
    CHECK(rows.form == RangeForm::Rows);
    CHECK(rows.rect == Rect{1, 2, kMaxColumn, 5});

    auto name = root_as<NameRef>(parse("rate"));
    REQUIRE(name.target);
    CHECK(*name.target == parse_region("S!B1"));
    CHECK_FALSE(root_as<NameRef>(parse("Unknown")).target);

    auto ext = root_as<ExternalRef>(parse("[1]Prices!A1"));
    CHECK(ext.locator == "1");
    CHECK(std::holds_alternative<ExternalRef>(parse("'[rates.xlsx]FX'!B2").root->value));
}

TEST_CASE("function calls and literals") {
    auto call = root_as<FunctionCall>(parse("sum(A1, B2, C3:D4)"));
    CHECK(call.name == "SUM");
    CHECK(call.args.size() == 3);
    CHECK(root_as<FunctionCall>(parse("SUM()")).args.empty());
    auto missing = root_as<FunctionCall>(parse("IF(A1,,B1)"));
    REQUIRE(missing.args.size() == 3);
    CHECK(std::holds_alternative<MissingArg>(missing.args[1]->value));
    CHECK(canonical_function_name("_xlfn.CONCAT") == "CONCAT");
    CHECK(canonical_function_name("_XLFN._XLWS.SORT") == "SORT");
    CHECK(canonical_function_name("SUM") == "SUM");
    CHECK(root_as<TextLit>(parse("\"say \"\"hi\"\"\"")).value == "say \"hi\"");
    CHECK(root_as<BoolLit>(parse("false")).value == false);
    CHECK(root_as<ErrorLit>(parse("#N/A")).code == "#N/A");
    CHECK(root_as<NumberLit>(parse("1.5E3")).value == 1500);
    CHECK(parse("A1").depth() == 1);
    CHECK(parse("SUM(A1+1)").depth() == 3);
}

TEST_CASE("well-formed corpus re-parses to identical ASTs") {
    REQUIRE(corpus::kValidCount >= 60);
    for (auto text : corpus::kValid) {
        CAPTURE(text);
        FormulaAst a = parse(text);
        std::string rendered = render_formula(a);
        FormulaAst b = parse(rendered);
        CHECK(a == b);
        CHECK(render_formula(b) == rendered);
    }
}

TEST_CASE("malformed corpus reports positioned errors") {
    REQUIRE(corpus::kMalformedCount >= 10);
    for (const auto& m : corpus::kMalformed) {
        CAPTURE(m.text);
        try {
            parse(m.text);
            FAIL("expected a FormulaError");
        } catch (const FormulaError& e) {
            CHECK(e.offset() == m.offset);
            CHECK(e.offset() <= m.text.size());
        }
    }
}

TEST_CASE("extract_refs agrees with the text-scanning oracle on the corpus") {
    for (auto text : corpus::kValid) check_refs_match_oracle(text, "S", corpus_names(), oracle_names(), 64);
    for (auto text : corpus::kValid) check_refs_match_oracle(text, "S", corpus_names(), oracle_names(), 4);
}

TEST_CASE("extract_refs agrees with the oracle on random formulas") {
    for (std::uint32_t seed = 1; seed <= 40; ++seed) {
        auto wb = parse_fixture(gen::random_workbook(seed, 60)).workbook;
        NameTable names(wb);
        std::map<std::string, Region> onames;
        for (const auto& [k, r] : wb.defined_names()) onames.emplace(fold_name(k), r);
        for (const auto& sheet : wb.sheets())
            for (const auto& [k, cell] : sheet.cells)
                if (const Formula* f = cell.formula()) {
                    check_refs_match_oracle(f->text, sheet.name, names, onames, 10);
                    // Random formulas also round-trip.
                    auto ast = parse_formula(f->text, sheet.name, names);
                    CHECK(parse_formula(render_formula(ast), sheet.name, names) == ast);
                }
    }
}

TEST_CASE("unanalyzable references are recorded") {
    auto reasons = [](std::string_view text) {
        std::vector<UnanalyzableReason> out;
        for (const auto& u : extract_refs(parse(text)).unanalyzable) out.push_back(u.reason);
        return out;
    };
    CHECK(reasons("INDIRECT(\"B\"&A1)") == std::vector{UnanalyzableReason::Indirect});
    CHECK(reasons("OFFSET(A1,1,2)") == std::vector{UnanalyzableReason::Offset});
    CHECK(reasons("[1]Prices!A1*2") == std::vector{UnanalyzableReason::ExternalWorkbook});
    CHECK(reasons("Unknown+1") == std::vector{UnanalyzableReason::UnresolvedName});
    CHECK(reasons("SUM(A1:B2)").empty());

    // INDIRECT's own arguments are still precedents.
    auto refs = extract_refs(parse("INDIRECT(\"B\"&A1)"));
    CHECK(refs.cells == std::set<CellAddress>{{"S", 1, 1}});

    auto big = extract_refs(parse("SUM(A1:B10)"), 5);
    CHECK(big.cells.empty());
    REQUIRE(big.large_ranges.size() == 1);
    CHECK(big.large_ranges[0] == parse_region("S!A1:B10"));
}

TEST_CASE("trivial formulas and pure links") {
    const auto& allow = default_trivial_functions();
    CHECK(is_trivial(parse("A1"), allow));
    CHECK(is_trivial(parse("Data!B2"), allow));
    CHECK(is_trivial(parse("ROUND(A1,2)"), allow));
    CHECK(is_trivial(parse("TEXT(A1,\"0.0%\")"), allow));
    CHECK(is_trivial(parse("Rate"), allow));
    CHECK_FALSE(is_trivial(parse("ROUND(A1*2,2)"), allow));
    CHECK_FALSE(is_trivial(parse("ROUND(A1,B1)"), allow));
    CHECK_FALSE(is_trivial(parse("SUM(A1:A3)"), allow));
    CHECK_FALSE(is_trivial(parse("A1+0"), allow));
    CHECK(is_trivial(parse("SUM(A1:A3)"), {"SUM"}));

    CHECK(pure_link_target(parse("$C$4")) == CellAddress{"S", 3, 4});
    CHECK(pure_link_target(parse("Rate")) == CellAddress{"S", 2, 1});
    CHECK_FALSE(pure_link_target(parse("Block")));
    CHECK_FALSE(pure_link_target(parse("A1:A2")));
    CHECK_FALSE(pure_link_target(parse("-A1")));
}

TEST_CASE("formula shifting") {
    CHECK(shift_formula("B2*C2", 1, 0) == "B3*C3");
    CHECK(shift_formula("$B$2+B$2+$B2", 2, 2) == "$B$2+D$2+$B4");
    CHECK(shift_formula("SUM(A1:A3)&\"A1\"", 1, 1) == "SUM(B2:B4)&\"A1\"");
    CHECK(shift_formula("Data!A1", 0, 1) == "Data!B1");
    CHECK(shift_formula("A1", -1, 0) == "#REF!");
    CHECK(shift_formula("A:A", 0, 1) == "B:B");
    CHECK(shift_formula("2:2", 3, 0) == "5:5");
}

TEST_CASE("random expression trees survive render and re-parse") {
    std::mt19937 rng(3);
    const char* leaves[] = {"A1", "$B$2", "Data!C3", "'My Sheet'!D4:E5", "1", "2.5", "\"x\"", "TRUE", "Rate", "#N/A"};
    const char* ops[] = {"+", "-", "*", "/", "^", "&", "=", "<>", "<", ">="};
    std::function<std::string(int)> gen = [&](int depth) -> std::string {
        if (depth == 0) return leaves[rng() % 10];
        switch (rng() % 5) {
        case 0: return "(" + gen(depth - 1) + ")";
        case 1: return "-" + gen(depth - 1);
        case 2: return "MAX(" + gen(depth - 1) + "," + gen(depth - 1) + ")";
        case 3: return gen(depth - 1) + "%";
        default: return gen(depth - 1) + ops[rng() % 10] + gen(depth - 1);
        }
    };
    for (int i = 0; i < 500; ++i) {
        std::string text = gen(1 + static_cast<int>(rng() % 4));
        CAPTURE(text);
        auto a = parse(text);
        auto rendered = render_formula(a);
        CHECK(parse(rendered) == a);
    }
}
