#include <doctest.h>

#include "ssqa/error.hpp"
#include "ssqa/workbook.hpp"

using namespace ssqa;

namespace {

Workbook small() {
    WorkbookBuilder b;
    b.add_sheet("Inputs");
    b.add_sheet("Calc");
    b.set_cell({"Inputs", 1, 1}, Text{"Rate"});
    b.set_cell({"Inputs", 2, 1}, 0.05);
    b.set_cell({"Inputs", 2, 2}, true);
    b.set_cell({"Inputs", 2, 3}, ErrorLiteral{"#N/A"});
    b.set_cell({"Inputs", 2, 4}, Blank{});
    b.set_formula({"Calc", 2, 1}, "Inputs!B1*2");
    b.define_name("Rate", Region{"Inputs", Rect{2, 1, 2, 1}});
    return std::move(b).build();
}

}  // namespace

TEST_CASE("builder stores non-blank cells") {
    Workbook wb = small();
    CHECK(wb.sheets().size() == 2);
    CHECK(wb.cell_count() == 5);
    CHECK(wb.formula_count() == 1);
    CHECK(wb.find({"Inputs", 2, 4}) == nullptr);
    REQUIRE(wb.find({"inputs", 2, 1}) != nullptr);
    CHECK(std::get<double>(wb.find({"Inputs", 2, 1})->constant()->value) == 0.05);
    CHECK(wb.find({"Calc", 2, 1})->formula()->text == "Inputs!B1*2");
    CHECK(wb.find({"Nowhere", 1, 1}) == nullptr);
}

TEST_CASE("lookup synthesizes blanks and rejects unknown sheets") {
    Workbook wb = small();
    Cell c = wb.lookup({"Calc", 9, 9});
    CHECK(c.is_blank());
    CHECK(c.address == CellAddress{"Calc", 9, 9});
    CHECK(lookup(wb, {"Inputs", 1, 1}).is_text());
    CHECK_THROWS_AS(wb.lookup({"Missing", 1, 1}), LookupError);
}

TEST_CASE("sheet and name lookup ignore case") {
    Workbook wb = small();
    CHECK(wb.find_sheet("CALC") == 1);
    CHECK(wb.sheet("inputs")->name == "Inputs");
    REQUIRE(wb.defined_name("RATE") != nullptr);
    CHECK(*wb.defined_name("rate") == Region{"Inputs", Rect{2, 1, 2, 1}});
    CHECK(wb.defined_name("Other") == nullptr);
}

TEST_CASE("sheet cells iterate in reading order") {
    WorkbookBuilder b;
    b.add_sheet("S");
    b.set_cell({"S", 3, 1}, 1.0);
    b.set_cell({"S", 1, 2}, 2.0);
    b.set_cell({"S", 2, 1}, 3.0);
    Workbook wb = std::move(b).build();
    std::vector<CellAddress> order;
    for (const auto& [k, c] : wb.sheets()[0].cells) order.push_back(c.address);
    CHECK(order == std::vector<CellAddress>{{"S", 2, 1}, {"S", 3, 1}, {"S", 1, 2}});
}

TEST_CASE("builder invariants") {
    WorkbookBuilder b;
    b.add_sheet("S");
    CHECK_THROWS_AS(b.add_sheet("s"), WorkbookError);
    CHECK_THROWS_AS(b.add_sheet(""), WorkbookError);
    b.set_cell({"S", 1, 1}, 1.0);
    CHECK_THROWS_AS(b.set_cell({"S", 1, 1}, 2.0), WorkbookError);
    CHECK_THROWS_AS(b.set_formula({"S", 1, 1}, "1"), WorkbookError);
    CHECK_THROWS_AS(b.set_cell({"T", 1, 1}, 2.0), WorkbookError);
    CHECK_THROWS_AS(b.set_cell({"S", 0, 1}, 2.0), WorkbookError);
    CHECK_THROWS_AS(b.set_cell({"S", 1, kMaxRow + 1}, 2.0), WorkbookError);
    CHECK_THROWS_AS(b.set_formula({"S", 2, 2}, ""), WorkbookError);
    b.define_name("X", Region{"S", std::nullopt});
    CHECK_THROWS_AS(b.define_name("x", Region{"S", std::nullopt}), WorkbookError);
}

TEST_CASE("feature flags") {
    WorkbookBuilder b;
    b.add_sheet("S");
    b.set_pivot_tables(true);
    Workbook wb = std::move(b).build();
    CHECK(wb.features().has_pivot_tables);
    CHECK_FALSE(wb.features().has_autofilters);
}
