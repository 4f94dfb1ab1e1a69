#include "ssqa/workbook.hpp"

#include "ssqa/error.hpp"

namespace ssqa {

bool Cell::is_blank() const noexcept {
    const auto* c = constant();
    return c != nullptr && std::holds_alternative<Blank>(c->value);
}

bool Cell::is_text() const noexcept {
    const auto* c = constant();
    return c != nullptr && std::holds_alternative<Text>(c->value);
}

std::optional<std::size_t> Workbook::find_sheet(std::string_view name) const noexcept {
    for (std::size_t i = 0; i < sheets_.size(); ++i)
        if (names_equal(sheets_[i].name, name)) return i;
    return std::nullopt;
}

const Sheet* Workbook::sheet(std::string_view name) const noexcept {
    auto i = find_sheet(name);
    return i ? &sheets_[*i] : nullptr;
}

const Region* Workbook::defined_name(std::string_view name) const noexcept {
    auto it = names_.find(fold_name(name));
    return it == names_.end() ? nullptr : &it->second;
}

const Cell* Workbook::find(const CellAddress& addr) const noexcept {
    const Sheet* s = sheet(addr.sheet);
    if (s == nullptr) return nullptr;
    auto it = s->cells.find({addr.row, addr.column});
    return it == s->cells.end() ? nullptr : &it->second;
}

Cell Workbook::lookup(const CellAddress& addr) const {
    const Sheet* s = sheet(addr.sheet);
    if (s == nullptr) throw LookupError("unknown sheet '" + addr.sheet + "'");
    auto it = s->cells.find({addr.row, addr.column});
    if (it != s->cells.end()) return it->second;
    return Cell{CellAddress{s->name, addr.column, addr.row}, Constant{Blank{}}};
}

std::size_t Workbook::cell_count() const noexcept {
    std::size_t n = 0;
    for (const auto& s : sheets_) n += s.cells.size();
    return n;
}

std::size_t Workbook::formula_count() const noexcept {
    std::size_t n = 0;
    for (const auto& s : sheets_)
        for (const auto& [key, cell] : s.cells)
            if (cell.is_formula()) ++n;
    return n;
}

Cell lookup(const Workbook& workbook, const CellAddress& addr) { return workbook.lookup(addr); }

std::size_t WorkbookBuilder::add_sheet(std::string name) {
    if (name.empty()) throw WorkbookError("empty sheet name");
    if (has_sheet(name)) throw WorkbookError("duplicate sheet name '" + name + "'");
    wb_.sheets_.push_back(Sheet{std::move(name), {}});
    return wb_.sheets_.size() - 1;
}

bool WorkbookBuilder::has_sheet(std::string_view name) const noexcept {
    return wb_.find_sheet(name).has_value();
}

Sheet& WorkbookBuilder::sheet_for(const CellAddress& addr) {
    auto i = wb_.find_sheet(addr.sheet);
    if (!i) throw WorkbookError("unknown sheet '" + addr.sheet + "'");
    if (addr.column < 1 || addr.column > kMaxColumn || addr.row < 1 || addr.row > kMaxRow)
        throw WorkbookError("address outside the grid: column " + std::to_string(addr.column) + ", row " +
                            std::to_string(addr.row));
    return wb_.sheets_[*i];
}

void WorkbookBuilder::insert(const CellAddress& addr, Cell cell) {
    Sheet& s = sheet_for(addr);
    cell.address.sheet = s.name;
    auto [it, inserted] = s.cells.emplace(GridKey{addr.row, addr.column}, std::move(cell));
    if (!inserted) throw WorkbookError("duplicate cell " + to_string(it->second.address));
}

void WorkbookBuilder::set_cell(const CellAddress& addr, CellValue value) {
    if (std::holds_alternative<Blank>(value)) {
        sheet_for(addr);
        return;
    }
    insert(addr, Cell{addr, Constant{std::move(value)}});
}

void WorkbookBuilder::set_formula(const CellAddress& addr, std::string body) {
    if (body.empty()) throw WorkbookError("empty formula at " + to_string(addr));
    insert(addr, Cell{addr, Formula{std::move(body)}});
}

void WorkbookBuilder::define_name(std::string name, Region region) {
    auto key = fold_name(name);
    if (wb_.names_.count(key) != 0) throw WorkbookError("duplicate defined name '" + name + "'");
    wb_.names_.emplace(key, std::move(region));
    wb_.name_spelling_.emplace(std::move(key), std::move(name));
}

bool WorkbookBuilder::has_name(std::string_view name) const noexcept {
    return wb_.names_.count(fold_name(name)) != 0;
}

Workbook WorkbookBuilder::build() && {
    for (auto& [key, region] : wb_.names_) {
        auto i = wb_.find_sheet(region.sheet);
        if (i) region.sheet = wb_.sheets_[*i].name;
    }
    return std::move(wb_);
}

}  // namespace ssqa
