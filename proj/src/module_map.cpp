#include "ssqa/module_map.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "ssqa/error.hpp"
#include "ssqa/graph.hpp"
#include "ssqa/workbook.hpp"

namespace ssqa {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Splits on commas outside single-quoted sheet names.
std::vector<std::string_view> split_regions(std::string_view s) {
    std::vector<std::string_view> out;
    bool quoted = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\'') quoted = !quoted;
        if (s[i] == ',' && !quoted) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

bool contains_keyword(const std::string& folded_name, const std::vector<std::string>& keywords) {
    return std::any_of(keywords.begin(), keywords.end(), [&](const std::string& k) {
        return !k.empty() && folded_name.find(fold_name(k)) != std::string::npos;
    });
}

ModuleKind input_subkind(const std::string& folded_name) {
    static const std::pair<std::string_view, ModuleKind> table[] = {
        {"source", ModuleKind::SourceData},
        {"assumption", ModuleKind::Assumptions},
        {"decision", ModuleKind::DecisionVariables},
        {"preproc", ModuleKind::InputPreProcessing},
        {"staging", ModuleKind::InputPreProcessing},
    };
    for (const auto& [word, kind] : table)
        if (folded_name.find(word) != std::string::npos) return kind;
    return ModuleKind::UnspecifiedInput;
}

}  // namespace

TopModule top_level(ModuleKind kind) noexcept {
    switch (kind) {
    case ModuleKind::Computations: return TopModule::Computations;
    case ModuleKind::Reports: return TopModule::Reports;
    default: return TopModule::Inputs;
    }
}

bool is_input(ModuleKind kind) noexcept { return top_level(kind) == TopModule::Inputs; }

std::string_view module_path(ModuleKind kind) noexcept {
    switch (kind) {
    case ModuleKind::SourceData: return "inputs.source";
    case ModuleKind::Assumptions: return "inputs.assumptions";
    case ModuleKind::DecisionVariables: return "inputs.decisions";
    case ModuleKind::InputPreProcessing: return "inputs.preprocessing";
    case ModuleKind::UnspecifiedInput: return "inputs";
    case ModuleKind::Computations: return "computations";
    case ModuleKind::Reports: return "reports";
    }
    return "?";
}

std::optional<ModuleKind> parse_module_path(std::string_view path) noexcept {
    for (auto k : {ModuleKind::SourceData, ModuleKind::Assumptions, ModuleKind::DecisionVariables,
                   ModuleKind::InputPreProcessing, ModuleKind::UnspecifiedInput, ModuleKind::Computations,
                   ModuleKind::Reports})
        if (names_equal(path, module_path(k))) return k;
    return std::nullopt;
}

std::string_view to_string(TopModule top) noexcept {
    switch (top) {
    case TopModule::Inputs: return "Inputs";
    case TopModule::Computations: return "Computations";
    case TopModule::Reports: return "Reports";
    }
    return "?";
}

std::string display_name(ModuleKind kind) {
    switch (kind) {
    case ModuleKind::SourceData: return "Inputs/SourceData";
    case ModuleKind::Assumptions: return "Inputs/Assumptions";
    case ModuleKind::DecisionVariables: return "Inputs/DecisionVariables";
    case ModuleKind::InputPreProcessing: return "Inputs/InputPreProcessing";
    case ModuleKind::UnspecifiedInput: return "Inputs";
    case ModuleKind::Computations: return "Computations";
    case ModuleKind::Reports: return "Reports";
    }
    return "?";
}

std::string display_name(const std::optional<ModuleKind>& label) {
    return label ? display_name(*label) : "Unassigned";
}

std::optional<ModuleKind> ModuleMap::module_of(const CellAddress& addr) const noexcept {
    for (auto it = assignments_.rbegin(); it != assignments_.rend(); ++it)
        if (it->region.contains(addr)) return it->kind;
    return std::nullopt;
}

bool ModuleMap::has_input_submodules() const noexcept {
    return std::any_of(assignments_.begin(), assignments_.end(), [](const ModuleAssignment& a) {
        return is_input(a.kind) && a.kind != ModuleKind::UnspecifiedInput;
    });
}

std::optional<ModuleKind> module_of(const ModuleMap& map, const CellAddress& addr) noexcept {
    return map.module_of(addr);
}

ModuleMap parse_manifest(std::string_view text) {
    std::vector<ModuleAssignment> out;
    std::set<std::string> whole_sheets;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ManifestError(line_no, "expected '<module> = <regions>'");
        auto path = trim(line.substr(0, eq));
        auto kind = parse_module_path(path);
        if (!kind) throw ManifestError(line_no, "unknown module '" + std::string(path) + "'");
        auto regions = trim(line.substr(eq + 1));
        if (regions.empty()) throw ManifestError(line_no, "no regions for module '" + std::string(path) + "'");
        for (auto item : split_regions(regions)) {
            Region region;
            try {
                region = parse_region(item);
            } catch (const AddressError& e) {
                throw ManifestError(line_no, e.what());
            }
            if (region.whole_sheet() && !whole_sheets.insert(fold_name(region.sheet)).second)
                throw ManifestError(line_no, "sheet '" + region.sheet + "' is claimed whole by more than one line");
            out.push_back({std::move(region), *kind, 1.0, line_no});
        }
    }
    return ModuleMap(std::move(out), MapProvenance::Manifest);
}

ModuleMap load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ManifestError(0, "cannot open manifest '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_manifest(buf.str());
    } catch (const ManifestError& e) {
        throw ManifestError(path.string(), e.line(), e.detail());
    }
}

ModuleMap bind_manifest(const ModuleMap& map, const Workbook& workbook) {
    std::vector<ModuleAssignment> bound = map.assignments();
    for (auto& a : bound) {
        const Sheet* s = workbook.sheet(a.region.sheet);
        if (s == nullptr)
            throw ManifestError(a.line, "region " + to_string(a.region) + " names a sheet not in the workbook");
        a.region.sheet = s->name;
    }
    return ModuleMap(std::move(bound), map.provenance());
}

ModuleMap infer_modules(const Workbook& workbook, const RoleMap& roles, const InferenceKeywords& keywords) {
    std::vector<ModuleAssignment> out;
    for (const auto& sheet : workbook.sheets()) {
        std::string folded = fold_name(sheet.name);
        bool comp = contains_keyword(folded, keywords.computations);
        bool inp = contains_keyword(folded, keywords.inputs);
        bool rep = contains_keyword(folded, keywords.reports);
        Region whole{sheet.name, std::nullopt};
        if (comp || inp || rep) {
            ModuleKind kind = comp ? ModuleKind::Computations : inp ? input_subkind(folded) : ModuleKind::Reports;
            out.push_back({std::move(whole), kind, kNameConfidence, 0});
            continue;
        }
        std::size_t cells = 0, inputs = 0, formulas = 0, outputs = 0;
        for (const auto& [key, cell] : sheet.cells) {
            ++cells;
            if (cell.is_formula()) ++formulas;
            auto it = roles.find(cell.address);
            if (it == roles.end()) continue;
            if (it->second == CellRole::Input) ++inputs;
            if (it->second == CellRole::Output) ++outputs;
        }
        ModuleKind kind = ModuleKind::Computations;
        if (cells > 0 && static_cast<double>(inputs) >= kRoleMajority * static_cast<double>(cells))
            kind = ModuleKind::UnspecifiedInput;
        else if (formulas > 0 && static_cast<double>(outputs) >= kRoleMajority * static_cast<double>(formulas))
            kind = ModuleKind::Reports;
        out.push_back({std::move(whole), kind, kRoleConfidence, 0});
    }
    return ModuleMap(std::move(out), MapProvenance::Inferred);
}

}  // namespace ssqa
