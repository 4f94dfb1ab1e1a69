#include "ssqa/rules.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "ssqa/error.hpp"
#include "ssqa/workbook.hpp"

namespace ssqa {

std::string_view to_string(Severity s) noexcept {
    switch (s) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
    }
    return "?";
}

std::optional<Severity> parse_severity(std::string_view text) noexcept {
    for (auto s : {Severity::Info, Severity::Warning, Severity::Error})
        if (names_equal(text, to_string(s))) return s;
    return std::nullopt;
}

std::string_view to_string(Dimension d) noexcept {
    switch (d) {
    case Dimension::SuitableForAnalysis: return "suitable-for-analysis";
    case Dimension::Readable: return "readable";
    case Dimension::Transferable: return "transferable";
    case Dimension::Accurate: return "accurate";
    case Dimension::Reusable: return "reusable";
    case Dimension::Modifiable: return "modifiable";
    }
    return "?";
}

std::optional<Dimension> parse_dimension(std::string_view text) noexcept {
    for (auto d : kAllDimensions)
        if (names_equal(text, to_string(d))) return d;
    return std::nullopt;
}

const std::vector<RuleInfo>& rule_catalog() {
    using D = Dimension;
    static const std::vector<RuleInfo> catalog = {
        {RuleId::R0, "R0", "FormulaSyntax", {D::Accurate}},
        {RuleId::R1, "R1", "ModulesPresent", {D::Readable, D::Transferable}},
        {RuleId::R2, "R2", "ModuleCohesion", {D::Readable, D::Modifiable}},
        {RuleId::R3, "R3", "InputsSeparated", {D::SuitableForAnalysis, D::Reusable}},
        {RuleId::R4, "R4", "OutputsGrouped", {D::SuitableForAnalysis, D::Transferable}},
        {RuleId::R5, "R5", "CalculatorDesign", {D::SuitableForAnalysis}},
        // Inputs -> Reports is permitted: reports link to cells in both Inputs and Computations.
        {RuleId::R6, "R6", "FlowDirection", {D::Accurate, D::Modifiable}},
        {RuleId::R7, "R7", "NoCircularity", {D::Accurate}},
        {RuleId::R8, "R8", "InputsModuleDiscipline", {D::Reusable, D::Accurate}},
        {RuleId::R9, "R9", "ReportsTrivial", {D::Readable, D::Accurate}},
        {RuleId::R10, "R10", "ReportsLinkSources", {D::Transferable}},
        {RuleId::R11, "R11", "DomainApplicability", {}},
        {RuleId::R12, "R12", "EchoDetection", {}},
    };
    return catalog;
}

const RuleInfo& rule_info(RuleId id) { return rule_catalog()[static_cast<std::size_t>(id)]; }

std::string_view to_string(RuleId id) noexcept { return rule_catalog()[static_cast<std::size_t>(id)].code; }

std::optional<RuleId> parse_rule_id(std::string_view text) noexcept {
    for (const auto& r : rule_catalog())
        if (names_equal(text, r.code) || names_equal(text, r.name)) return r.id;
    return std::nullopt;
}

std::set<RuleId> all_rules() {
    std::set<RuleId> out;
    for (const auto& r : rule_catalog()) out.insert(r.id);
    return out;
}

std::string to_string(const Location& loc) {
    if (const auto* c = std::get_if<CellAddress>(&loc)) return to_string(*c);
    if (const auto* r = std::get_if<Region>(&loc)) return to_string(*r);
    return "workbook";
}

Location parse_location(std::string_view text) {
    if (text == "workbook") return std::monostate{};
    auto prefix = split_sheet_prefix(text);
    if (!prefix.sheet) throw AddressError("location '" + std::string(text) + "' has no sheet");
    if (prefix.rest.find(':') != std::string_view::npos || prefix.rest == "*") return parse_region(text);
    return parse_a1(text, *prefix.sheet);
}

namespace {

struct LocationKey {
    std::size_t kind;  // 0 workbook, 1 cell, 2 region
    const std::string* sheet = nullptr;
    std::int32_t row = 0;
    std::int32_t column = 0;
};

LocationKey key_of(const Location& loc) {
    if (const auto* c = std::get_if<CellAddress>(&loc)) return {1, &c->sheet, c->row, c->column};
    if (const auto* r = std::get_if<Region>(&loc)) {
        auto rect = r->rect.value_or(Rect{});
        return {2, &r->sheet, rect.first_row, rect.first_column};
    }
    return {0};
}

std::weak_ordering compare_locations(const Location& a, const Location& b) {
    auto ka = key_of(a), kb = key_of(b);
    if ((ka.kind == 0) != (kb.kind == 0)) return ka.kind == 0 ? std::weak_ordering::less : std::weak_ordering::greater;
    if (ka.kind == 0) return std::weak_ordering::equivalent;
    if (auto c = compare_names(*ka.sheet, *kb.sheet); c != 0) return c;
    if (auto c = ka.row <=> kb.row; c != 0) return c;
    if (auto c = ka.column <=> kb.column; c != 0) return c;
    if (auto c = ka.kind <=> kb.kind; c != 0) return c;
    if (ka.kind == 2) {
        const auto& ra = std::get<Region>(a).rect;
        const auto& rb = std::get<Region>(b).rect;
        if (ra != rb) return ra < rb ? std::weak_ordering::less : std::weak_ordering::greater;
    }
    return std::weak_ordering::equivalent;
}

}  // namespace

bool finding_less(const Finding& a, const Finding& b) {
    if (a.rule != b.rule) return a.rule < b.rule;
    if (auto c = compare_locations(a.location, b.location); c != 0) return c < 0;
    if (a.message != b.message) return a.message < b.message;
    return a.severity > b.severity;
}

std::size_t QualityReport::count(Severity at_least) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [&](const Finding& f) { return f.severity >= at_least; }));
}

std::size_t QualityReport::count(RuleId rule, std::optional<Severity> severity) const noexcept {
    return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(), [&](const Finding& f) {
        return f.rule == rule && (!severity || f.severity == *severity);
    }));
}

bool flow_allowed(ModuleKind from, ModuleKind to) noexcept {
    if (from == to) return true;
    TopModule tf = top_level(from), tt = top_level(to);
    if (tf == TopModule::Inputs)
        return tt != TopModule::Inputs || to == ModuleKind::InputPreProcessing;
    return tf == TopModule::Computations && tt == TopModule::Reports;
}

DimensionScores score(const std::vector<Finding>& findings, const AnalyzerConfig& config) {
    std::array<long long, kDimensionCount> totals{};
    for (const auto& f : findings)
        for (auto d : f.dimensions) totals[static_cast<std::size_t>(d)] += config.penalty_for(f.severity);
    DimensionScores out{};
    for (std::size_t i = 0; i < kDimensionCount; ++i) out[i] = static_cast<int>(std::max(0LL, 100 - totals[i]));
    return out;
}

namespace {

std::string format_fraction(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", value);
    return buf;
}

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f%%", fraction * 100.0);
    return buf;
}

class RuleRunner {
public:
    RuleRunner(const RuleContext& ctx, const AnalyzerConfig& config) : ctx_(ctx), config_(config) {
        labels_.reserve(ctx.graph.size());
        for (NodeId id = 0; id < ctx.graph.size(); ++id) labels_.push_back(ctx.modules.module_of(ctx.graph.address(id)));
        for (const auto& sheet : ctx.workbook.sheets())
            for (const auto& [key, cell] : sheet.cells)
                if (auto label = ctx.modules.module_of(cell.address)) present_.insert(top_level(*label));
        find_echoes();
    }

    QualityReport run() {
        auto enabled = [&](RuleId id) { return config_.enabled.count(id) != 0; };
        if (enabled(RuleId::R0)) r0_syntax();
        if (enabled(RuleId::R1)) r1_modules_present();
        if (enabled(RuleId::R2)) r2_cohesion();
        if (enabled(RuleId::R3)) r3_inputs_separated();
        if (enabled(RuleId::R4)) r4_outputs_grouped();
        if (enabled(RuleId::R5)) r5_calculator_design();
        if (enabled(RuleId::R6)) r6_flow_direction();
        if (enabled(RuleId::R7)) r7_no_circularity();
        if (enabled(RuleId::R8)) r8_inputs_discipline();
        if (enabled(RuleId::R9)) r9_reports_trivial();
        if (enabled(RuleId::R10)) r10_reports_link_sources();
        Applicability app = applicability();
        if (enabled(RuleId::R11) && !app.analytical) {
            std::string reasons;
            for (const auto& r : app.reasons) reasons += (reasons.empty() ? "" : "; ") + r;
            add(RuleId::R11, Severity::Info, std::monostate{}, "likely not an analytical spreadsheet model: " + reasons);
        }
        if (enabled(RuleId::R12)) r12_echoes();

        QualityReport report;
        std::sort(findings_.begin(), findings_.end(), finding_less);
        report.findings = std::move(findings_);
        report.scores = score(report.findings, config_);
        report.applicability = std::move(app);
        report.structured_design_pass = std::none_of(report.findings.begin(), report.findings.end(), [](const Finding& f) {
            return f.severity == Severity::Error &&
                   (f.rule == RuleId::R1 || f.rule == RuleId::R3 || f.rule == RuleId::R6 || f.rule == RuleId::R7);
        });
        return report;
    }

private:
    void add(RuleId rule, Severity severity, Location loc, std::string message) {
        findings_.push_back({rule, severity, std::move(loc), std::move(message), rule_info(rule).dimensions,
                             config_.penalty_for(severity)});
    }

    ModuleLabel label_of(const CellAddress& addr) const { return ctx_.modules.module_of(addr); }
    CellRole role_of(const CellAddress& addr) const { return ctx_.roles.at(addr); }

    static bool in_top(const ModuleLabel& label, TopModule top) { return label && top_level(*label) == top; }

    template <typename Fn>
    void for_each_cell(Fn&& fn) const {
        for (const auto& sheet : ctx_.workbook.sheets())
            for (const auto& [key, cell] : sheet.cells) fn(cell, label_of(cell.address));
    }

    // Pure-link formulas in Computations whose single precedent sits in another module.
    void find_echoes() {
        for_each_cell([&](const Cell& cell, const ModuleLabel& label) {
            if (!cell.is_formula() || !in_top(label, TopModule::Computations)) return;
            const FormulaAst* ast = ctx_.formulas.find(cell.address);
            if (ast == nullptr || !pure_link_target(*ast)) return;
            auto id = ctx_.graph.find(cell.address);
            const auto& prec = ctx_.graph.precedents(*id);
            if (prec.size() != 1) return;
            const ModuleLabel& source = labels_[prec.front()];
            if (!in_top(source, TopModule::Computations)) echoes_.emplace(cell.address, prec.front());
        });
    }

    void r0_syntax() {
        for (const auto& f : ctx_.formulas.failures)
            add(RuleId::R0, Severity::Warning, f.cell,
                "formula does not parse (" + f.message + "); its references are not analyzed");
    }

    void r1_modules_present() {
        for (auto top : {TopModule::Inputs, TopModule::Computations, TopModule::Reports})
            if (!present_.count(top))
                add(RuleId::R1, Severity::Error, std::monostate{},
                    "no cells are assigned to the " + std::string(to_string(top)) + " module");
    }

    void r2_cohesion() {
        struct Tally {
            std::size_t dominant = 0, total = 0;
        };
        std::map<TopModule, Tally> tally;
        for_each_cell([&](const Cell& cell, const ModuleLabel& label) {
            if (!label) return;
            CellRole role = role_of(cell.address);
            switch (top_level(*label)) {
            case TopModule::Inputs:
                if (*label == ModuleKind::InputPreProcessing || role == CellRole::Label) return;
                ++tally[TopModule::Inputs].total;
                if (!cell.is_formula()) ++tally[TopModule::Inputs].dominant;
                break;
            case TopModule::Computations:
                if (role == CellRole::Label || echoes_.count(cell.address)) return;
                ++tally[TopModule::Computations].total;
                if (cell.is_formula()) ++tally[TopModule::Computations].dominant;
                break;
            case TopModule::Reports: {
                ++tally[TopModule::Reports].total;
                const FormulaAst* ast = ctx_.formulas.find(cell.address);
                if (role == CellRole::Label || (ast && is_trivial(*ast, config_.trivial_functions)))
                    ++tally[TopModule::Reports].dominant;
                break;
            }
            }
        });
        static const char* const kind_of[] = {"constants", "formulas", "labels or trivial formulas"};
        for (const auto& [top, t] : tally) {
            if (t.total == 0) continue;
            double fraction = static_cast<double>(t.dominant) / static_cast<double>(t.total);
            if (fraction >= config_.cohesion_threshold) continue;
            add(RuleId::R2, Severity::Warning, std::monostate{},
                std::string(to_string(top)) + " module is " + percent(fraction) + " " +
                    kind_of[static_cast<std::size_t>(top)] + " (" + std::to_string(t.dominant) + " of " +
                    std::to_string(t.total) + " cells), below the " + percent(config_.cohesion_threshold) +
                    " cohesion threshold");
        }
    }

    void r3_inputs_separated() {
        // SourceData formulas belong to R8 when that rule runs.
        bool r8 = config_.enabled.count(RuleId::R8) && ctx_.modules.has_input_submodules();
        for_each_cell([&](const Cell& cell, const ModuleLabel& label) {
            if (cell.is_formula() && in_top(label, TopModule::Inputs) && *label != ModuleKind::InputPreProcessing) {
                if (r8 && *label == ModuleKind::SourceData) return;
                add(RuleId::R3, Severity::Error, cell.address,
                    "formula in the " + display_name(label) + " module; inputs should hold values only");
            } else if (!cell.is_formula() && in_top(label, TopModule::Computations) &&
                       role_of(cell.address) == CellRole::Input) {
                add(RuleId::R3, Severity::Error, cell.address,
                    "input value stored in the Computations module; move it to Inputs");
            }
        });
    }

    void r4_outputs_grouped() {
        if (!present_.count(TopModule::Reports)) return;
        for_each_cell([&](const Cell& cell, const ModuleLabel& label) {
            if (in_top(label, TopModule::Computations) && role_of(cell.address) == CellRole::Output)
                add(RuleId::R4, Severity::Warning, cell.address,
                    "final result left in the Computations module; link it from Reports");
        });
    }

    // Row-major scan of each sheet over input constants and Computations
    // formulas. An input that follows a formula is a re-entry; with at least
    // one re-entry every input on the sheet takes part in the interleaving.
    void r5_calculator_design() {
        for (const auto& sheet : ctx_.workbook.sheets()) {
            std::size_t inputs = 0, reentries = 0;
            bool last_formula = false;
            std::optional<CellAddress> first_reentry;
            for (const auto& [key, cell] : sheet.cells) {
                if (cell.is_formula()) {
                    if (!in_top(label_of(cell.address), TopModule::Computations)) continue;
                    last_formula = true;
                } else if (role_of(cell.address) == CellRole::Input) {
                    ++inputs;
                    if (last_formula) {
                        ++reentries;
                        if (!first_reentry) first_reentry = cell.address;
                    }
                    last_formula = false;
                }
            }
            if (reentries == 0 || inputs < config_.interleaving_min) continue;
            add(RuleId::R5, Severity::Warning, *first_reentry,
                std::to_string(inputs) + " input cells on sheet " + quote_sheet_name(sheet.name) +
                    " are interleaved with calculations (" + std::to_string(reentries) +
                    " interleaving" + (reentries == 1 ? "" : "s") + ")");
        }
    }

    void r6_flow_direction() {
        for (const auto& e : ctx_.quotient.edges) {
            const CellAddress& from = ctx_.graph.address(e.witness.from);
            const CellAddress& to = ctx_.graph.address(e.witness.to);
            std::string detail = " (" + std::to_string(e.count) + " reference" + (e.count == 1 ? "" : "s") +
                                 ", e.g. " + to_string(to) + " uses " + to_string(from) + ")";
            std::string flow = display_name(e.from) + " -> " + display_name(e.to);
            if (!e.from || !e.to)
                add(RuleId::R6, Severity::Warning, to, "flow " + flow + " cannot be certified" + detail);
            else if (!flow_allowed(*e.from, *e.to))
                add(RuleId::R6, Severity::Error, to, "flow " + flow + " is against the permitted direction" + detail);
        }
    }

    void r7_no_circularity() {
        for (const auto& scc : ctx_.graph.sccs()) {
            std::string members;
            for (std::size_t i = 0; i < scc.size() && i < 10; ++i)
                members += (i ? ", " : "") + to_string(ctx_.graph.address(scc[i]));
            if (scc.size() > 10) members += ", ...";
            add(RuleId::R7, Severity::Error, ctx_.graph.address(scc.front()),
                "circular reference among " + std::to_string(scc.size()) + " cell" + (scc.size() == 1 ? "" : "s") +
                    ": " + members);
        }
        for (const auto& b : ctx_.graph.blind_spots())
            add(RuleId::R7, Severity::Warning, b.owner,
                std::string(to_string(b.reason)) + " reference cannot be traced statically: " + b.text);
    }

    void r8_inputs_discipline() {
        if (!ctx_.modules.has_input_submodules()) {
            add(RuleId::R8, Severity::Info, std::monostate{}, "skipped: no Inputs sub-modules are mapped");
            return;
        }
        std::map<CellAddress, std::string> outside;
        for (const auto& b : ctx_.graph.blind_spots())
            if (b.reason == BlindSpotReason::ExternalWorkbook)
                outside.try_emplace(b.owner, b.text + " in another workbook");
            else if (b.reason == BlindSpotReason::UnknownSheet)
                outside.try_emplace(b.owner, "sheet " + b.text + ", which is not in the workbook");
        for_each_cell([&](const Cell& cell, const ModuleLabel& label) {
            if (!cell.is_formula() || !label) return;
            if (*label == ModuleKind::SourceData) {
                add(RuleId::R8, Severity::Error, cell.address,
                    "formula in Inputs/SourceData; source data should be kept in its original form");
                return;
            }
            if (*label != ModuleKind::InputPreProcessing) return;
            std::optional<std::string> culprit;
            if (auto id = ctx_.graph.find(cell.address)) {
                for (NodeId p : ctx_.graph.precedents(*id)) {
                    if (!in_top(labels_[p], TopModule::Inputs)) {
                        culprit = to_string(ctx_.graph.address(p)) + " in " + display_name(labels_[p]);
                        break;
                    }
                }
            }
            if (!culprit)
                if (auto it = outside.find(cell.address); it != outside.end()) culprit = it->second;
            if (culprit)
                add(RuleId::R8, Severity::Error, cell.address,
                    "pre-processing formula reads " + *culprit + ", outside the Inputs module");
        });
    }

    void r9_reports_trivial() {
        for_each_cell([&](const Cell& cell, const ModuleLabel& label) {
            if (!cell.is_formula() || !in_top(label, TopModule::Reports)) return;
            const FormulaAst* ast = ctx_.formulas.find(cell.address);
            if (ast != nullptr && !is_trivial(*ast, config_.trivial_functions))
                add(RuleId::R9, Severity::Error, cell.address,
                    "report cell computes =" + render_formula(*ast) + "; reports should only link or format");
        });
    }

    void r10_reports_link_sources() {
        for_each_cell([&](const Cell& cell, const ModuleLabel& label) {
            if (!cell.is_formula() || !in_top(label, TopModule::Reports)) return;
            const FormulaAst* ast = ctx_.formulas.find(cell.address);
            auto id = ctx_.graph.find(cell.address);
            if (ast == nullptr || !id) return;
            bool link = pure_link_target(*ast).has_value();
            for (NodeId p : ctx_.graph.precedents(*id)) {
                const CellAddress& src = ctx_.graph.address(p);
                if (!labels_[p]) {
                    add(RuleId::R10, Severity::Warning, cell.address,
                        "report links " + to_string(src) + ", which belongs to no module");
                    return;
                }
                if (!link && in_top(labels_[p], TopModule::Reports)) {
                    add(RuleId::R10, Severity::Warning, cell.address,
                        "report computes on another report cell " + to_string(src) +
                            "; link the Inputs or Computations source instead");
                    return;
                }
            }
        });
    }

    Applicability applicability() const {
        Applicability app;
        const auto& features = ctx_.workbook.features();
        if (features.has_pivot_tables) app.reasons.emplace_back("workbook contains pivot tables");
        if (features.has_autofilters) app.reasons.emplace_back("workbook uses autofilters");
        std::size_t cells = ctx_.workbook.cell_count();
        double density =
            cells == 0 ? 0.0 : static_cast<double>(ctx_.workbook.formula_count()) / static_cast<double>(cells);
        if (density < config_.density_threshold)
            app.reasons.push_back("formula density " + format_fraction(density) + " is below " +
                                  format_fraction(config_.density_threshold));
        app.analytical = app.reasons.empty();
        return app;
    }

    void r12_echoes() {
        for (const auto& [addr, source] : echoes_)
            add(RuleId::R12, Severity::Info, addr,
                "echo of " + to_string(ctx_.graph.address(source)) + " from " + display_name(labels_[source]));
    }

    const RuleContext& ctx_;
    const AnalyzerConfig& config_;
    std::vector<ModuleLabel> labels_;
    std::set<TopModule> present_;
    std::map<CellAddress, NodeId> echoes_;
    std::vector<Finding> findings_;
};

}  // namespace

QualityReport run_rules(const RuleContext& ctx, const AnalyzerConfig& config) { return RuleRunner(ctx, config).run(); }

}  // namespace ssqa
