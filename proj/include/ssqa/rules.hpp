#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ssqa/address.hpp"
#include "ssqa/graph.hpp"
#include "ssqa/module_map.hpp"

namespace ssqa {

enum class Severity : std::uint8_t { Info, Warning, Error };
std::string_view to_string(Severity s) noexcept;
std::optional<Severity> parse_severity(std::string_view text) noexcept;

/// The six quality dimensions every finding is charged against.
enum class Dimension : std::uint8_t { SuitableForAnalysis, Readable, Transferable, Accurate, Reusable, Modifiable };
inline constexpr std::size_t kDimensionCount = 6;
inline constexpr std::array<Dimension, kDimensionCount> kAllDimensions = {
    Dimension::SuitableForAnalysis, Dimension::Readable, Dimension::Transferable,
    Dimension::Accurate,            Dimension::Reusable, Dimension::Modifiable};
std::string_view to_string(Dimension d) noexcept;
std::optional<Dimension> parse_dimension(std::string_view text) noexcept;

/// R0 reports formulas the parser rejected; R1-R12 are the structural rules.
enum class RuleId : std::uint8_t { R0, R1, R2, R3, R4, R5, R6, R7, R8, R9, R10, R11, R12 };
inline constexpr std::size_t kRuleCount = 13;

struct RuleInfo {
    RuleId id;
    std::string_view code;  // "R6"
    std::string_view name;  // "FlowDirection"
    std::vector<Dimension> dimensions;
};

const std::vector<RuleInfo>& rule_catalog();
const RuleInfo& rule_info(RuleId id);
std::string_view to_string(RuleId id) noexcept;
std::optional<RuleId> parse_rule_id(std::string_view text) noexcept;
std::set<RuleId> all_rules();
/// "R1, R6,r7" → {R1, R6, R7}. Throws ConfigError naming an unknown id.
std::set<RuleId> parse_rule_list(std::string_view text);

/// Workbook-level (monostate), a single cell, or a region.
using Location = std::variant<std::monostate, CellAddress, Region>;
std::string to_string(const Location& loc);
/// Inverse of to_string(Location); "workbook" is the workbook level.
Location parse_location(std::string_view text);

struct Finding {
    RuleId rule;
    Severity severity;
    Location location;
    std::string message;
    std::vector<Dimension> dimensions;
    int penalty = 0;  // charged to each listed dimension; 0 for Info

    friend bool operator==(const Finding&, const Finding&) = default;
};

/// Rule id, then location (workbook level first, then sheet/row/column), then message.
bool finding_less(const Finding& a, const Finding& b);

using DimensionScores = std::array<int, kDimensionCount>;

struct Applicability {
    bool analytical = true;
    std::vector<std::string> reasons;  // why the workbook looks out of domain
    friend bool operator==(const Applicability&, const Applicability&) = default;
};

struct QualityReport {
    std::vector<Finding> findings;
    DimensionScores scores{100, 100, 100, 100, 100, 100};
    Applicability applicability;
    bool structured_design_pass = true;

    std::size_t count(Severity at_least) const noexcept;
    std::size_t count(RuleId rule, std::optional<Severity> severity = std::nullopt) const noexcept;
    int score(Dimension d) const noexcept { return scores[static_cast<std::size_t>(d)]; }
};

struct AnalyzerConfig {
    int error_penalty = 25;
    int warning_penalty = 10;
    double cohesion_threshold = 0.8;
    double density_threshold = 0.05;
    std::size_t interleaving_min = 2;
    std::uint64_t range_cap = kDefaultRangeCap;
    std::set<std::string> trivial_functions = default_trivial_functions();
    InferenceKeywords keywords;
    std::set<RuleId> enabled = all_rules();

    int penalty_for(Severity s) const noexcept {
        return s == Severity::Error ? error_penalty : s == Severity::Warning ? warning_penalty : 0;
    }
};

/// "key = value" lines, '#' comments. Keys: penalty.error, penalty.warning,
/// threshold.cohesion, threshold.density, threshold.interleaving, range-cap,
/// trivial-functions, keywords.inputs, keywords.computations, keywords.reports,
/// rules. Throws ConfigError with the line number.
AnalyzerConfig parse_config(std::string_view text);
AnalyzerConfig load_config(const std::filesystem::path& path);

/// Everything the rules look at, all derived from one workbook.
struct RuleContext {
    const Workbook& workbook;
    const ParsedFormulas& formulas;
    const DepGraph& graph;
    const RoleMap& roles;
    const ModuleMap& modules;
    const ModuleQuotient& quotient;
};

/// Evaluates every enabled rule. Findings come back sorted by finding_less.
QualityReport run_rules(const RuleContext& ctx, const AnalyzerConfig& config);

/// 100 minus the penalties charged to each dimension, floored at 0.
DimensionScores score(const std::vector<Finding>& findings, const AnalyzerConfig& config);

/// Whether a cross-module flow from → to is permitted.
bool flow_allowed(ModuleKind from, ModuleKind to) noexcept;

}  // namespace ssqa
