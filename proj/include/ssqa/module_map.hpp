#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssqa/address.hpp"

namespace ssqa {

class Workbook;
enum class CellRole : std::uint8_t;
using RoleMap = std::map<CellAddress, CellRole>;

enum class TopModule : std::uint8_t { Inputs, Computations, Reports };

/// Top-level module, with the Inputs module refined into its sub-modules.
enum class ModuleKind : std::uint8_t {
    SourceData,
    Assumptions,
    DecisionVariables,
    InputPreProcessing,
    UnspecifiedInput,
    Computations,
    Reports,
};

TopModule top_level(ModuleKind kind) noexcept;
bool is_input(ModuleKind kind) noexcept;
/// Manifest spelling: "inputs.source", "inputs", "computations", ...
std::string_view module_path(ModuleKind kind) noexcept;
std::optional<ModuleKind> parse_module_path(std::string_view path) noexcept;
std::string_view to_string(TopModule top) noexcept;
/// "Inputs/Assumptions", "Inputs", "Computations", "Reports".
std::string display_name(ModuleKind kind);
/// "Unassigned" for an empty label.
std::string display_name(const std::optional<ModuleKind>& label);

enum class MapProvenance : std::uint8_t { Manifest, Inferred };

struct ModuleAssignment {
    Region region;
    ModuleKind kind;
    double confidence = 1.0;  // 1.0 for manifest lines
    std::size_t line = 0;     // manifest line, 0 when inferred
};

/// Ordered region → module assignments. On overlap the later assignment wins.
class ModuleMap {
public:
    ModuleMap() = default;
    ModuleMap(std::vector<ModuleAssignment> assignments, MapProvenance provenance)
        : assignments_(std::move(assignments)), provenance_(provenance) {}

    const std::vector<ModuleAssignment>& assignments() const noexcept { return assignments_; }
    MapProvenance provenance() const noexcept { return provenance_; }

    /// Last matching assignment, or nullopt (Unassigned).
    std::optional<ModuleKind> module_of(const CellAddress& addr) const noexcept;
    /// True if any assignment names an Inputs sub-module other than UnspecifiedInput.
    bool has_input_submodules() const noexcept;

private:
    std::vector<ModuleAssignment> assignments_;
    MapProvenance provenance_ = MapProvenance::Manifest;
};

std::optional<ModuleKind> module_of(const ModuleMap& map, const CellAddress& addr) noexcept;

/// Manifest text: "<module-path> = <Sheet!A1:C10>, <Sheet!*>" per line, '#'
/// comments. Throws ManifestError with the line number.
ModuleMap parse_manifest(std::string_view text);
ModuleMap load_manifest(const std::filesystem::path& path);

/// Checks every region's sheet against the workbook and adopts the
/// workbook's sheet spelling. Throws ManifestError on unknown sheets.
ModuleMap bind_manifest(const ModuleMap& map, const Workbook& workbook);

struct InferenceKeywords {
    std::vector<std::string> inputs{"input", "assumption", "data", "source", "decision", "driver"};
    std::vector<std::string> computations{"calc", "model", "working", "engine", "compute"};
    std::vector<std::string> reports{"report", "output", "dashboard", "summary"};
};

inline constexpr double kNameConfidence = 0.9;
inline constexpr double kRoleConfidence = 0.5;
inline constexpr double kRoleMajority = 0.6;

/// Whole-sheet assignments. Sheet names containing a keyword map to that
/// module (Computations, then Inputs, then Reports on ties); other sheets map
/// by their majority cell role.
ModuleMap infer_modules(const Workbook& workbook, const RoleMap& roles, const InferenceKeywords& keywords = {});

}  // namespace ssqa
