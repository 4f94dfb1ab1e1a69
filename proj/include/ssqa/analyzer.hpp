#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ssqa/graph.hpp"
#include "ssqa/ingest.hpp"
#include "ssqa/module_map.hpp"
#include "ssqa/rules.hpp"
#include "ssqa/workbook.hpp"

namespace ssqa {

/// Every intermediate product of one analysis, kept for reporting and tests.
struct Analysis {
    std::string input_path;
    Workbook workbook;
    std::vector<IngestWarning> warnings;  // ingest warnings, then analysis notes
    ParsedFormulas formulas;
    DepGraph graph;
    RoleMap roles;
    ModuleMap modules;
    ModuleQuotient quotient;
    QualityReport report;
};

/// Parse, graph, classify, map (manifest if given, else inference), run rules.
/// A manifest is bound against the workbook and may throw ManifestError.
Analysis analyze(IngestReport ingest, const std::optional<ModuleMap>& manifest, const AnalyzerConfig& config,
                 std::string input_path = {});

Analysis analyze_file(const std::filesystem::path& path, const std::optional<std::filesystem::path>& manifest,
                      const AnalyzerConfig& config);

}  // namespace ssqa
