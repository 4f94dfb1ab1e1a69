#include "ssqa/analyzer.hpp"

namespace ssqa {

Analysis analyze(IngestReport ingest, const std::optional<ModuleMap>& manifest, const AnalyzerConfig& config,
                 std::string input_path) {
    Analysis a;
    a.input_path = std::move(input_path);
    a.workbook = std::move(ingest.workbook);
    a.warnings = std::move(ingest.warnings);
    a.formulas = parse_formulas(a.workbook);
    a.graph = build_graph(a.workbook, a.formulas, config.range_cap);
    a.roles = classify(a.workbook, a.graph);
    a.modules = manifest ? bind_manifest(*manifest, a.workbook) : infer_modules(a.workbook, a.roles, config.keywords);
    a.quotient = module_quotient(a.graph, a.modules);
    a.report = run_rules({a.workbook, a.formulas, a.graph, a.roles, a.modules, a.quotient}, config);

    for (const auto& c : a.graph.capped_ranges())
        a.warnings.push_back({to_string(c.owner), "range " + to_string(c.region) + " exceeds the expansion cap of " +
                                                      std::to_string(config.range_cap) +
                                                      " cells; only its stored cells are tracked"});
    return a;
}

Analysis analyze_file(const std::filesystem::path& path, const std::optional<std::filesystem::path>& manifest,
                      const AnalyzerConfig& config) {
    std::optional<ModuleMap> map;
    if (manifest) map = load_manifest(*manifest);
    return analyze(load_workbook(path), map, config, path.string());
}

}  // namespace ssqa
