#include "ssqa/report.hpp"

#include <cstdio>
#include <json.hpp>
#include <map>

#include "ssqa/error.hpp"

namespace ssqa {

using Json = nlohmann::ordered_json;

OutputDocument make_document(const Analysis& analysis) {
    OutputDocument doc;
    doc.tool_version = SSQA_VERSION;
    doc.input_path = analysis.input_path;
    doc.applicability = analysis.report.applicability;
    doc.provenance = analysis.modules.provenance() == MapProvenance::Manifest ? "manifest" : "inferred";
    for (const auto& a : analysis.modules.assignments())
        doc.assignments.push_back({to_string(a.region), std::string(module_path(a.kind)), a.confidence});
    doc.findings = analysis.report.findings;
    doc.scores = analysis.report.scores;
    doc.structured_design_pass = analysis.report.structured_design_pass;
    doc.warnings = analysis.warnings;
    return doc;
}

std::string emit_json(const OutputDocument& doc) {
    Json j;
    j["schema-version"] = doc.schema_version;
    j["tool-version"] = doc.tool_version;
    j["input-path"] = doc.input_path;
    j["applicability"] = {{"verdict", doc.applicability.analytical ? "analytical" : "not-analytical"},
                          {"reasons", doc.applicability.reasons}};
    Json assignments = Json::array();
    for (const auto& a : doc.assignments)
        assignments.push_back({{"region", a.region}, {"module", a.module}, {"confidence", a.confidence}});
    j["module-map"] = {{"provenance", doc.provenance}, {"assignments", std::move(assignments)}};
    Json findings = Json::array();
    for (const auto& f : doc.findings) {
        Json dims = Json::array();
        for (auto d : f.dimensions) dims.push_back(to_string(d));
        findings.push_back({{"rule-id", to_string(f.rule)},
                            {"severity", to_string(f.severity)},
                            {"location", to_string(f.location)},
                            {"message", f.message},
                            {"dimensions", std::move(dims)},
                            {"penalty", f.penalty}});
    }
    j["findings"] = std::move(findings);
    Json scores = Json::object();
    for (auto d : kAllDimensions) scores[std::string(to_string(d))] = doc.scores[static_cast<std::size_t>(d)];
    j["dimension-scores"] = std::move(scores);
    j["structured-design-verdict"] = doc.structured_design_pass ? "pass" : "fail";
    Json warnings = Json::array();
    for (const auto& w : doc.warnings) warnings.push_back({{"location", w.location}, {"message", w.message}});
    j["warnings"] = std::move(warnings);
    return j.dump(2) + "\n";
}

namespace {

template <typename T, typename Parse>
T parse_enum(const Json& j, Parse parse, std::string_view what) {
    auto text = j.get<std::string>();
    auto value = parse(text);
    if (!value) throw Error("unknown " + std::string(what) + " '" + text + "'");
    return *value;
}

}  // namespace

OutputDocument parse_json(std::string_view text) {
    try {
        Json j = Json::parse(text);
        OutputDocument doc;
        doc.schema_version = j.at("schema-version").get<int>();
        if (doc.schema_version != kSchemaVersion)
            throw Error("unsupported schema-version " + std::to_string(doc.schema_version));
        doc.tool_version = j.at("tool-version").get<std::string>();
        doc.input_path = j.at("input-path").get<std::string>();
        const auto& app = j.at("applicability");
        auto verdict = app.at("verdict").get<std::string>();
        if (verdict != "analytical" && verdict != "not-analytical") throw Error("unknown verdict '" + verdict + "'");
        doc.applicability.analytical = verdict == "analytical";
        doc.applicability.reasons = app.at("reasons").get<std::vector<std::string>>();
        const auto& map = j.at("module-map");
        doc.provenance = map.at("provenance").get<std::string>();
        for (const auto& a : map.at("assignments"))
            doc.assignments.push_back(
                {a.at("region").get<std::string>(), a.at("module").get<std::string>(), a.at("confidence").get<double>()});
        for (const auto& f : j.at("findings")) {
            Finding out{};
            out.rule = parse_enum<RuleId>(f.at("rule-id"), parse_rule_id, "rule");
            out.severity = parse_enum<Severity>(f.at("severity"), parse_severity, "severity");
            out.location = parse_location(f.at("location").get<std::string>());
            out.message = f.at("message").get<std::string>();
            for (const auto& d : f.at("dimensions"))
                out.dimensions.push_back(parse_enum<Dimension>(d, parse_dimension, "dimension"));
            out.penalty = f.at("penalty").get<int>();
            doc.findings.push_back(std::move(out));
        }
        const auto& scores = j.at("dimension-scores");
        for (auto d : kAllDimensions)
            doc.scores[static_cast<std::size_t>(d)] = scores.at(std::string(to_string(d))).get<int>();
        auto sd = j.at("structured-design-verdict").get<std::string>();
        if (sd != "pass" && sd != "fail") throw Error("unknown structured-design-verdict '" + sd + "'");
        doc.structured_design_pass = sd == "pass";
        for (const auto& w : j.at("warnings"))
            doc.warnings.push_back({w.at("location").get<std::string>(), w.at("message").get<std::string>()});
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed report JSON: ") + e.what());
    }
}

namespace {

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

}  // namespace

std::string emit_text(const OutputDocument& doc) {
    std::string out = "ssqa " + doc.tool_version + " report for " + doc.input_path + "\n";
    if (doc.applicability.analytical) {
        out += "Applicability: analytical spreadsheet model\n";
    } else {
        out += "Applicability: likely not an analytical spreadsheet model\n";
        for (const auto& r : doc.applicability.reasons) out += "  - " + r + "\n";
    }

    out += "\nModule map (" + doc.provenance + ")\n";
    std::size_t width = 6;
    for (const auto& a : doc.assignments) width = std::max(width, a.region.size());
    out += "  " + pad("Region", width + 2) + pad("Module", 24) + "Confidence\n";
    for (const auto& a : doc.assignments) {
        char conf[16];
        std::snprintf(conf, sizeof conf, "%.2f", a.confidence);
        out += "  " + pad(a.region, width + 2) + pad(a.module, 24) + conf + "\n";
    }
    if (doc.assignments.empty()) out += "  (no assignments)\n";

    std::map<Severity, std::size_t> counts;
    for (const auto& f : doc.findings) ++counts[f.severity];
    out += "\nFindings: " + std::to_string(counts[Severity::Error]) + " error, " +
           std::to_string(counts[Severity::Warning]) + " warning, " + std::to_string(counts[Severity::Info]) +
           " info\n";
    std::optional<RuleId> current;
    for (const auto& f : doc.findings) {
        if (f.rule != current) {
            current = f.rule;
            const auto& info = rule_info(f.rule);
            out += "  " + std::string(info.code) + " " + std::string(info.name) + "\n";
        }
        out += "    " + pad(std::string(to_string(f.severity)), 9) + pad(to_string(f.location), 14) + f.message;
        if (f.penalty > 0) out += " [-" + std::to_string(f.penalty) + "]";
        out += "\n";
    }

    out += "\nDimension scores\n";
    for (auto d : kAllDimensions)
        out += "  " + pad(std::string(to_string(d)), 24) + std::to_string(doc.scores[static_cast<std::size_t>(d)]) +
               "\n";

    if (!doc.warnings.empty()) {
        out += "\nNotes\n";
        for (const auto& w : doc.warnings) out += "  " + w.location + ": " + w.message + "\n";
    }

    out += "\nStructured design: " + std::string(doc.structured_design_pass ? "pass" : "fail") + "\n";
    return out;
}

}  // namespace ssqa
