#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ssqa/analyzer.hpp"
#include "ssqa/ingest.hpp"
#include "ssqa/rules.hpp"

namespace ssqa {

inline constexpr int kSchemaVersion = 1;

struct OutputAssignment {
    std::string region;
    std::string module;  // manifest spelling, e.g. "inputs.assumptions"
    double confidence = 1.0;
    friend bool operator==(const OutputAssignment&, const OutputAssignment&) = default;
};

/// What the CLI emits; the JSON form parses back to an equal document.
struct OutputDocument {
    int schema_version = kSchemaVersion;
    std::string tool_version;
    std::string input_path;
    Applicability applicability;
    std::string provenance;  // "manifest" or "inferred"
    std::vector<OutputAssignment> assignments;
    std::vector<Finding> findings;
    DimensionScores scores{100, 100, 100, 100, 100, 100};
    bool structured_design_pass = true;
    std::vector<IngestWarning> warnings;

    friend bool operator==(const OutputDocument&, const OutputDocument&) = default;
};

OutputDocument make_document(const Analysis& analysis);

/// Stable field order, addresses in sheet-qualified A1, integer scores.
std::string emit_json(const OutputDocument& doc);
/// Throws Error on malformed input or unknown enumerators.
OutputDocument parse_json(std::string_view text);

/// Header, module map table, findings grouped by rule, score table, verdict.
std::string emit_text(const OutputDocument& doc);

}  // namespace ssqa
