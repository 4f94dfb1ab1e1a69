#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ssqa/workbook.hpp"

namespace ssqa {

/// A tolerated oddity met while loading (hidden sheet, array formula, part
/// that is not analyzed). `location` is a part name, cell or line.
struct IngestWarning {
    std::string location;
    std::string message;
    friend bool operator==(const IngestWarning&, const IngestWarning&) = default;
};

struct IngestReport {
    Workbook workbook;
    std::vector<IngestWarning> warnings;
};

/// Plain-text fixture format:
///
///     # comment
///     [sheet: Inputs]
///     B2 = 100
///     B3 = "Revenue"
///     B4 = =B2*2
///     [name: Rate = Inputs!B2]
///     [pivot]
///     [autofilter]
///
/// Payload "=<formula>" is a formula, a double-quoted payload is Text ("" escapes
/// a quote), true/false is Boolean, an error code such as #N/A is an error
/// literal, anything else must be a decimal number.
IngestReport parse_fixture(std::string_view text, const std::string& source_name = "<fixture>");
IngestReport load_fixture(const std::filesystem::path& path);

/// Office Open XML workbook. Cached formula results are ignored; shared
/// formulas are expanded per cell; array formulas anchor at their top-left
/// cell with a warning.
IngestReport load_xlsx(const std::filesystem::path& path);
IngestReport load_xlsx_bytes(std::string bytes, const std::string& source_name = "<xlsx>");

/// Picks the loader by extension: .xlsx/.xlsm → OOXML, anything else → fixture.
IngestReport load_workbook(const std::filesystem::path& path);

}  // namespace ssqa
