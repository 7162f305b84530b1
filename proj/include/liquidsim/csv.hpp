#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace liquidsim {

using CsvCell = std::variant<double, std::int64_t, std::string>;
using CsvRow = std::vector<CsvCell>;

struct CsvArtifact {
    std::string path;
    std::vector<std::string> schema;
    std::size_t row_count = 0;
};

// Comma-separated output with a header row, full-precision decimal-point
// numbers and newline-terminated records; byte-identical for identical
// inputs.
CsvArtifact emit_csv(const std::vector<CsvRow>& rows, const std::vector<std::string>& schema,
                     const std::string& path);

std::string format_csv_cell(const CsvCell& cell);

}  // namespace liquidsim
