#include "liquidsim/csv.hpp"

#include <cstdio>
#include <fstream>

#include "liquidsim/errors.hpp"

namespace liquidsim {

std::string format_csv_cell(const CsvCell& cell) {
    if (std::holds_alternative<double>(cell)) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(cell));
        return buf;
    }
    if (std::holds_alternative<std::int64_t>(cell))
        return std::to_string(std::get<std::int64_t>(cell));
    return std::get<std::string>(cell);
}

CsvArtifact emit_csv(const std::vector<CsvRow>& rows, const std::vector<std::string>& schema,
                     const std::string& path) {
    if (schema.empty()) throw InvalidParameter("csv schema must be non-empty");
    std::ofstream out(path, std::ios::binary);  // binary: no platform newline translation
    if (!out) throw IoError("cannot write: " + path);

    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (i) out << ',';
        out << schema[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != schema.size())
            throw InvalidParameter("csv row width does not match schema");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_csv_cell(row[i]);
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw IoError("write failed: " + path);

    CsvArtifact artifact;
    artifact.path = path;
    artifact.schema = schema;
    artifact.row_count = rows.size();
    return artifact;
}

}  // namespace liquidsim
