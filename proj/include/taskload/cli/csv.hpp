#pragma once

#include <string>
#include <vector>

namespace taskload::cli {

/// Comment lines start with "# " and carry provenance; the first other line is the header.
struct CsvTable {
    std::vector<std::string> comments;  // without the "# " prefix
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;  // 1-based source line of each row, when parsed

    std::size_t line_of(std::size_t row) const { return row < row_lines.size() ? row_lines[row] : row + 2; }

    /// Index of a header column; throws DataError naming the source when absent.
    std::size_t column(const std::string& name, const std::string& source = "csv") const;
};

/// Plain comma-separated cells, no quoting. Throws DataError with
/// "source:line:column" diagnostics on ragged rows or an empty file.
CsvTable parse_csv(const std::string& text, const std::string& source = "csv");
CsvTable read_csv(const std::string& path);
std::string format_csv(const CsvTable& t);

/// Strict number parse of one cell; DataError carries the row/column position.
double parse_cell(const std::string& cell, const std::string& source, std::size_t line, std::size_t col);

/// Shortest text that reads back to the same double.
std::string format_double(double v);

std::string read_file(const std::string& path);
/// Writes to "<path>.tmp" and renames over path.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace taskload::cli
