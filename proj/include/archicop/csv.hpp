#pragma once

// Minimal CSV dialect: comma separator, optional single header row detected by
// a non-numeric field in the first row, LF or CRLF line endings, no quoting.
// Numbers are written with the shortest representation that round-trips.

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "archicop/matrix.hpp"

namespace archicop {

std::string format_double(double x);
/// Parses a full field as a double, locale-independent. Throws ArgumentError.
double parse_double(std::string_view s);
bool try_parse_double(std::string_view s, double& out);

std::vector<std::string_view> split_fields(std::string_view line);

struct CsvTable {
  std::vector<std::string> header;  // empty when the input had none
  std::vector<std::vector<std::string>> rows;
};

/// Reads every non-empty line. All rows must have the same number of fields.
CsvTable read_csv(std::istream& is);

/// Numeric matrix; a header row is skipped when detected.
Matrix read_matrix(std::istream& is);
Matrix read_matrix_file(const std::string& path);

void write_matrix(std::ostream& os, const Matrix& m, const std::vector<std::string>& header = {});

/// Writes to a temporary sibling and renames it over path on success, so a
/// failed writer never leaves a partial file behind.
void write_file_atomic(const std::string& path, const std::function<void(std::ostream&)>& writer);

}  // namespace archicop
