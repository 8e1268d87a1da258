#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nfactor/corrmat.hpp"

namespace nfactor::cli {

// RFC-4180-style rows: quoted fields, doubled-quote escapes, CR/LF line
// ends. Fully empty lines are skipped.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

std::vector<std::vector<std::string>> parse_csv_file(const std::string& path);

// Full-token double parse; empty, "NA", "NaN" and "." parse to nullopt.
std::optional<double> parse_cell(const std::string& cell);

struct NumericTable {
    std::vector<std::string> header;  // empty when the file had no header row
    Matrix values;
};

// Reads a complete numeric matrix. The header row is auto-detected (any
// non-numeric first-row cell). Ragged rows, non-numeric cells and missing
// values raise InvalidInput with the 1-based file row/column location.
NumericTable read_numeric_csv(const std::string& path, bool transpose = false);

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace nfactor::cli
