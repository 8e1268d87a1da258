#include "csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace nfactor::cli {

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool row_started = false;

    const auto end_field = [&] {
        row.push_back(field);
        field.clear();
    };
    const auto end_row = [&] {
        if (row_started || !field.empty()) {
            end_field();
            const bool all_empty =
                row.size() == 1 && row[0].find_first_not_of(" \t") == std::string::npos;
            if (!all_empty) rows.push_back(row);
        }
        row.clear();
        row_started = false;
    };

    char c;
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get(c);
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"': quoted = true; row_started = true; break;
            case ',': end_field(); row_started = true; break;
            case '\r': break;
            case '\n': end_row(); break;
            default: field.push_back(c); row_started = true;
        }
    }
    end_row();
    return rows;
}

std::vector<std::vector<std::string>> parse_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path);
    return parse_csv(in);
}

std::optional<double> parse_cell(const std::string& cell) {
    std::size_t begin = cell.find_first_not_of(" \t");
    if (begin == std::string::npos) return std::nullopt;
    std::size_t end = cell.find_last_not_of(" \t") + 1;
    const std::string token = cell.substr(begin, end - begin);
    if (token.empty() || token == "NA" || token == "NaN" || token == "nan" ||
        token == ".")
        return std::nullopt;
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw InvalidInput("cell '" + token + "' is not numeric");
    return value;
}

NumericTable read_numeric_csv(const std::string& path, bool transpose) {
    const auto rows = parse_csv_file(path);
    if (rows.empty()) throw InvalidInput(path + ": empty CSV");

    // Header detection: a first row with any non-numeric cell is a header.
    std::size_t first_data = 0;
    std::vector<std::string> header;
    bool header_detected = false;
    for (const auto& cell : rows[0]) {
        try {
            if (!parse_cell(cell).has_value()) header_detected = true;
        } catch (const InvalidInput&) {
            header_detected = true;
        }
        if (header_detected) break;
    }
    if (header_detected) {
        header = rows[0];
        first_data = 1;
        if (rows.size() == 1) throw InvalidInput(path + ": header but no data rows");
    }

    const std::size_t n = rows.size() - first_data;
    const std::size_t p = rows[first_data].size();
    const Index n_rows = Index(n);
    const Index n_cols = Index(p);
    Matrix values(n_rows, n_cols);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = rows[first_data + r];
        const std::size_t file_row = first_data + r + 1;
        if (row.size() != p)
            throw InvalidInput(path + ": row " + std::to_string(file_row) + " has " +
                               std::to_string(row.size()) + " cells, expected " +
                               std::to_string(p));
        for (std::size_t c = 0; c < p; ++c) {
            std::optional<double> v;
            try {
                v = parse_cell(row[c]);
            } catch (const InvalidInput& e) {
                throw InvalidInput(path + ": row " + std::to_string(file_row) +
                                   ", column " + std::to_string(c + 1) + ": " + e.what());
            }
            if (!v)
                throw InvalidInput(path + ": missing value at row " +
                                   std::to_string(file_row) + ", column " +
                                   std::to_string(c + 1));
            values(Index(r), Index(c)) = *v;
        }
    }

    NumericTable table;
    table.header = std::move(header);
    table.values = transpose ? values.transpose() : values;
    return table;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string& cell = cells[i];
        const bool needs_quotes = cell.find_first_of(",\"\n") != std::string::npos;
        if (i) out << ',';
        if (needs_quotes) {
            out << '"';
            for (char c : cell) {
                if (c == '"') out << '"';
                out << c;
            }
            out << '"';
        } else {
            out << cell;
        }
    }
    out << '\n';
}

}  // namespace nfactor::cli
