#include "fredmd.hpp"

#include <cmath>
#include <limits>

#include "csv.hpp"

namespace nfactor::cli {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::vector<double> diff(const std::vector<double>& x) {
    std::vector<double> out(x.size(), kMissing);
    for (std::size_t t = 1; t < x.size(); ++t) out[t] = x[t] - x[t - 1];
    return out;
}

std::vector<double> logs(const std::vector<double>& x) {
    std::vector<double> out(x.size(), kMissing);
    for (std::size_t t = 0; t < x.size(); ++t)
        if (!std::isnan(x[t]) && x[t] > 0.0) out[t] = std::log(x[t]);
    return out;
}

}  // namespace

TransformCode::TransformCode(int c) : code(c) {
    if (c < 1 || c > 7)
        throw InvalidInput("unknown transform code " + std::to_string(c) +
                           " (expected 1..7)");
}

std::vector<double> apply_transform(const std::vector<double>& column,
                                    TransformCode code) {
    switch (code.code) {
        case 1: return column;
        case 2: return diff(column);
        case 3: return diff(diff(column));
        case 4: return logs(column);
        case 5: return diff(logs(column));
        case 6: return diff(diff(logs(column)));
        case 7: {
            std::vector<double> pct(column.size(), kMissing);
            for (std::size_t t = 1; t < column.size(); ++t)
                if (column[t - 1] != 0.0) pct[t] = column[t] / column[t - 1] - 1.0;
            return diff(pct);
        }
    }
    throw InvalidInput("unknown transform code");
}

IngestResult ingest_fredmd(const std::vector<std::vector<std::string>>& rows) {
    if (rows.size() < 4)
        throw InvalidInput("FRED-MD input needs a header row, a transform-code row "
                           "and at least two data rows");
    const auto& header = rows[0];
    const auto& tcode_row = rows[1];
    if (header.size() != tcode_row.size())
        throw InvalidInput("header and transform-code rows differ in width");

    // A non-numeric leading transform cell marks a label column (sasdate).
    std::size_t first_col = 0;
    try {
        if (!parse_cell(tcode_row[0]).has_value()) first_col = 1;
    } catch (const InvalidInput&) {
        first_col = 1;
    }

    const std::size_t width = header.size();
    const std::size_t n_raw = rows.size() - 2;

    std::vector<TransformCode> codes;
    codes.reserve(width - first_col);
    for (std::size_t c = first_col; c < width; ++c) {
        const auto cell = parse_cell(tcode_row[c]);
        if (!cell)
            throw InvalidInput("missing transform code for column " + header[c]);
        const double v = *cell;
        if (v != std::floor(v))
            throw InvalidInput("non-integer transform code for column " + header[c]);
        codes.emplace_back(int(v));
    }

    int trim = 0;
    std::vector<std::vector<double>> transformed;
    transformed.reserve(width - first_col);
    for (std::size_t c = first_col; c < width; ++c) {
        std::vector<double> col(n_raw, kMissing);
        for (std::size_t r = 0; r < n_raw; ++r) {
            const auto& row = rows[r + 2];
            if (row.size() != width)
                throw InvalidInput("row " + std::to_string(r + 3) + " has " +
                                   std::to_string(row.size()) + " cells, expected " +
                                   std::to_string(width));
            const auto v = parse_cell(row[c]);
            if (v) col[r] = *v;
        }
        transformed.push_back(apply_transform(col, codes[c - first_col]));
        switch (codes[c - first_col].code) {
            case 2: case 5: trim = std::max(trim, 1); break;
            case 3: case 6: case 7: trim = std::max(trim, 2); break;
            default: break;
        }
    }
    if (std::size_t(trim) >= n_raw)
        throw InvalidInput("too few data rows after differencing");

    IngestResult out;
    out.trimmed_rows = trim;
    const std::size_t n = n_raw - std::size_t(trim);
    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < transformed.size(); ++c) {
        bool complete = true;
        for (std::size_t r = std::size_t(trim); r < n_raw; ++r)
            if (std::isnan(transformed[c][r])) {
                complete = false;
                break;
            }
        const std::string name = header[c + first_col];
        if (complete) {
            kept.push_back(c);
            out.kept_names.push_back(name);
        } else {
            out.dropped_names.push_back(name);
        }
    }
    if (kept.empty()) throw InvalidInput("every column was dropped for missing values");

    out.values.resize(Index(n), Index(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j)
        for (std::size_t r = 0; r < n; ++r)
            out.values(Index(r), Index(j)) = transformed[kept[j]][r + std::size_t(trim)];
    return out;
}

IngestResult ingest_fredmd_file(const std::string& path) {
    return ingest_fredmd(parse_csv_file(path));
}

}  // namespace nfactor::cli
