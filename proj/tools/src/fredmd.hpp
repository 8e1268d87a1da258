#pragma once

#include <string>
#include <vector>

#include "nfactor/corrmat.hpp"

namespace nfactor::cli {

// FRED-MD stationarity transform codes:
//   1 level   2 first difference    3 second difference
//   4 log     5 log difference      6 second log difference
//   7 first difference of percent change
// Codes 4..6 turn non-positive observations into missing values.
struct TransformCode {
    int code;
    explicit TransformCode(int c);
};

// Applies a transform code; NaN marks missing. Differencing introduces
// leading NaNs (one for codes 2/5, two for 3/6/7) and propagates any
// interior missingness.
std::vector<double> apply_transform(const std::vector<double>& column,
                                    TransformCode code);

struct IngestResult {
    std::vector<std::string> kept_names;
    std::vector<std::string> dropped_names;  // columns with missing values
    int trimmed_rows = 0;                    // leading rows lost to differencing
    Matrix values;
};

// Ingests a FRED-MD-style table: a header row, a transform-code row, and
// data rows, with an optional leading label column (detected by a
// non-numeric transform cell). Each column is transformed per its code;
// columns containing missing values after transformation are dropped.
IngestResult ingest_fredmd(const std::vector<std::vector<std::string>>& rows);

IngestResult ingest_fredmd_file(const std::string& path);

}  // namespace nfactor::cli
