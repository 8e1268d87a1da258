#pragma once

#include <limits>
#include <string>
#include <vector>

#include "nfactor/spectra.hpp"

namespace nfactor {

enum class Method { SR, NE, ED, MKTCR, ACT };

std::string to_string(Method method);
Method parse_method(const std::string& name);

// Outcome of one estimator run. `trace` is the per-index diagnostic the
// estimator scanned: SR and MKTCR ratios (index j at trace[j-1]), ED gaps,
// ACT corrected eigenvalues, NE objective values (index j at trace[j]).
// `threshold` carries the ED delta or the ACT detection threshold and is
// NaN where no threshold applies.
struct EstimateResult {
    Method method;
    int k_hat = 0;
    int k_max = 0;
    std::vector<double> trace;
    double threshold = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> warnings;
};

// Ratio of regularized Stieltjes-derivative statistics on the Spearman
// spectrum: k = argmax_{1<=j<=k_max} m~'_{j+1}(lambda_{j+1}) / m~'_j(lambda_j),
// ties broken toward the smallest index. Requires 2 <= k_max <= p-2.
EstimateResult estimate_sr(const DataMatrix& data, int k_max = 20,
                           TiePolicy ties = TiePolicy::midrank);

// Same scan on an already-computed Spearman spectrum.
EstimateResult estimate_sr_from_spectrum(const Spectrum& s, int k_max = 20);

// Moment-based objective on the covariance spectrum, scanned over
// 0 <= j < min(p,n); ties toward the smallest index.
EstimateResult estimate_ne(const DataMatrix& data);

// Eigenvalue-difference criterion on the covariance spectrum with the
// iteratively calibrated threshold delta (see the calibration loop in the
// implementation). k = max{ j <= k_max : lambda_j - lambda_{j+1} >= delta },
// or 0 when no gap reaches delta. Requires k_max + 5 < min(p,n).
EstimateResult estimate_ed(const DataMatrix& data, int k_max = 20);

// Log eigenvalue-ratio scan on the multivariate Kendall's tau spectrum.
// Requires k_max + 1 < min(p,n) and no duplicate observation rows.
EstimateResult estimate_mktcr(const DataMatrix& data, int k_max = 20);

// Bias-corrected eigenvalues of the Pearson correlation matrix thresholded
// at 1 + sqrt(p/(n-1)). Requires k_max + 1 < p and n >= 3.
EstimateResult estimate_act(const DataMatrix& data, int k_max = 20);

EstimateResult estimate(Method method, const DataMatrix& data, int k_max = 20,
                        TiePolicy ties = TiePolicy::midrank);

}  // namespace nfactor
