#include "nfactor/estimators.hpp"

#include <cmath>

namespace nfactor {

std::string to_string(Method method) {
    switch (method) {
        case Method::SR: return "sr";
        case Method::NE: return "ne";
        case Method::ED: return "ed";
        case Method::MKTCR: return "mktcr";
        case Method::ACT: return "act";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    if (name == "sr") return Method::SR;
    if (name == "ne") return Method::NE;
    if (name == "ed") return Method::ED;
    if (name == "mktcr") return Method::MKTCR;
    if (name == "act") return Method::ACT;
    throw InvalidInput("unknown estimator: " + name);
}

namespace {

// argmax over trace[0..count), ties toward the smallest index; returns a
// 1-based index.
int argmax_one_based(const std::vector<double>& trace) {
    int best = 1;
    for (int j = 2; j <= int(trace.size()); ++j)
        if (trace[j - 1] > trace[best - 1]) best = j;
    return best;
}

}  // namespace

EstimateResult estimate_sr_from_spectrum(const Spectrum& s, int k_max) {
    if (k_max < 2 || k_max > s.p - 2)
        throw InvalidInput("SR needs 2 <= k_max <= p-2; got k_max=" +
                           std::to_string(k_max) + ", p=" + std::to_string(s.p));
    EstimateResult out;
    out.method = Method::SR;
    out.k_max = k_max;
    out.trace.resize(k_max);
    double prev = m_tilde_prime(s, 1);
    for (int j = 1; j <= k_max; ++j) {
        const double next = m_tilde_prime(s, j + 1);
        out.trace[j - 1] = next / prev;
        prev = next;
    }
    out.k_hat = argmax_one_based(out.trace);
    return out;
}

EstimateResult estimate_sr(const DataMatrix& data, int k_max, TiePolicy ties) {
    return estimate_sr_from_spectrum(eigen_sym(spearman(data, ties)), k_max);
}

EstimateResult estimate_ne(const DataMatrix& data) {
    const Spectrum s = eigen_sym(covariance(data));
    const Index p = s.p;
    const Index n = s.n;
    const Index scan = std::min(p, n);

    // Suffix sums of lambda and lambda^2 over i = j+1..p.
    std::vector<double> tail(p + 1, 0.0), tail_sq(p + 1, 0.0);
    for (Index i = p; i >= 1; --i) {
        tail[i - 1] = tail[i] + s.lambda(i);
        tail_sq[i - 1] = tail_sq[i] + s.lambda(i) * s.lambda(i);
    }

    EstimateResult out;
    out.method = Method::NE;
    out.k_max = int(scan) - 1;
    out.trace.resize(scan);
    const double ratio = double(p) / double(n);
    // Trailing sums are non-negative for a covariance spectrum; roundoff can
    // still push the last few below zero at extreme scales, so those indices
    // drop out of the scan instead of aborting it.
    int best = -1;
    for (Index j = 0; j < scan; ++j) {
        double objective = std::numeric_limits<double>::infinity();
        if (tail[j] > 0.0) {
            const double t =
                double(p) * (double(p - j) * tail_sq[j] / (tail[j] * tail[j]) - 1.0 -
                             ratio) -
                ratio;
            objective = 0.25 * t * t / (ratio * ratio) + 2.0 * double(j + 1);
        }
        out.trace[j] = objective;
        if (std::isfinite(objective) && (best < 0 || objective < out.trace[best]))
            best = int(j);
    }
    if (best < 0)
        throw NumericalError("degenerate covariance spectrum: no scan index has "
                             "positive trailing eigenvalue mass");
    out.k_hat = best;
    return out;
}

EstimateResult estimate_ed(const DataMatrix& data, int k_max) {
    const Spectrum s = eigen_sym(covariance(data));
    const Index p = s.p;
    const Index n = s.n;
    if (k_max < 1 || k_max + 5 >= std::min(p, n))
        throw InvalidInput("ED needs k_max + 5 < min(p,n); got k_max=" +
                           std::to_string(k_max));

    EstimateResult out;
    out.method = Method::ED;
    out.k_max = k_max;
    out.trace.resize(k_max);
    for (int j = 1; j <= k_max; ++j) out.trace[j - 1] = s.lambda(j) - s.lambda(j + 1);

    // Threshold calibration: regress the five eigenvalues starting at the
    // current cut on (index-2)^{2/3} and take twice the slope magnitude,
    // re-cutting until the estimate stabilizes.
    const auto k_from_delta = [&](double delta) {
        int k = 0;
        for (int j = 1; j <= k_max; ++j)
            if (out.trace[j - 1] >= delta) k = j;
        return k;
    };

    double delta = 0.0;
    int k = -1;
    int start = k_max + 1;
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (int m = 0; m < 5; ++m) {
            const double x = std::pow(double(start - 1 + m), 2.0 / 3.0);
            const double y = s.lambda(start + m);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double slope = (5.0 * sxy - sx * sy) / (5.0 * sxx - sx * sx);
        delta = 2.0 * std::abs(slope);
        const int k_new = k_from_delta(delta);
        if (k_new == k) {
            converged = true;
            break;
        }
        k = k_new;
        start = k + 1;
    }
    if (!converged) out.warnings.push_back("ed calibration did not stabilize in 50 rounds");
    out.k_hat = k;
    out.threshold = delta;
    return out;
}

EstimateResult estimate_mktcr(const DataMatrix& data, int k_max) {
    const Spectrum s = eigen_sym(mkendall(data));
    const Index p = s.p;
    const Index n = s.n;
    const Index m = std::min(p, n);
    if (k_max < 1 || k_max + 1 >= m)
        throw InvalidInput("MKTCR needs k_max + 1 < min(p,n); got k_max=" +
                           std::to_string(k_max));

    // V_j = sum_{i=j+1..m} lambda_i for j = 0..m-1.
    std::vector<double> v(m, 0.0);
    double acc = 0.0;
    for (Index i = m; i >= 1; --i) {
        acc += s.lambda(i);
        if (i - 1 < m) v[i - 1] = acc;
    }

    EstimateResult out;
    out.method = Method::MKTCR;
    out.k_max = k_max;
    out.trace.resize(k_max);
    for (int j = 1; j <= k_max; ++j) {
        if (v[j - 1] <= 0.0 || v[j] <= 0.0)
            throw NumericalError("Kendall's tau spectrum rank-deficient inside the "
                                 "scan range at index " + std::to_string(j));
        out.trace[j - 1] = std::log1p(s.lambda(j) / v[j - 1]) /
                           std::log1p(s.lambda(j + 1) / v[j]);
    }
    out.k_hat = argmax_one_based(out.trace);
    return out;
}

EstimateResult estimate_act(const DataMatrix& data, int k_max) {
    const Spectrum s = eigen_sym(pearson(data));
    const Index p = s.p;
    const Index n = s.n;
    if (n < 3) throw InvalidInput("ACT needs n >= 3");
    if (k_max < 1 || k_max + 1 >= p)
        throw InvalidInput("ACT needs k_max + 1 < p; got k_max=" +
                           std::to_string(k_max));

    EstimateResult out;
    out.method = Method::ACT;
    out.k_max = k_max;
    out.threshold = 1.0 + std::sqrt(double(p) / double(n - 1));
    out.trace.assign(k_max, std::numeric_limits<double>::quiet_NaN());

    for (int j = 1; j <= k_max; ++j) {
        const double lj = s.lambda(j);
        double bulk = 0.0;
        for (Index l = j + 1; l <= p; ++l) bulk += 1.0 / (s.lambda(l) - lj);
        const double pivot = (3.0 * lj + s.lambda(j + 1)) / 4.0;
        const double m_nj = (bulk + 1.0 / (pivot - lj)) / double(p - j);
        const double c_j = double(p - j) / double(n - 1);
        const double m_under = -(1.0 - c_j) / lj + c_j * m_nj;
        if (m_under == 0.0 || !std::isfinite(m_under)) {
            out.warnings.push_back("act index " + std::to_string(j) +
                                   " excluded: vanishing underline-m");
            continue;
        }
        out.trace[j - 1] = -1.0 / m_under;
    }

    int k = 0;
    for (int j = 1; j <= k_max; ++j)
        if (std::isfinite(out.trace[j - 1]) && out.trace[j - 1] > out.threshold) k = j;
    out.k_hat = k;
    return out;
}

EstimateResult estimate(Method method, const DataMatrix& data, int k_max,
                        TiePolicy ties) {
    switch (method) {
        case Method::SR: return estimate_sr(data, k_max, ties);
        case Method::NE: return estimate_ne(data);
        case Method::ED: return estimate_ed(data, k_max);
        case Method::MKTCR: return estimate_mktcr(data, k_max);
        case Method::ACT: return estimate_act(data, k_max);
    }
    throw InvalidInput("unknown estimator method");
}

}  // namespace nfactor
