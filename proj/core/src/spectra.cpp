#include "nfactor/spectra.hpp"

#include <cmath>
#include <limits>

namespace nfactor {

Vector sym_eigenvalues_desc(const Matrix& symmetric) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError(
            "symmetric eigensolver did not converge within its implicit-shift "
            "QL sweep budget (p=" + std::to_string(symmetric.rows()) + ")");
    return es.eigenvalues().reverse();
}

Spectrum eigen_sym(const CorrMatrix& m) {
    Spectrum s;
    s.eigenvalues = sym_eigenvalues_desc(m.values());
    s.source_kind = m.kind();
    s.n = m.n_samples();
    s.p = m.p();

    const double trace_gap = std::abs(s.eigenvalues.sum() - m.trace());
    if (trace_gap > 1e-8)
        throw NumericalError("eigenvalue sum misses the trace by " +
                             std::to_string(trace_gap));
    if (m.kind() == CorrKind::spearman || m.kind() == CorrKind::pearson) {
        if (s.eigenvalues[s.p - 1] < -1e-8)
            throw NumericalError("correlation matrix eigenvalue below -1e-8");
    }
    return s;
}

namespace {

void check_scan_index(const Spectrum& s, Index j) {
    if (j < 1 || j > s.p - 1)
        throw InvalidInput("eigenvalue scan index j=" + std::to_string(j) +
                           " outside [1, p-1] with p=" + std::to_string(s.p));
}

}  // namespace

double m_hat_prime(const Spectrum& s, Index j, double x) {
    check_scan_index(s, j);
    double sum = 0.0;
    for (Index l = j + 1; l <= s.p; ++l) {
        const double d = x - s.lambda(l);
        if (d == 0.0) return std::numeric_limits<double>::infinity();
        sum += 1.0 / (d * d);
    }
    return sum / double(s.p - j);
}

double m_tilde_prime(const Spectrum& s, Index j) {
    check_scan_index(s, j);
    const double reg = std::pow(double(s.p), -4.0 / 3.0);
    const double lj = s.lambda(j);
    double sum = 0.0;
    for (Index l = j + 1; l <= s.p; ++l) {
        const double d = lj - s.lambda(l);
        sum += 1.0 / (d * d + reg);
    }
    return sum / double(s.p - j);
}

}  // namespace nfactor
