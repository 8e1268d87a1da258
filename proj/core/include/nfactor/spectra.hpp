#pragma once

#include "nfactor/corrmat.hpp"

namespace nfactor {

// Eigenvalues of a symmetric correlation-type matrix, strictly ordered
// non-increasing, together with the sample dimensions they came from.
struct Spectrum {
    Vector eigenvalues;  // length p, descending
    CorrKind source_kind;
    Index n = 0;  // sample size behind the source matrix
    Index p = 0;

    double lambda(Index j_one_based) const { return eigenvalues[j_one_based - 1]; }
};

// Descending eigenvalues of a plain symmetric matrix.
Vector sym_eigenvalues_desc(const Matrix& symmetric);

// Full symmetric eigendecomposition (values only; nothing downstream
// needs eigenvectors). Validates that the eigenvalue sum reproduces the
// trace to 1e-8 and, for spearman/pearson sources, that no eigenvalue
// falls below -1e-8.
Spectrum eigen_sym(const CorrMatrix& m);

// Stieltjes-derivative statistic
//   (1/(p-j)) sum_{l=j+1..p} 1/(x - lambda_l)^2,   j 1-based, 1 <= j <= p-1.
// Returns +infinity when x coincides exactly with one of the summed
// eigenvalues (the divergent-value condition inside the bulk).
double m_hat_prime(const Spectrum& s, Index j, double x);

// Regularized variant evaluated at lambda_j:
//   (1/(p-j)) sum_{l=j+1..p} 1/((lambda_j - lambda_l)^2 + p^{-4/3}).
// Always finite; bounded above by p^{4/3}.
double m_tilde_prime(const Spectrum& s, Index j);

}  // namespace nfactor
