#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "nfactor/errors.hpp"

namespace nfactor {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class TiePolicy { midrank, jitter };

enum class CorrKind { spearman, pearson, covariance, mkendall };

std::string to_string(CorrKind kind);
CorrKind parse_corr_kind(const std::string& name);

// n x p observation matrix: rows are samples, columns are variables.
// All entries must be finite; n >= 2 and p >= 1. Dimensions are fixed
// for the life of the value.
class DataMatrix {
public:
    explicit DataMatrix(Matrix values);

    Index n() const { return values_.rows(); }
    Index p() const { return values_.cols(); }
    const Matrix& values() const { return values_; }

private:
    Matrix values_;
};

// Column-wise normalized ranks sqrt(12/(n^2-1)) * (r_ij - (n+1)/2).
// With no ties every column has mean exactly 0 and squared norm n.
class RankMatrix {
public:
    RankMatrix(Matrix values, TiePolicy policy);

    Index n() const { return values_.rows(); }
    Index p() const { return values_.cols(); }
    const Matrix& values() const { return values_; }
    TiePolicy tie_policy() const { return policy_; }

private:
    Matrix values_;
    TiePolicy policy_;
};

// Symmetric p x p correlation-type matrix tagged with how it was built.
// Construction validates symmetry (1e-12 absolute) and, for spearman and
// pearson, a unit diagonal (1e-12) with off-diagonals in [-1, 1].
// n_samples records the sample size of the data the matrix came from.
class CorrMatrix {
public:
    CorrMatrix(Matrix values, CorrKind kind, Index n_samples);

    Index p() const { return values_.rows(); }
    Index n_samples() const { return n_samples_; }
    CorrKind kind() const { return kind_; }
    const Matrix& values() const { return values_; }
    double trace() const { return values_.trace(); }

private:
    Matrix values_;
    CorrKind kind_;
    Index n_samples_;
};

// Column-wise ranking. midrank assigns tied entries their average rank;
// jitter breaks ties by a permutation of row order drawn from jitter_seed,
// producing a strict ranking. Columns are ranked independently.
RankMatrix rank_transform(const DataMatrix& data,
                          TiePolicy policy = TiePolicy::midrank,
                          std::uint64_t jitter_seed = 0);

// Spearman sample correlation matrix (1/n) R^T R of the normalized rank
// matrix R. The Gram product is a single fixed-order symmetric rank
// update, so results are bit-reproducible for identical rank input.
// A column whose ranks are constant (zero rank variance) is an error.
CorrMatrix spearman(const DataMatrix& data,
                    TiePolicy policy = TiePolicy::midrank,
                    std::uint64_t jitter_seed = 0);

// Pearson sample correlation matrix D^{-1/2} S_n D^{-1/2} with
// D = diag(S_n). A zero-variance column is an error naming the column.
CorrMatrix pearson(const DataMatrix& data);

// Sample covariance S_n = n^{-1} sum_i (y_i - ybar)(y_i - ybar)^T.
// The divisor is exactly n.
CorrMatrix covariance(const DataMatrix& data);

// Multivariate Kendall's tau matrix
//   K_n = 2/(n(n-1)) sum_{i<l} (y_i-y_l)(y_i-y_l)^T / ||y_i-y_l||^2.
// Cost is O(n^2 p^2) in the rank-one accumulation. A duplicate pair of
// observation rows makes the summand undefined and is an error naming
// the two row indices (0-based).
CorrMatrix mkendall(const DataMatrix& data);

// Symmetric PSD square root of the Toeplitz matrix T_ij = base^|i-j|,
// computed by eigendecomposition with negative roundoff eigenvalues
// clamped to zero. base = 0 (identity) is accepted for testing; the
// simulator uses base in (0,1).
Matrix toeplitz_psd_sqrt(Index p, double base);

}  // namespace nfactor
