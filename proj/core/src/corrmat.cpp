#include "nfactor/corrmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace nfactor {

std::string to_string(CorrKind kind) {
    switch (kind) {
        case CorrKind::spearman: return "spearman";
        case CorrKind::pearson: return "pearson";
        case CorrKind::covariance: return "covariance";
        case CorrKind::mkendall: return "mkendall";
    }
    return "unknown";
}

CorrKind parse_corr_kind(const std::string& name) {
    if (name == "spearman") return CorrKind::spearman;
    if (name == "pearson") return CorrKind::pearson;
    if (name == "covariance") return CorrKind::covariance;
    if (name == "mkendall") return CorrKind::mkendall;
    throw InvalidInput("unknown correlation kind: " + name);
}

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 2)
        throw InvalidInput("DataMatrix needs at least 2 observation rows, got " +
                           std::to_string(values_.rows()));
    if (values_.cols() < 1)
        throw InvalidInput("DataMatrix needs at least 1 variable column");
    if (!values_.allFinite())
        throw InvalidInput("DataMatrix contains non-finite entries");
}

RankMatrix::RankMatrix(Matrix values, TiePolicy policy)
    : values_(std::move(values)), policy_(policy) {}

CorrMatrix::CorrMatrix(Matrix values, CorrKind kind, Index n_samples)
    : values_(std::move(values)), kind_(kind), n_samples_(n_samples) {
    const Index p = values_.rows();
    if (p != values_.cols()) throw InvalidInput("CorrMatrix must be square");
    for (Index j = 0; j < p; ++j)
        for (Index i = j + 1; i < p; ++i)
            if (std::abs(values_(i, j) - values_(j, i)) > 1e-12)
                throw NumericalError("CorrMatrix asymmetric beyond 1e-12 at (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");
    if (kind_ == CorrKind::spearman || kind_ == CorrKind::pearson) {
        for (Index i = 0; i < p; ++i)
            if (std::abs(values_(i, i) - 1.0) > 1e-12)
                throw NumericalError("correlation diagonal entry " + std::to_string(i) +
                                     " differs from 1 by more than 1e-12");
        for (Index j = 0; j < p; ++j)
            for (Index i = 0; i < p; ++i)
                if (i != j && std::abs(values_(i, j)) > 1.0 + 1e-12)
                    throw NumericalError("correlation entry outside [-1,1] at (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

namespace {

// Ranks one column. Returns midranks (ties averaged) or, under jitter, a
// strict ranking ordered by (value, perm[row]).
void rank_column(const Vector& col, TiePolicy policy,
                 const std::vector<Index>& perm, Vector& out) {
    const Index n = col.size();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    if (policy == TiePolicy::jitter) {
        std::sort(order.begin(), order.end(), [&](Index a, Index b) {
            if (col[a] != col[b]) return col[a] < col[b];
            return perm[static_cast<std::size_t>(a)] < perm[static_cast<std::size_t>(b)];
        });
        for (Index k = 0; k < n; ++k) out[order[static_cast<std::size_t>(k)]] = double(k + 1);
        return;
    }
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return col[a] < col[b]; });
    Index k = 0;
    while (k < n) {
        Index e = k;
        while (e + 1 < n && col[order[static_cast<std::size_t>(e + 1)]] ==
                                col[order[static_cast<std::size_t>(k)]])
            ++e;
        const double avg = 0.5 * double(k + 1 + e + 1);  // average of ranks k+1..e+1
        for (Index t = k; t <= e; ++t) out[order[static_cast<std::size_t>(t)]] = avg;
        k = e + 1;
    }
}

Matrix symmetric_gram(const Matrix& x, double scale) {
    const Index p = x.cols();
    Matrix g = Matrix::Zero(p, p);
    g.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), scale);
    g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
    return g;
}

}  // namespace

RankMatrix rank_transform(const DataMatrix& data, TiePolicy policy,
                          std::uint64_t jitter_seed) {
    const Index n = data.n();
    const Index p = data.p();

    std::vector<Index> perm;
    if (policy == TiePolicy::jitter) {
        perm.resize(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), Index{0});
        std::mt19937_64 rng(jitter_seed);
        std::shuffle(perm.begin(), perm.end(), rng);
    }

    const double scale = std::sqrt(12.0 / (double(n) * double(n) - 1.0));
    const double center = 0.5 * double(n + 1);

    Matrix out(n, p);
    Vector ranks(n);
    for (Index j = 0; j < p; ++j) {
        rank_column(data.values().col(j), policy, perm, ranks);
        out.col(j) = scale * (ranks.array() - center).matrix();
    }
    return RankMatrix(std::move(out), policy);
}

CorrMatrix spearman(const DataMatrix& data, TiePolicy policy,
                    std::uint64_t jitter_seed) {
    RankMatrix r = rank_transform(data, policy, jitter_seed);
    const Index n = data.n();
    for (Index j = 0; j < data.p(); ++j) {
        if (r.values().col(j).squaredNorm() == 0.0)
            throw InvalidInput("column " + std::to_string(j) +
                               " has constant ranks; Spearman correlation undefined");
    }
    Matrix rho = symmetric_gram(r.values(), 1.0 / double(n));
    return CorrMatrix(std::move(rho), CorrKind::spearman, n);
}

CorrMatrix covariance(const DataMatrix& data) {
    const Index n = data.n();
    Matrix centered = data.values().rowwise() - data.values().colwise().mean();
    Matrix s = symmetric_gram(centered, 1.0 / double(n));
    return CorrMatrix(std::move(s), CorrKind::covariance, n);
}

CorrMatrix pearson(const DataMatrix& data) {
    const Index n = data.n();
    const Index p = data.p();
    Matrix centered = data.values().rowwise() - data.values().colwise().mean();
    Matrix s = symmetric_gram(centered, 1.0 / double(n));

    Vector inv_sd(p);
    for (Index j = 0; j < p; ++j) {
        if (s(j, j) <= 0.0)
            throw InvalidInput("column " + std::to_string(j) +
                               " has zero variance; Pearson correlation undefined");
        inv_sd[j] = 1.0 / std::sqrt(s(j, j));
    }
    Matrix r(p, p);
    for (Index j = 0; j < p; ++j) {
        r(j, j) = s(j, j) * (inv_sd[j] * inv_sd[j]);
        for (Index i = j + 1; i < p; ++i) {
            const double v = s(i, j) * (inv_sd[i] * inv_sd[j]);
            r(i, j) = v;
            r(j, i) = v;
        }
    }
    return CorrMatrix(std::move(r), CorrKind::pearson, n);
}

CorrMatrix mkendall(const DataMatrix& data) {
    const Index n = data.n();
    const Index p = data.p();
    Matrix k = Matrix::Zero(p, p);
    Vector diff(p);
    for (Index i = 0; i < n; ++i) {
        for (Index l = i + 1; l < n; ++l) {
            diff = data.values().row(i) - data.values().row(l);
            const double sq = diff.squaredNorm();
            if (sq == 0.0)
                throw InvalidInput("duplicate observation rows " + std::to_string(i) +
                                   " and " + std::to_string(l) +
                                   "; Kendall's tau pair difference is the zero vector");
            k.selfadjointView<Eigen::Lower>().rankUpdate(diff, 1.0 / sq);
        }
    }
    k *= 2.0 / (double(n) * double(n - 1));
    k.triangularView<Eigen::StrictlyUpper>() = k.transpose();
    return CorrMatrix(std::move(k), CorrKind::mkendall, n);
}

Matrix toeplitz_psd_sqrt(Index p, double base) {
    if (p < 1) throw InvalidInput("toeplitz_psd_sqrt needs p >= 1");
    if (base < 0.0 || base >= 1.0)
        throw InvalidInput("toeplitz_psd_sqrt needs base in [0,1)");
    Matrix t(p, p);
    for (Index j = 0; j < p; ++j)
        for (Index i = 0; i < p; ++i)
            t(i, j) = std::pow(base, double(std::abs(i - j)));

    Eigen::SelfAdjointEigenSolver<Matrix> es(t);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigendecomposition of Toeplitz matrix failed");
    // sqrt(T) = V diag(sqrt(lam)) V^T, assembled as the Gram product of
    // V diag(lam^{1/4}) so the result is exactly symmetric.
    Vector lam = es.eigenvalues();
    for (Index i = 0; i < p; ++i) lam[i] = lam[i] > 0.0 ? std::pow(lam[i], 0.25) : 0.0;
    Matrix scaled = es.eigenvectors() * lam.asDiagonal();
    return symmetric_gram(scaled.transpose(), 1.0);
}

}  // namespace nfactor
