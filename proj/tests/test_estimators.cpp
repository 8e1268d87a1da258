#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nfactor/estimators.hpp"
#include "nfactor/simulate.hpp"

using namespace nfactor;

namespace {

DataMatrix factor_data(LoadingCase c, Population pop, Index p, Index n, Index k,
                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Loadings l = make_loadings({c, p, k}, rng);
    return sample_factor_model(l.B, l.Psi, pop, n, rng);
}

// single spike: y_i = b * u g_i + z_i with ||b u||^2 = strength - 1
DataMatrix spiked_noise(Index p, Index n, double spike, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Matrix b = Matrix::Constant(p, 1, std::sqrt((spike - 1.0) / double(p)));
    return sample_factor_model(b, Matrix::Identity(p, p), Population::normal, n, rng);
}

}  // namespace

TEST_CASE("estimators are deterministic given identical input bits") {
    DataMatrix y = factor_data(LoadingCase::C2, Population::normal, 60, 120, 3, 1);
    for (Method m : {Method::SR, Method::NE, Method::ED, Method::MKTCR, Method::ACT}) {
        EstimateResult a = estimate(m, y, 12);
        EstimateResult b = estimate(m, y, 12);
        CHECK(a.k_hat == b.k_hat);
        CHECK(a.trace == b.trace);
    }
}

TEST_CASE("SR is invariant under strictly increasing column transforms") {
    DataMatrix y = factor_data(LoadingCase::C1, Population::normal, 80, 160, 3, 2);
    EstimateResult base = estimate_sr(y, 15);

    Matrix t = y.values();
    for (Index j = 0; j < t.cols(); ++j)
        for (Index i = 0; i < t.rows(); ++i)
            t(i, j) = (j % 2 == 0) ? std::exp(t(i, j)) : t(i, j) * t(i, j) * t(i, j);
    EstimateResult transformed = estimate_sr(DataMatrix(t), 15);

    CHECK(base.k_hat == transformed.k_hat);
    CHECK(base.trace == transformed.trace);  // identical ratio diagnostics
}

TEST_CASE("SR finds a single planted spike") {
    EstimateResult r = estimate_sr(spiked_noise(100, 200, 10.0, 3), 20);
    CHECK(r.k_hat == 1);
}

TEST_CASE("ACT and MKTCR are invariant under global positive scaling") {
    DataMatrix y = factor_data(LoadingCase::C2, Population::normal, 50, 110, 2, 4);
    DataMatrix doubled(y.values() * 2.0);   // exact in floating point
    DataMatrix scaled(y.values() * 3.7);

    CHECK(estimate_act(y, 10).k_hat == estimate_act(doubled, 10).k_hat);
    CHECK(estimate_act(y, 10).k_hat == estimate_act(scaled, 10).k_hat);
    CHECK(estimate_mktcr(y, 10).k_hat == estimate_mktcr(doubled, 10).k_hat);
    CHECK(estimate_mktcr(y, 10).k_hat == estimate_mktcr(scaled, 10).k_hat);
}

TEST_CASE("MKTCR finds a single dominant factor") {
    EstimateResult r = estimate_mktcr(spiked_noise(60, 150, 20.0, 5), 12);
    CHECK(r.k_hat == 1);
}

TEST_CASE("ED detects one dominant gap") {
    EstimateResult r = estimate_ed(spiked_noise(60, 150, 25.0, 6), 12);
    CHECK(r.k_hat == 1);
    CHECK(r.threshold > 0.0);
}

TEST_CASE("NE objective trace has the scanned length") {
    DataMatrix y = factor_data(LoadingCase::C1, Population::normal, 40, 90, 3, 7);
    EstimateResult r = estimate_ne(y);
    CHECK(int(r.trace.size()) == 40);
    CHECK(r.k_hat >= 0);
    CHECK(r.k_hat < 40);
}

TEST_CASE("NE rejects all-zero data") {
    Matrix zeros = Matrix::Zero(20, 10);
    CHECK_THROWS_AS(estimate_ne(DataMatrix(zeros)), NumericalError);
}

TEST_CASE("ACT returns zero on pure noise most of the time") {
    int zeros = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(seed);
        DataMatrix y = sample_factor_model(Matrix::Zero(80, 1),
                                           Matrix::Identity(80, 80),
                                           Population::normal, 160, rng);
        if (estimate_act(y, 16).k_hat == 0) ++zeros;
    }
    CHECK(zeros >= 8);
}

TEST_CASE("precondition violations throw") {
    DataMatrix y = factor_data(LoadingCase::C1, Population::normal, 30, 66, 2, 8);
    CHECK_THROWS_AS(estimate_sr(y, 1), InvalidInput);
    CHECK_THROWS_AS(estimate_sr(y, 29), InvalidInput);
    CHECK_THROWS_AS(estimate_ed(y, 25), InvalidInput);
    CHECK_THROWS_AS(estimate_mktcr(y, 29), InvalidInput);
    CHECK_THROWS_AS(estimate_act(y, 29), InvalidInput);
}

TEST_CASE("method names round-trip") {
    for (Method m : {Method::SR, Method::NE, Method::ED, Method::MKTCR, Method::ACT})
        CHECK(parse_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_method("bcv"), InvalidInput);
}
