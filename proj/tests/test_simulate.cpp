#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nfactor/simulate.hpp"

using namespace nfactor;

TEST_CASE("C1 loadings hand values") {
    std::mt19937_64 rng(0);
    Loadings l = make_loadings({LoadingCase::C1, 10, 3}, rng);
    CHECK(l.B(0, 0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    // i=6 (1-based), j=2: 6 is a multiple of 2, so the sign flips
    CHECK(l.B(5, 1) == doctest::Approx(-std::sqrt(10.0 / 8.0)).epsilon(1e-14));
    // i=7, j=3: not a multiple
    CHECK(l.B(6, 2) == doctest::Approx(std::sqrt(15.0 / 7.0)).epsilon(1e-14));
    CHECK(l.Psi.isIdentity(0.0));
}

TEST_CASE("C1 column norms approach 5j") {
    std::mt19937_64 rng(0);
    const Index p = 500;
    Loadings l = make_loadings({LoadingCase::C1, p, 3}, rng);
    for (Index j = 1; j <= 3; ++j) {
        const double norm_sq = l.B.col(j - 1).squaredNorm();
        CHECK(std::abs(norm_sq - 5.0 * double(j)) / (5.0 * double(j)) < 0.02);
    }
}

TEST_CASE("C2 loadings have the prescribed scale") {
    std::mt19937_64 rng(42);
    const Index p = 2000;
    Loadings l = make_loadings({LoadingCase::C2, p, 3}, rng);
    CHECK(l.Psi.isIdentity(0.0));
    for (Index j = 1; j <= 3; ++j) {
        const double norm_sq = l.B.col(j - 1).squaredNorm();  // ~ 10 j
        CHECK(std::abs(norm_sq - 10.0 * double(j)) / (10.0 * double(j)) < 0.2);
    }
}

TEST_CASE("C3 noise scale squares back to the Toeplitz matrix") {
    std::mt19937_64 rng(1);
    const Index p = 40;
    Loadings l = make_loadings({LoadingCase::C3, p, 2}, rng);
    Matrix t(p, p);
    for (Index j = 0; j < p; ++j)
        for (Index i = 0; i < p; ++i) t(i, j) = std::pow(0.45, double(std::abs(i - j)));
    CHECK((l.Psi * l.Psi - t).norm() < 1e-10);
}

TEST_CASE("loading spec validation") {
    std::mt19937_64 rng(0);
    CHECK_THROWS_AS(make_loadings({LoadingCase::C1, 5, 5}, rng), InvalidInput);
    CHECK_THROWS_AS(make_loadings({LoadingCase::C2, 5, 0}, rng), InvalidInput);
}

TEST_CASE("normal population with zero loadings gives iid standard normal columns") {
    std::mt19937_64 rng(7);
    const Index p = 100, n = 400;
    DataMatrix y = sample_factor_model(Matrix::Zero(p, 1), Matrix::Identity(p, p),
                                       Population::normal, n, rng);
    int in_band = 0;
    for (Index j = 0; j < p; ++j) {
        Vector col = y.values().col(j);
        const double mean = col.mean();
        const double var = (col.array() - mean).square().sum() / double(n);
        if (var > 0.8 && var < 1.2) ++in_band;
    }
    CHECK(in_band >= 99);
}

TEST_CASE("cauchy population columns have exploding kurtosis") {
    std::mt19937_64 rng(8);
    const Index p = 50, n = 400;
    DataMatrix y = sample_factor_model(Matrix::Zero(p, 1), Matrix::Identity(p, p),
                                       Population::cauchy, n, rng);
    std::vector<double> kurt;
    for (Index j = 0; j < p; ++j) {
        Vector col = y.values().col(j);
        const double mean = col.mean();
        const double m2 = (col.array() - mean).square().sum() / double(n);
        const double m4 = (col.array() - mean).pow(4).sum() / double(n);
        kurt.push_back(m4 / (m2 * m2));
    }
    std::nth_element(kurt.begin(), kurt.begin() + kurt.size() / 2, kurt.end());
    CHECK(kurt[kurt.size() / 2] > 20.0);
}

TEST_CASE("sampling is bit-identical for a fixed seed") {
    std::mt19937_64 a(99), b(99);
    Loadings la = make_loadings({LoadingCase::C2, 30, 2}, a);
    Loadings lb = make_loadings({LoadingCase::C2, 30, 2}, b);
    CHECK(la.B == lb.B);
    DataMatrix ya = sample_factor_model(la.B, la.Psi, Population::t2, 50, a);
    DataMatrix yb = sample_factor_model(lb.B, lb.Psi, Population::t2, 50, b);
    CHECK(ya.values() == yb.values());
}

TEST_CASE("mixing weight samplers hit their moments") {
    std::mt19937_64 rng(123);
    const int n = 1000000;

    double inv_gamma_sum = 0.0;
    for (int i = 0; i < n; ++i) inv_gamma_sum += draw_inv_gamma(2.0, 1.0, rng);
    CHECK(std::abs(inv_gamma_sum / n - 1.0) < 0.02);  // mean beta/(alpha-1) = 1

    double chisq_sum = 0.0, unif_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        chisq_sum += draw_error_weight(Population::uniform_chisq, rng);
        unif_sum += draw_factor_weight(Population::uniform_chisq, rng);
    }
    CHECK(std::abs(chisq_sum / n - 1.0) < 0.02);
    CHECK(std::abs(unif_sum / n - 0.5) < 0.01);
}

TEST_CASE("t2 population marginals have Student-t(2) tails") {
    std::mt19937_64 rng(17);
    const int n = 100000;
    std::normal_distribution<double> normal(0.0, 1.0);
    int exceed = 0;
    for (int i = 0; i < n; ++i) {
        const double w = draw_factor_weight(Population::t2, rng);
        const double x = std::sqrt(w) * normal(rng);
        if (std::abs(x) > 4.303) ++exceed;
    }
    const double rate = double(exceed) / n;  // t(2) two-sided tail at 4.303 is 0.05
    CHECK(rate > 0.05 * 0.7);
    CHECK(rate < 0.05 * 1.3);
}

TEST_CASE("substream seeds are spread out") {
    CHECK(substream_seed(1, 0) != substream_seed(1, 1));
    CHECK(substream_seed(1, 0) != substream_seed(2, 0));
    CHECK(substream_seed(0, 0) != 0);
}

TEST_CASE("run_scenario is deterministic across thread counts") {
    ScenarioSpec spec;
    spec.population = Population::normal;
    spec.loading_case = LoadingCase::C1;
    spec.p = 40;
    spec.n = 80;
    spec.K = 3;
    spec.k_max = 10;
    spec.reps = 12;
    spec.seed = 2024;

    FrequencyTable serial = run_scenario(spec, {Method::SR, Method::NE}, 1);
    FrequencyTable parallel = run_scenario(spec, {Method::SR, Method::NE}, 4);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t m = 0; m < serial.rows.size(); ++m) {
        CHECK(serial.rows[m].k_hats == parallel.rows[m].k_hats);
        CHECK(serial.rows[m].correct == parallel.rows[m].correct);
        CHECK(serial.rows[m].mean_k_hat == parallel.rows[m].mean_k_hat);
    }
}

TEST_CASE("run_scenario with one replication is one-hot") {
    ScenarioSpec spec;
    spec.population = Population::normal;
    spec.loading_case = LoadingCase::C2;
    spec.p = 30;
    spec.n = 60;
    spec.K = 2;
    spec.k_max = 8;
    spec.reps = 1;
    spec.seed = 5;

    FrequencyTable t = run_scenario(spec, {Method::SR});
    const auto& row = t.rows[0];
    CHECK(row.correct + row.over + row.under + row.failed == 1);
    CHECK(row.k_hats.size() == 1);
}

TEST_CASE("scenario validation") {
    ScenarioSpec spec;
    spec.p = 3;
    spec.n = 2;
    spec.K = 3;
    spec.reps = 1;
    CHECK_THROWS_AS(validate(spec), InvalidInput);
}
