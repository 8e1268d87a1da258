#include "nfactor/simulate.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "nfactor/corrmat.hpp"

namespace nfactor {

std::string to_string(LoadingCase c) {
    switch (c) {
        case LoadingCase::C1: return "C1";
        case LoadingCase::C2: return "C2";
        case LoadingCase::C3: return "C3";
    }
    return "unknown";
}

LoadingCase parse_loading_case(const std::string& name) {
    if (name == "C1" || name == "c1") return LoadingCase::C1;
    if (name == "C2" || name == "c2") return LoadingCase::C2;
    if (name == "C3" || name == "c3") return LoadingCase::C3;
    throw InvalidInput("unknown loading case: " + name);
}

Loadings make_loadings(const LoadingSpec& spec, std::mt19937_64& rng) {
    const Index p = spec.p;
    const Index K = spec.K;
    if (K < 1 || K >= p) throw InvalidInput("loading spec needs 1 <= K < p");

    Loadings out;
    out.B.resize(p, K);
    if (spec.loading_case == LoadingCase::C1) {
        for (Index j = 1; j <= K; ++j) {
            const double head = std::sqrt(5.0 * double(j) / double(p));
            const double tail = std::sqrt(5.0 * double(j) / double(p - j));
            for (Index i = 1; i <= K; ++i) out.B(i - 1, j - 1) = head;
            for (Index i = K + 1; i <= p; ++i) {
                const double sign = (i % j == 0) ? -1.0 : 1.0;
                out.B(i - 1, j - 1) = sign * tail;
            }
        }
    } else {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Index i = 0; i < p; ++i)
            for (Index j = 1; j <= K; ++j)
                out.B(i, j - 1) = std::sqrt(10.0 * double(j) / double(p)) * normal(rng);
    }
    out.Psi = spec.loading_case == LoadingCase::C3 ? toeplitz_psd_sqrt(p, 0.45)
                                                   : Matrix::Identity(p, p);
    return out;
}

DataMatrix sample_factor_model(const Matrix& B, const Matrix& Psi,
                               Population population, Index n,
                               std::mt19937_64& rng) {
    const Index p = B.rows();
    const Index K = B.cols();
    if (Psi.rows() != p || Psi.cols() != p)
        throw InvalidInput("noise scale matrix must be p x p");

    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix factors(n, K);
    Matrix errors(n, p);
    for (Index i = 0; i < n; ++i) {
        const double wf = draw_factor_weight(population, rng);
        const double sf = std::sqrt(wf);
        for (Index k = 0; k < K; ++k) factors(i, k) = sf * normal(rng);
        for (Index j = 0; j < p; ++j) {
            const double we = draw_error_weight(population, rng);
            errors(i, j) = std::sqrt(we) * normal(rng);
        }
    }
    Matrix y = factors * B.transpose();
    if (Psi.isIdentity(0.0))
        y += errors;
    else
        y += errors * Psi.transpose();
    return DataMatrix(std::move(y));
}

void validate(const ScenarioSpec& spec) {
    if (spec.p < spec.K + 1) throw InvalidInput("scenario needs p >= K + 1");
    if (spec.n < 4) throw InvalidInput("scenario needs n >= 4");
    if (spec.K < 1) throw InvalidInput("scenario needs K >= 1");
    if (spec.reps < 1) throw InvalidInput("scenario needs reps >= 1");
    if (spec.k_max < 2) throw InvalidInput("scenario needs k_max >= 2");
}

FrequencyTable run_scenario(const ScenarioSpec& spec,
                            const std::vector<Method>& methods, int threads) {
    validate(spec);
    if (methods.empty()) throw InvalidInput("no estimators requested");

    const int reps = spec.reps;
    const int n_methods = int(methods.size());
    // k_hat per (replication, method); -1 marks a failed run.
    std::vector<std::vector<int>> results(reps, std::vector<int>(n_methods, -1));

    const auto run_rep = [&](int r) {
        std::mt19937_64 rng(substream_seed(spec.seed, std::uint64_t(r)));
        const Loadings loadings =
            make_loadings({spec.loading_case, spec.p, spec.K}, rng);
        const DataMatrix data = sample_factor_model(loadings.B, loadings.Psi,
                                                    spec.population, spec.n, rng);
        for (int m = 0; m < n_methods; ++m) {
            try {
                results[r][m] = estimate(methods[m], data, spec.k_max).k_hat;
            } catch (const std::exception&) {
                results[r][m] = -1;
            }
        }
    };

    int workers = threads > 0 ? threads : int(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, reps));
    if (workers == 1) {
        for (int r = 0; r < reps; ++r) run_rep(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1))
                    run_rep(r);
            });
        for (auto& t : pool) t.join();
    }

    FrequencyTable table;
    table.reps = reps;
    table.true_k = spec.K;
    for (int m = 0; m < n_methods; ++m) {
        MethodFrequency freq;
        freq.method = methods[m];
        freq.k_hats.resize(reps);
        double sum = 0.0;
        int ok = 0;
        for (int r = 0; r < reps; ++r) {
            const int k = results[r][m];
            freq.k_hats[r] = k;
            if (k < 0) {
                ++freq.failed;
                continue;
            }
            ++ok;
            sum += k;
            if (k == spec.K)
                ++freq.correct;
            else if (k > spec.K)
                ++freq.over;
            else
                ++freq.under;
        }
        freq.mean_k_hat = ok > 0 ? sum / ok : std::numeric_limits<double>::quiet_NaN();
        table.rows.push_back(std::move(freq));
    }
    return table;
}

}  // namespace nfactor
