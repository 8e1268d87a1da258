#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nfactor/estimators.hpp"
#include "nfactor/population.hpp"

namespace nfactor {

enum class LoadingCase { C1, C2, C3 };

std::string to_string(LoadingCase c);
LoadingCase parse_loading_case(const std::string& name);

// Loading design for p variables and K factors. K < p.
struct LoadingSpec {
    LoadingCase loading_case = LoadingCase::C1;
    Index p = 0;
    Index K = 0;
};

struct Loadings {
    Matrix B;    // p x K
    Matrix Psi;  // p x p noise scale (identity except under C3)
};

// Loading matrices per design case:
//   C1  deterministic: B_ij = sqrt(5j/p) for i <= K, and for i > K
//       B_ij = a_ij sqrt(5j/(p-j)) with a_ij = -1 when i is a positive
//       multiple of j, +1 otherwise; Psi = I.
//   C2  B_ij = sqrt(10j/p) * N(0,1) draw; Psi = I.
//   C3  B as in C2; Psi = sqrt of the 0.45-Toeplitz matrix.
// Indices in the formulas are 1-based.
Loadings make_loadings(const LoadingSpec& spec, std::mt19937_64& rng);

// Draws n observations y_i = B f_i + Psi e_i with f_i = sqrt(w_i^f) x_i,
// x_i ~ N(0, I_K), and e_ij = sqrt(w_ij^e) z_ij, all mixing weights from
// the population's laws. Consumption order per observation is fixed
// (w^f, the K normals, then w^e/z interleaved across columns), so output
// is bit-identical for a given engine state regardless of caller threads.
DataMatrix sample_factor_model(const Matrix& B, const Matrix& Psi,
                               Population population, Index n,
                               std::mt19937_64& rng);

// One Monte Carlo scenario.
struct ScenarioSpec {
    Population population = Population::normal;
    LoadingCase loading_case = LoadingCase::C1;
    Index p = 0;
    Index n = 0;
    Index K = 0;
    int k_max = 20;
    int reps = 0;
    std::uint64_t seed = 0;
};

void validate(const ScenarioSpec& spec);

// Per-estimator accuracy over the replications of one scenario.
struct MethodFrequency {
    Method method;
    int correct = 0;
    int over = 0;
    int under = 0;
    int failed = 0;
    double mean_k_hat = 0.0;    // over non-failed replications
    std::vector<int> k_hats;    // per-replication estimates, -1 where failed

    double correct_pct(int reps) const { return 100.0 * correct / reps; }
    double over_pct(int reps) const { return 100.0 * over / reps; }
    double under_pct(int reps) const { return 100.0 * under / reps; }
    double failed_pct(int reps) const { return 100.0 * failed / reps; }
};

struct FrequencyTable {
    int reps = 0;
    Index true_k = 0;
    std::vector<MethodFrequency> rows;  // one per requested method
};

// Runs the scenario: replication r uses the engine seeded with
// substream_seed(spec.seed, r), draws loadings then data, and applies
// each requested estimator. Failed replications are counted per method,
// never aborting the sweep. Replications execute on `threads` workers
// (0 = hardware concurrency); aggregation is keyed by replication index,
// so the table is identical for any thread count.
FrequencyTable run_scenario(const ScenarioSpec& spec,
                            const std::vector<Method>& methods,
                            int threads = 0);

}  // namespace nfactor
