#pragma once

#include <complex>
#include <vector>

#include "nfactor/corrmat.hpp"
#include "nfactor/population.hpp"

namespace nfactor {

struct BulkAtom {
    double location = 0.0;
    double weight = 0.0;
};

// Discrete limiting population spectral distribution: atoms at
// non-negative locations with positive weights summing to 1 (1e-12).
class BulkDistribution {
public:
    explicit BulkDistribution(std::vector<BulkAtom> atoms);

    const std::vector<BulkAtom>& atoms() const { return atoms_; }
    double max_location() const { return max_location_; }

    static BulkDistribution point_mass(double location = 1.0);

private:
    std::vector<BulkAtom> atoms_;
    double max_location_ = 0.0;
};

// Candidate population spikes (descending) over a bulk distribution,
// with c the limiting dimension-to-sample ratio p/n.
struct SpikeModel {
    std::vector<double> spikes;
    BulkDistribution bulk;
    double c = 0.0;
};

// psi(alpha) = alpha + c * sum_k w_k t_k alpha / (alpha - t_k).
// Requires alpha strictly right of every bulk atom.
double psi(const SpikeModel& model, double alpha);

// psi'(alpha) = 1 - c * sum_k w_k t_k^2 / (alpha - t_k)^2.
double psi_prime(const SpikeModel& model, double alpha);

struct SpikeVerdict {
    double alpha = 0.0;
    bool detectable = false;
    bool inside_bulk = false;       // at or left of the largest bulk atom
    double psi_prime_value = 0.0;   // NaN when inside the bulk
    double predicted_limit = 0.0;   // psi(alpha) if detectable, else bulk right edge
};

struct SignificantCount {
    int k0 = 0;
    double threshold_alpha = 0.0;   // unique root of psi' right of the bulk
    double bulk_right_edge = 0.0;   // psi(threshold_alpha)
    std::vector<SpikeVerdict> verdicts;
};

// Counts the significant spikes: K0 = #{j : psi'(alpha_j) > 0}. Spikes at
// or inside the bulk are flagged undetectable. Detectable spikes carry
// their almost-sure sample-eigenvalue limit psi(alpha_j); undetectable
// ones carry the bulk right edge.
SignificantCount count_significant(const SpikeModel& model);

struct GammaEstimate {
    double gamma = 0.0;
    double standard_error = 0.0;
    bool diverged = false;
    std::uint64_t samples = 0;
    // log2-slope of the running standard error vs sample count; about -1/2
    // when the Monte Carlo mean converges, drifting to 0 or above when the
    // integrand has no finite mean.
    double se_slope = 0.0;
};

// Monte Carlo estimate of gamma = (6/pi) E[ w^f / sqrt((w1+w2)(w3+w4)) ]
// with w^f and four error weights drawn independently from the
// population's mixing laws. Tracks running standard errors at dyadic
// checkpoints and raises `diverged` when they stop shrinking like
// samples^{-1/2} (slope above -1/4), the signature of an infinite mean.
GammaEstimate gamma_mc(Population population, std::uint64_t samples,
                       std::uint64_t seed);

// Population approximation diag(I - g M) + g M with
// M = Psi^{-1} B B^T Psi^{-1}: the off-diagonal of g M with the diagonal
// pinned to exactly one. Errors on singular Psi.
Matrix sigma_rho_approx(const Matrix& loadings, const Matrix& noise_scale,
                        double gamma);

struct StieltjesOptions {
    double tolerance = 1e-12;
    int max_iterations = 100000;
    double damping = 0.5;
};

// Solves m = sum_k w_k / (t_k (1 - c - c z m) - z) by damped fixed-point
// iteration from m0 = -1/z. For Im z > 0 the returned solution has
// non-negative imaginary part; real z must lie outside the support.
std::complex<double> mp_stieltjes(const BulkDistribution& bulk, double c,
                                  std::complex<double> z,
                                  const StieltjesOptions& options = {});

}  // namespace nfactor
