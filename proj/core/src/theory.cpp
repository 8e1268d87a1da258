#include "nfactor/theory.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace nfactor {

BulkDistribution::BulkDistribution(std::vector<BulkAtom> atoms)
    : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw InvalidInput("bulk distribution needs at least one atom");
    double total = 0.0;
    for (const auto& a : atoms_) {
        if (!std::isfinite(a.location) || a.location < 0.0)
            throw InvalidInput("bulk atom locations must be finite and non-negative");
        if (!(a.weight > 0.0))
            throw InvalidInput("bulk atom weights must be positive");
        total += a.weight;
        max_location_ = std::max(max_location_, a.location);
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw InvalidInput("bulk atom weights must sum to 1 (got " +
                           std::to_string(total) + ")");
}

BulkDistribution BulkDistribution::point_mass(double location) {
    return BulkDistribution({BulkAtom{location, 1.0}});
}

namespace {

void check_alpha(const SpikeModel& model, double alpha) {
    if (model.c <= 0.0) throw InvalidInput("spike model needs c > 0");
    if (!(alpha > model.bulk.max_location()))
        throw InvalidInput("alpha=" + std::to_string(alpha) +
                           " is not strictly right of the bulk support");
}

}  // namespace

double psi(const SpikeModel& model, double alpha) {
    check_alpha(model, alpha);
    double integral = 0.0;
    for (const auto& a : model.bulk.atoms())
        integral += a.weight * a.location * alpha / (alpha - a.location);
    return alpha + model.c * integral;
}

double psi_prime(const SpikeModel& model, double alpha) {
    check_alpha(model, alpha);
    double integral = 0.0;
    for (const auto& a : model.bulk.atoms()) {
        const double d = alpha - a.location;
        integral += a.weight * a.location * a.location / (d * d);
    }
    return 1.0 - model.c * integral;
}

namespace {

// psi' is strictly increasing right of the bulk (its derivative
// 2c*sum w t^2/(a-t)^3 is positive there), diverging to -inf at the edge
// and tending to 1 at infinity, so its root brackets and bisects cleanly.
double psi_prime_root(const SpikeModel& model) {
    const double t_max = model.bulk.max_location();
    if (t_max == 0.0) return 0.0;  // psi(alpha) = alpha; no correction term
    double lo = t_max * (1.0 + 1e-12) + 1e-300;
    double hi = t_max + std::max(1.0, t_max);
    while (psi_prime(model, hi) <= 0.0) hi = t_max + 2.0 * (hi - t_max);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (psi_prime(model, mid) > 0.0 ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

SignificantCount count_significant(const SpikeModel& model) {
    if (model.c <= 0.0) throw InvalidInput("spike model needs c > 0");
    for (std::size_t i = 1; i < model.spikes.size(); ++i)
        if (model.spikes[i] > model.spikes[i - 1])
            throw InvalidInput("spikes must be listed in descending order");

    SignificantCount out;
    out.threshold_alpha = psi_prime_root(model);
    out.bulk_right_edge = out.threshold_alpha > model.bulk.max_location()
                              ? psi(model, out.threshold_alpha)
                              : 0.0;

    const double t_max = model.bulk.max_location();
    for (double alpha : model.spikes) {
        SpikeVerdict v;
        v.alpha = alpha;
        if (alpha <= t_max) {
            v.inside_bulk = true;
            v.detectable = false;
            v.psi_prime_value = std::numeric_limits<double>::quiet_NaN();
            v.predicted_limit = out.bulk_right_edge;
        } else {
            v.psi_prime_value = psi_prime(model, alpha);
            v.detectable = v.psi_prime_value > 0.0;
            v.predicted_limit = v.detectable ? psi(model, alpha) : out.bulk_right_edge;
        }
        if (v.detectable) ++out.k0;
        out.verdicts.push_back(v);
    }
    return out;
}

GammaEstimate gamma_mc(Population population, std::uint64_t samples,
                       std::uint64_t seed) {
    if (samples < 10000)
        throw InvalidInput("gamma_mc needs at least 1e4 samples");

    std::mt19937_64 rng(seed);
    const double scale = 6.0 / std::numbers::pi;

    // Welford running mean/variance with standard errors recorded at
    // dyadic checkpoints samples/16, samples/8, ..., samples.
    double mean = 0.0;
    double m2 = 0.0;
    std::vector<std::uint64_t> checkpoints;
    for (int k = 4; k >= 0; --k) checkpoints.push_back(samples >> k);
    std::vector<double> se_at;
    std::size_t next_cp = 0;

    for (std::uint64_t i = 1; i <= samples; ++i) {
        const double wf = draw_factor_weight(population, rng);
        const double w1 = draw_error_weight(population, rng);
        const double w2 = draw_error_weight(population, rng);
        const double w3 = draw_error_weight(population, rng);
        const double w4 = draw_error_weight(population, rng);
        const double x = scale * wf / std::sqrt((w1 + w2) * (w3 + w4));

        const double delta = x - mean;
        mean += delta / double(i);
        m2 += delta * (x - mean);

        while (next_cp < checkpoints.size() && i == checkpoints[next_cp]) {
            const double var = i > 1 ? m2 / double(i - 1) : 0.0;
            se_at.push_back(std::sqrt(var / double(i)));
            ++next_cp;
        }
    }

    GammaEstimate out;
    out.samples = samples;
    out.gamma = mean;
    out.standard_error = se_at.back();

    if (!std::isfinite(mean) || !std::isfinite(out.standard_error)) {
        out.diverged = true;
        out.se_slope = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    if (out.standard_error == 0.0) {
        out.se_slope = -0.5;  // degenerate integrand, e.g. the normal population
        return out;
    }

    // Least-squares slope of log2(se) against log2(n) over the checkpoints.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int used = 0;
    for (std::size_t k = 0; k < se_at.size(); ++k) {
        if (se_at[k] <= 0.0) continue;
        const double lx = std::log2(double(checkpoints[k]));
        const double ly = std::log2(se_at[k]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++used;
    }
    if (used >= 2) {
        out.se_slope = (double(used) * sxy - sx * sy) / (double(used) * sxx - sx * sx);
        out.diverged = out.se_slope > -0.25;
    }
    return out;
}

Matrix sigma_rho_approx(const Matrix& loadings, const Matrix& noise_scale,
                        double gamma) {
    const Index p = loadings.rows();
    if (noise_scale.rows() != p || noise_scale.cols() != p)
        throw InvalidInput("noise scale matrix must be p x p");
    Eigen::FullPivLU<Matrix> lu(noise_scale);
    if (!lu.isInvertible()) throw InvalidInput("noise scale matrix is singular");

    const Matrix x = lu.solve(loadings);  // Psi^{-1} B
    Matrix m = Matrix::Zero(p, p);
    m.selfadjointView<Eigen::Lower>().rankUpdate(x, gamma);
    m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
    m.diagonal().setOnes();
    return m;
}

std::complex<double> mp_stieltjes(const BulkDistribution& bulk, double c,
                                  std::complex<double> z,
                                  const StieltjesOptions& options) {
    if (c <= 0.0) throw InvalidInput("mp_stieltjes needs c > 0");
    if (z == std::complex<double>(0.0, 0.0))
        throw InvalidInput("mp_stieltjes is undefined at z = 0");

    const auto rhs = [&](std::complex<double> m) {
        std::complex<double> acc(0.0, 0.0);
        const std::complex<double> shift = 1.0 - c - c * z * m;
        for (const auto& a : bulk.atoms()) acc += a.weight / (a.location * shift - z);
        return acc;
    };

    std::complex<double> m = -1.0 / z;
    for (int it = 0; it < options.max_iterations; ++it) {
        const std::complex<double> next =
            (1.0 - options.damping) * m + options.damping * rhs(m);
        if (std::abs(next - m) < options.tolerance) {
            m = next;
            if (z.imag() > 0.0 && m.imag() < -1e-10)
                throw NumericalError("mp_stieltjes converged to the wrong branch");
            return m;
        }
        m = next;
    }
    throw NumericalError("mp_stieltjes fixed point did not converge; residual " +
                         std::to_string(std::abs(m - rhs(m))));
}

}  // namespace nfactor
