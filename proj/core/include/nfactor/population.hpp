#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "nfactor/errors.hpp"

namespace nfactor {

// The four scale-mixture populations of the simulation design. Each
// defines the law of the factor mixing weight w^f and the per-entry
// error mixing weight w^e:
//   normal        w^f = w^e = 1
//   uniform_chisq w^f ~ Uniform(0,1),      w^e ~ chi-squared(1)
//   t2            w^f, w^e ~ invGamma(1,1)        (Student's t(2) margins)
//   cauchy        w^f, w^e ~ invGamma(1/2,1/2)    (Cauchy margins)
enum class Population { normal, uniform_chisq, t2, cauchy };

std::string to_string(Population pop);
Population parse_population(const std::string& name);

// invGamma(shape a, scale b) with density proportional to
// w^{-(a+1)} exp(-b/w), sampled as 1/Gamma(shape=a, scale=1/b).
double draw_inv_gamma(double shape, double scale, std::mt19937_64& rng);

double draw_factor_weight(Population pop, std::mt19937_64& rng);
double draw_error_weight(Population pop, std::mt19937_64& rng);

// Derives the RNG seed of an independent substream (replication r of a
// seeded run) via two rounds of the splitmix64 finalizer. Never
// sequential reseeding, so replications may be generated on any thread
// in any order with identical results.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace nfactor
