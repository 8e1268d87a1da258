#include "nfactor/population.hpp"

namespace nfactor {

std::string to_string(Population pop) {
    switch (pop) {
        case Population::normal: return "normal";
        case Population::uniform_chisq: return "uniform_chisq";
        case Population::t2: return "t2";
        case Population::cauchy: return "cauchy";
    }
    return "unknown";
}

Population parse_population(const std::string& name) {
    if (name == "normal") return Population::normal;
    if (name == "uniform_chisq") return Population::uniform_chisq;
    if (name == "t2") return Population::t2;
    if (name == "cauchy") return Population::cauchy;
    throw InvalidInput("unknown population: " + name);
}

double draw_inv_gamma(double shape, double scale, std::mt19937_64& rng) {
    std::gamma_distribution<double> gamma(shape, 1.0 / scale);
    double g = gamma(rng);
    while (g == 0.0) g = gamma(rng);  // guard underflow at tiny shapes
    return 1.0 / g;
}

double draw_factor_weight(Population pop, std::mt19937_64& rng) {
    switch (pop) {
        case Population::normal: return 1.0;
        case Population::uniform_chisq: {
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            return unif(rng);
        }
        case Population::t2: return draw_inv_gamma(1.0, 1.0, rng);
        case Population::cauchy: return draw_inv_gamma(0.5, 0.5, rng);
    }
    throw InvalidInput("unknown population");
}

double draw_error_weight(Population pop, std::mt19937_64& rng) {
    switch (pop) {
        case Population::normal: return 1.0;
        case Population::uniform_chisq: {
            std::chi_squared_distribution<double> chisq(1.0);
            return chisq(rng);
        }
        case Population::t2: return draw_inv_gamma(1.0, 1.0, rng);
        case Population::cauchy: return draw_inv_gamma(0.5, 0.5, rng);
    }
    throw InvalidInput("unknown population");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace nfactor
