#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nfactor/estimators.hpp"

namespace nfactor::cli {

// Exit-code contract: 0 success, 2 input/config error, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

struct EstimateOptions {
    std::string input;
    std::vector<std::string> methods{"all"};
    int k_max = 20;
    std::string ties = "midrank";
    std::string format = "json";  // json | csv
    bool transpose = false;
    std::uint64_t seed = 0;
};

struct SpectrumOptions {
    std::string input;
    std::string matrix = "spearman";
    int top = 0;  // 0 = all
    bool transpose = false;
    std::uint64_t seed = 0;
};

struct SimulateOptions {
    std::string config;
    std::string out;  // empty = stdout
    int threads = 0;
};

struct TheoryOptions {
    std::string spikes;      // "3.0,1.2"
    std::string bulk_atoms;  // "loc:weight,loc:weight"
    double c = 0.0;
};

struct GammaOptions {
    std::string population = "normal";
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 0;
};

struct IngestOptions {
    std::string input;
    std::string out;  // empty = stdout
};

int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_spectrum(const SpectrumOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_theory(const TheoryOptions& opts, std::ostream& out, std::ostream& err);
int cmd_gamma(const GammaOptions& opts, std::ostream& out, std::ostream& err);
int cmd_ingest_fredmd(const IngestOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace nfactor::cli
