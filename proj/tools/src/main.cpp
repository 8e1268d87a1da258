#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

using namespace nfactor::cli;

int main(int argc, char** argv) {
    CLI::App app{"Factor-count estimation from the spectra of rank-based "
                 "correlation matrices"};
    app.require_subcommand(1);

    EstimateOptions est;
    CLI::App* estimate = app.add_subcommand(
        "estimate", "Estimate the number of common factors from a CSV matrix");
    estimate->add_option("input", est.input, "CSV with rows = observations")
        ->required();
    estimate->add_option("--method", est.methods,
                         "sr|ne|ed|mktcr|act|all (repeatable)");
    estimate->add_option("--kmax", est.k_max, "Scan cap (default 20)");
    estimate->add_option("--ties", est.ties, "midrank|jitter");
    estimate->add_option("--out", est.format, "Report format: json|csv");
    estimate->add_flag("--transpose", est.transpose,
                       "Input has columns = observations");
    estimate->add_option("--seed", est.seed, "Seed for jitter tie-breaking");

    SpectrumOptions spec;
    CLI::App* spectrum = app.add_subcommand(
        "spectrum", "Emit eigenvalues of a correlation-type matrix as CSV");
    spectrum->add_option("input", spec.input, "CSV with rows = observations")
        ->required();
    spectrum->add_option("--matrix", spec.matrix,
                         "spearman|pearson|covariance|mkendall");
    spectrum->add_option("--top", spec.top, "Emit the top k eigenvalues (0 = all)");
    spectrum->add_flag("--transpose", spec.transpose,
                       "Input has columns = observations");
    spectrum->add_option("--seed", spec.seed, "Seed for jitter tie-breaking");

    SimulateOptions sim;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Run a Monte Carlo scenario from JSON");
    simulate->add_option("--config", sim.config, "Scenario JSON path")->required();
    simulate->add_option("--out", sim.out, "Output CSV path (default stdout)");
    simulate->add_option("--threads", sim.threads, "Worker threads (0 = auto)");

    TheoryOptions theo;
    CLI::App* theory = app.add_subcommand(
        "theory", "Phase-transition predictions for candidate spikes");
    theory->add_option("--spikes", theo.spikes, "Comma-separated spike values")
        ->required();
    theory->add_option("--bulk-atoms", theo.bulk_atoms,
                       "Comma-separated location:weight atoms")
        ->required();
    theory->add_option("--c", theo.c, "Limit of p/n")->required();

    GammaOptions gam;
    CLI::App* gamma = app.add_subcommand(
        "gamma", "Monte Carlo estimate of the spike attenuation constant");
    gamma->add_option("--population", gam.population,
                      "normal|uniform_chisq|t2|cauchy");
    gamma->add_option("--samples", gam.samples, "Sample count (>= 1e4)");
    gamma->add_option("--seed", gam.seed, "RNG seed");

    IngestOptions ing;
    CLI::App* ingest = app.add_subcommand(
        "ingest-fredmd", "Preprocess a FRED-MD CSV into a complete numeric matrix");
    ingest->add_option("input", ing.input, "Raw FRED-MD CSV")->required();
    ingest->add_option("--out", ing.out, "Output CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (estimate->parsed()) return cmd_estimate(est, std::cout, std::cerr);
    if (spectrum->parsed()) return cmd_spectrum(spec, std::cout, std::cerr);
    if (simulate->parsed()) return cmd_simulate(sim, std::cout, std::cerr);
    if (theory->parsed()) return cmd_theory(theo, std::cout, std::cerr);
    if (gamma->parsed()) return cmd_gamma(gam, std::cout, std::cerr);
    if (ingest->parsed()) return cmd_ingest_fredmd(ing, std::cout, std::cerr);
    return kExitInput;
}
