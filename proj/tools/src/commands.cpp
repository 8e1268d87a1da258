#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "fredmd.hpp"
#include "nfactor/simulate.hpp"
#include "nfactor/theory.hpp"
#include "scenario_io.hpp"

namespace nfactor::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

int guarded(std::ostream& err, const std::function<void()>& body) {
    try {
        body();
        return kExitOk;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

ordered_json json_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

std::string fixed6(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

TiePolicy parse_ties(const std::string& name) {
    if (name == "midrank") return TiePolicy::midrank;
    if (name == "jitter") return TiePolicy::jitter;
    throw InvalidInput("unknown tie policy: " + name + " (midrank|jitter)");
}

std::vector<Method> resolve_methods(const std::vector<std::string>& names) {
    std::vector<Method> methods;
    for (const auto& name : names) {
        if (name == "all") {
            return {Method::SR, Method::NE, Method::ED, Method::MKTCR, Method::ACT};
        }
        methods.push_back(parse_method(name));
    }
    if (methods.empty()) throw InvalidInput("no estimation method selected");
    return methods;
}

// Output stream selector: file when a path is given, otherwise fallback.
class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback)
        : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw InvalidInput("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

private:
    std::ofstream file_;
    std::ostream& fallback_;
};

}  // namespace

int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (opts.format != "json" && opts.format != "csv")
            throw InvalidInput("unknown output format: " + opts.format + " (json|csv)");
        const std::vector<Method> methods = resolve_methods(opts.methods);
        const TiePolicy ties = parse_ties(opts.ties);

        NumericTable table = read_numeric_csv(opts.input, opts.transpose);
        DataMatrix data(std::move(table.values));

        std::vector<EstimateResult> results;
        for (Method m : methods) {
            if (m == Method::SR)
                results.push_back(
                    estimate_sr_from_spectrum(eigen_sym(spearman(data, ties, opts.seed)),
                                              opts.k_max));
            else
                results.push_back(estimate(m, data, opts.k_max, ties));
        }

        if (opts.format == "csv") {
            out << "method,k_hat\n";
            for (const auto& r : results)
                out << to_string(r.method) << ',' << r.k_hat << '\n';
            return;
        }

        ordered_json report;
        report["input"] = opts.input;
        report["n"] = data.n();
        report["p"] = data.p();
        report["kmax"] = opts.k_max;
        report["ties"] = opts.ties;
        report["results"] = ordered_json::array();
        for (const auto& r : results) {
            ordered_json item;
            item["method"] = to_string(r.method);
            item["k_hat"] = r.k_hat;
            item["k_max"] = r.k_max;
            item["threshold"] = json_or_null(r.threshold);
            item["warnings"] = r.warnings;
            ordered_json trace = ordered_json::array();
            for (double v : r.trace) trace.push_back(json_or_null(v));
            item["trace"] = std::move(trace);
            report["results"].push_back(std::move(item));
        }
        out << report.dump(2) << "\n";
    });
}

int cmd_spectrum(const SpectrumOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const CorrKind kind = parse_corr_kind(opts.matrix);
        NumericTable table = read_numeric_csv(opts.input, opts.transpose);
        DataMatrix data(std::move(table.values));

        CorrMatrix m = [&] {
            switch (kind) {
                case CorrKind::spearman:
                    return spearman(data, TiePolicy::midrank, opts.seed);
                case CorrKind::pearson: return pearson(data);
                case CorrKind::covariance: return covariance(data);
                case CorrKind::mkendall: return mkendall(data);
            }
            throw InvalidInput("unknown matrix kind");
        }();
        Spectrum s = eigen_sym(m);

        Index top = opts.top <= 0 ? s.p : Index(opts.top);
        if (top > s.p) {
            err << "warning: --top " << top << " clipped to p=" << s.p << "\n";
            top = s.p;
        }
        out << "index,eigenvalue\n";
        out << std::setprecision(17);
        for (Index j = 1; j <= top; ++j) out << j << ',' << s.lambda(j) << '\n';
    });
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScenarioConfig config = scenario_from_file(opts.config);
        const FrequencyTable table =
            run_scenario(config.spec, config.methods, opts.threads);

        OutputTarget target(opts.out, out);
        std::ostream& os = target.stream();
        os << "method,correct_pct,over_pct,under_pct,failed_pct,mean_k_hat\n";
        for (const auto& row : table.rows) {
            os << to_string(row.method) << ',' << fixed6(row.correct_pct(table.reps))
               << ',' << fixed6(row.over_pct(table.reps)) << ','
               << fixed6(row.under_pct(table.reps)) << ','
               << fixed6(row.failed_pct(table.reps)) << ','
               << fixed6(row.mean_k_hat) << '\n';
        }
    });
}

namespace {

std::vector<double> parse_number_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        const auto v = parse_cell(token);
        if (!v) throw InvalidInput(std::string(what) + ": empty entry");
        out.push_back(*v);
    }
    if (out.empty()) throw InvalidInput(std::string(what) + ": empty list");
    return out;
}

BulkDistribution parse_bulk_atoms(const std::string& text) {
    std::vector<BulkAtom> atoms;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        const auto colon = token.find(':');
        if (colon == std::string::npos)
            throw InvalidInput("bulk atom '" + token + "' is not location:weight");
        const auto loc = parse_cell(token.substr(0, colon));
        const auto w = parse_cell(token.substr(colon + 1));
        if (!loc || !w) throw InvalidInput("bulk atom '" + token + "' is incomplete");
        atoms.push_back({*loc, *w});
    }
    return BulkDistribution(atoms);
}

}  // namespace

int cmd_theory(const TheoryOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        SpikeModel model{parse_number_list(opts.spikes, "spikes"),
                         parse_bulk_atoms(opts.bulk_atoms), opts.c};
        const SignificantCount result = count_significant(model);

        ordered_json report;
        report["c"] = opts.c;
        report["threshold_alpha"] = result.threshold_alpha;
        report["bulk_right_edge"] = result.bulk_right_edge;
        report["k0"] = result.k0;
        report["spikes"] = ordered_json::array();
        for (const auto& v : result.verdicts) {
            ordered_json item;
            item["alpha"] = v.alpha;
            item["detectable"] = v.detectable;
            item["inside_bulk"] = v.inside_bulk;
            item["psi_prime"] = json_or_null(v.psi_prime_value);
            item["predicted_limit"] = v.predicted_limit;
            report["spikes"].push_back(std::move(item));
        }
        out << report.dump(2) << "\n";
    });
}

int cmd_gamma(const GammaOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const GammaEstimate g =
            gamma_mc(parse_population(opts.population), opts.samples, opts.seed);
        ordered_json report;
        report["population"] = opts.population;
        report["samples"] = g.samples;
        report["seed"] = opts.seed;
        report["gamma"] = g.gamma;
        report["standard_error"] = g.standard_error;
        report["diverged"] = g.diverged;
        out << report.dump(2) << "\n";
    });
}

int cmd_ingest_fredmd(const IngestOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const IngestResult result = ingest_fredmd_file(opts.input);
        for (const auto& name : result.dropped_names)
            err << "note: dropped column with missing values: " << name << "\n";
        err << "note: kept " << result.kept_names.size() << " columns, "
            << result.values.rows() << " rows (trimmed " << result.trimmed_rows
            << " leading rows)\n";

        OutputTarget target(opts.out, out);
        std::ostream& os = target.stream();
        write_csv_row(os, result.kept_names);
        os << std::setprecision(17);
        for (Index r = 0; r < result.values.rows(); ++r) {
            for (Index c = 0; c < result.values.cols(); ++c) {
                if (c) os << ',';
                os << result.values(r, c);
            }
            os << '\n';
        }
    });
}

}  // namespace nfactor::cli
