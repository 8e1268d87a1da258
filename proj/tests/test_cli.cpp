#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "csv.hpp"
#include "fredmd.hpp"
#include "nfactor/simulate.hpp"
#include "scenario_io.hpp"

using namespace nfactor;
using namespace nfactor::cli;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("nfactor_test_" + name);
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string factor_csv(Index p, Index n, Index k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Loadings l = make_loadings({LoadingCase::C2, p, k}, rng);
    DataMatrix y = sample_factor_model(l.B, l.Psi, Population::normal, n, rng);
    std::ostringstream os;
    os.precision(17);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) {
            if (j) os << ',';
            os << y.values()(i, j);
        }
        os << '\n';
    }
    return os.str();
}

int spawn(const std::string& args, const fs::path& stderr_path = {}) {
    std::string cmd = std::string(NFACTOR_CLI_BINARY) + " " + args + " >/dev/null";
    cmd += stderr_path.empty() ? " 2>/dev/null" : (" 2>" + stderr_path.string());
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("csv parser handles quotes, blank lines and CRLF") {
    std::istringstream in("a,\"b,1\",\"say \"\"hi\"\"\"\r\n\r\n1,2,3\n");
    const auto rows = parse_csv(in);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][1] == "b,1");
    CHECK(rows[0][2] == "say \"hi\"");
    CHECK(rows[1][0] == "1");
}

TEST_CASE("numeric csv reader detects headers and reports locations") {
    const fs::path good = temp_file("good.csv");
    write_file(good, "x,y\n1,2\n3,4\n");
    NumericTable t = read_numeric_csv(good.string());
    CHECK(t.header == std::vector<std::string>{"x", "y"});
    CHECK(t.values(1, 1) == 4.0);

    const fs::path transposed = temp_file("transposed.csv");
    write_file(transposed, "1,3\n2,4\n");
    NumericTable tt = read_numeric_csv(transposed.string(), true);
    CHECK(tt.values(0, 1) == 2.0);

    const fs::path ragged = temp_file("ragged.csv");
    write_file(ragged, "1,2\n3\n");
    try {
        read_numeric_csv(ragged.string());
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }

    const fs::path bad_cell = temp_file("bad_cell.csv");
    write_file(bad_cell, "1,2\n3,oops\n");
    try {
        read_numeric_csv(bad_cell.string());
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 2") != std::string::npos);
        CHECK(msg.find("column 2") != std::string::npos);
    }

    const fs::path missing = temp_file("missing.csv");
    write_file(missing, "1,2\n3,\n");
    CHECK_THROWS_AS(read_numeric_csv(missing.string()), InvalidInput);
}

TEST_CASE("transform codes match their definitions") {
    const std::vector<double> level{100.0, 110.0, 121.0};
    const auto dlog = apply_transform(level, TransformCode(5));
    CHECK(std::isnan(dlog[0]));
    CHECK(dlog[1] == doctest::Approx(std::log(1.1)).epsilon(1e-12));
    CHECK(dlog[2] == doctest::Approx(std::log(1.1)).epsilon(1e-12));

    CHECK(apply_transform(level, TransformCode(1)) == level);

    const std::vector<double> x{1.0, 3.0, 6.0, 10.0};
    const auto d2 = apply_transform(x, TransformCode(3));
    CHECK(std::isnan(d2[0]));
    CHECK(std::isnan(d2[1]));
    CHECK(d2[2] == doctest::Approx(1.0));
    CHECK(d2[3] == doctest::Approx(1.0));

    const auto dpct = apply_transform(x, TransformCode(7));
    CHECK(std::isnan(dpct[1]));
    CHECK(dpct[2] == doctest::Approx(1.0 - 2.0));  // 6/3-1 minus 3/1-1

    CHECK_THROWS_AS(TransformCode(0), InvalidInput);
    CHECK_THROWS_AS(TransformCode(8), InvalidInput);
}

TEST_CASE("fredmd ingestion drops incomplete columns and trims for differencing") {
    const std::vector<std::vector<std::string>> rows{
        {"sasdate", "a", "b", "c", "d"},
        {"Transform:", "1", "5", "6", "2"},
        {"3/1/1959", "1", "100", "100", "5"},
        {"4/1/1959", "2", "110", "105", ""},
        {"5/1/1959", "3", "121", "110.25", "7"},
        {"6/1/1959", "4", "133.1", "115.7625", "8"},
    };
    IngestResult r = ingest_fredmd(rows);
    CHECK(r.trimmed_rows == 2);  // tcode 6 loses two leading rows
    CHECK(r.kept_names == std::vector<std::string>{"a", "b", "c"});
    CHECK(r.dropped_names == std::vector<std::string>{"d"});
    REQUIRE(r.values.rows() == 2);
    REQUIRE(r.values.cols() == 3);
    CHECK(r.values(0, 0) == 3.0);                      // level passthrough
    CHECK(r.values(0, 1) == doctest::Approx(std::log(1.1)));
    // c grows by exactly 5% each step: second log difference is 0
    CHECK(r.values(0, 2) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(r.values(1, 2) == doctest::Approx(0.0).epsilon(1e-10));

    auto bad = rows;
    bad[1][2] = "9";
    CHECK_THROWS_AS(ingest_fredmd(bad), InvalidInput);
}

TEST_CASE("scenario json schema is strict") {
    nlohmann::json j = {{"population", "normal"}, {"case", "C1"}, {"p", 40},
                        {"n", 80},                {"K", 3},       {"kmax", 10},
                        {"reps", 5},              {"seed", 42},
                        {"estimators", {"sr", "ne"}}};
    ScenarioConfig c = scenario_from_json(j);
    CHECK(c.spec.p == 40);
    CHECK(c.methods.size() == 2);

    auto unknown = j;
    unknown["bogus"] = 1;
    try {
        scenario_from_json(unknown);
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("/bogus") != std::string::npos);
    }

    auto missing = j;
    missing.erase("seed");
    try {
        scenario_from_json(missing);
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("/seed") != std::string::npos);
    }

    auto bad_estimator = j;
    bad_estimator["estimators"] = {"sr", "bogus"};
    try {
        scenario_from_json(bad_estimator);
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("/estimators/1") != std::string::npos);
    }
}

TEST_CASE("cmd_estimate emits a stable json report") {
    const fs::path csv = temp_file("estimate.csv");
    write_file(csv, factor_csv(40, 120, 2, 31));

    EstimateOptions opts;
    opts.input = csv.string();
    opts.methods = {"all"};
    opts.k_max = 12;

    std::ostringstream out, err;
    REQUIRE(cmd_estimate(opts, out, err) == kExitOk);
    const auto report = nlohmann::json::parse(out.str());
    CHECK(report["p"] == 40);
    CHECK(report["n"] == 120);
    REQUIRE(report["results"].size() == 5);
    CHECK(report["results"][0]["method"] == "sr");
    CHECK(report["results"][0]["k_hat"] == 2);
    for (const auto& item : report["results"]) {
        CHECK(item["k_hat"].get<int>() >= 0);
        CHECK(item["k_hat"].get<int>() <= 40);
    }

    // identical invocation produces identical bytes
    std::ostringstream out2, err2;
    REQUIRE(cmd_estimate(opts, out2, err2) == kExitOk);
    CHECK(out.str() == out2.str());

    opts.format = "csv";
    std::ostringstream out3, err3;
    REQUIRE(cmd_estimate(opts, out3, err3) == kExitOk);
    CHECK(out3.str().rfind("method,k_hat\n", 0) == 0);
    CHECK(out3.str().find("sr,2") != std::string::npos);
}

TEST_CASE("cmd_spectrum clips top and emits a sorted spectrum") {
    const fs::path csv = temp_file("spectrum.csv");
    write_file(csv, factor_csv(20, 60, 1, 32));

    SpectrumOptions opts;
    opts.input = csv.string();
    opts.matrix = "spearman";
    opts.top = 50;

    std::ostringstream out, err;
    REQUIRE(cmd_spectrum(opts, out, err) == kExitOk);
    CHECK(err.str().find("clipped") != std::string::npos);

    std::istringstream parsed(out.str());
    std::string line;
    std::getline(parsed, line);
    CHECK(line == "index,eigenvalue");
    double prev = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    int count = 0;
    while (std::getline(parsed, line)) {
        const auto comma = line.find(',');
        const double v = std::stod(line.substr(comma + 1));
        CHECK(v <= prev);
        prev = v;
        sum += v;
        ++count;
    }
    CHECK(count == 20);
    CHECK(sum == doctest::Approx(20.0).epsilon(1e-8));  // trace identity
}

TEST_CASE("cmd_simulate writes a byte-stable table") {
    const fs::path config = temp_file("scenario.json");
    write_file(config, R"({"population":"normal","case":"C2","p":30,"n":60,
      "K":2,"kmax":8,"reps":5,"seed":7,"estimators":["sr","ne"]})");

    SimulateOptions opts;
    opts.config = config.string();

    std::ostringstream out1, out2, err;
    REQUIRE(cmd_simulate(opts, out1, err) == kExitOk);
    REQUIRE(cmd_simulate(opts, out2, err) == kExitOk);
    CHECK(out1.str() == out2.str());
    CHECK(out1.str().rfind("method,correct_pct,over_pct,under_pct,failed_pct,mean_k_hat\n",
                           0) == 0);
    CHECK(out1.str().find("sr,") != std::string::npos);
}

TEST_CASE("cmd_theory reports verdicts") {
    TheoryOptions opts;
    opts.spikes = "3.0,1.2";
    opts.bulk_atoms = "1.0:1.0";
    opts.c = 0.5;

    std::ostringstream out, err;
    REQUIRE(cmd_theory(opts, out, err) == kExitOk);
    const auto report = nlohmann::json::parse(out.str());
    CHECK(report["k0"] == 1);
    CHECK(report["spikes"][0]["detectable"] == true);
    CHECK(report["spikes"][0]["predicted_limit"].get<double>() ==
          doctest::Approx(3.75));
    CHECK(report["spikes"][1]["detectable"] == false);

    TheoryOptions tiny = opts;
    tiny.spikes = "2.0";
    tiny.c = 0.0001;
    std::ostringstream out2, err2;
    REQUIRE(cmd_theory(tiny, out2, err2) == kExitOk);
    const auto report2 = nlohmann::json::parse(out2.str());
    CHECK(report2["spikes"][0]["detectable"] == true);
    CHECK(report2["spikes"][0]["predicted_limit"].get<double>() ==
          doctest::Approx(2.0).epsilon(1e-3));

    TheoryOptions below = opts;
    below.spikes = "0.8";
    std::ostringstream out3, err3;
    REQUIRE(cmd_theory(below, out3, err3) == kExitOk);
    CHECK(nlohmann::json::parse(out3.str())["spikes"][0]["inside_bulk"] == true);

    TheoryOptions malformed = opts;
    malformed.bulk_atoms = "1.0";
    std::ostringstream out4, err4;
    CHECK(cmd_theory(malformed, out4, err4) == kExitInput);
}

TEST_CASE("cmd_gamma reports the closed form for the normal population") {
    GammaOptions opts;
    opts.population = "normal";
    opts.samples = 10000;

    std::ostringstream out, err;
    REQUIRE(cmd_gamma(opts, out, err) == kExitOk);
    const auto report = nlohmann::json::parse(out.str());
    CHECK(report["gamma"].get<double>() ==
          doctest::Approx(3.0 / 3.14159265358979323846).epsilon(1e-10));
    CHECK(report["diverged"] == false);
}

TEST_CASE("binary exit codes follow the contract") {
    CHECK(spawn("estimate /nonexistent.csv --method sr") == 2);

    const fs::path ragged = temp_file("spawn_ragged.csv");
    write_file(ragged, "1,2\n3\n");
    CHECK(spawn("estimate " + ragged.string() + " --method sr") == 2);

    const fs::path constant = temp_file("spawn_constant.csv");
    write_file(constant, factor_csv(10, 40, 1, 33));
    {
        // append a constant column
        std::string body = slurp(constant);
        std::string patched;
        for (const char c : body) {
            if (c == '\n') patched += ",5.0";
            patched += c;
        }
        write_file(constant, patched);
    }
    const fs::path stderr_path = temp_file("spawn_stderr.txt");
    CHECK(spawn("estimate " + constant.string() + " --method act --kmax 5",
                stderr_path) == 2);
    CHECK(slurp(stderr_path).find("column") != std::string::npos);

    const fs::path ok = temp_file("spawn_ok.csv");
    write_file(ok, factor_csv(20, 60, 1, 34));
    CHECK(spawn("estimate " + ok.string() + " --method sr --kmax 8") == 0);

    CHECK(spawn("theory --spikes 2.0 --bulk-atoms nonsense --c 0.5") == 2);
    CHECK(spawn("gamma --population normal --samples 100") == 2);
}
