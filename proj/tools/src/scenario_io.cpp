#include "scenario_io.hpp"

#include <fstream>
#include <set>

namespace nfactor::cli {

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
    throw InvalidInput("scenario config: " + pointer + ": " + what);
}

std::int64_t require_int(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) fail(std::string("/") + key, "missing");
    if (!j[key].is_number_integer()) fail(std::string("/") + key, "must be an integer");
    return j[key].get<std::int64_t>();
}

std::string require_string(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) fail(std::string("/") + key, "missing");
    if (!j[key].is_string()) fail(std::string("/") + key, "must be a string");
    return j[key].get<std::string>();
}

}  // namespace

ScenarioConfig scenario_from_json(const nlohmann::json& j) {
    if (!j.is_object()) fail("", "must be a JSON object");
    static const std::set<std::string> known{"population", "case", "p",    "n",
                                             "K",          "kmax", "reps", "seed",
                                             "estimators"};
    for (const auto& item : j.items())
        if (!known.count(item.key())) fail("/" + item.key(), "unknown key");

    ScenarioConfig out;
    try {
        out.spec.population = parse_population(require_string(j, "population"));
    } catch (const InvalidInput& e) {
        if (std::string(e.what()).rfind("scenario config", 0) == 0) throw;
        fail("/population", e.what());
    }
    try {
        out.spec.loading_case = parse_loading_case(require_string(j, "case"));
    } catch (const InvalidInput& e) {
        if (std::string(e.what()).rfind("scenario config", 0) == 0) throw;
        fail("/case", e.what());
    }

    const auto positive = [&](const char* key, std::int64_t min_value) {
        const std::int64_t v = require_int(j, key);
        if (v < min_value)
            fail(std::string("/") + key,
                 "must be at least " + std::to_string(min_value));
        return v;
    };
    out.spec.p = positive("p", 2);
    out.spec.n = positive("n", 4);
    out.spec.K = positive("K", 1);
    out.spec.k_max = int(positive("kmax", 2));
    out.spec.reps = int(positive("reps", 1));

    if (!j.contains("seed")) fail("/seed", "missing");
    if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned())
        fail("/seed", "must be an integer");
    out.spec.seed = j["seed"].get<std::uint64_t>();

    if (!j.contains("estimators")) fail("/estimators", "missing");
    if (!j["estimators"].is_array() || j["estimators"].empty())
        fail("/estimators", "must be a non-empty array of estimator names");
    for (std::size_t i = 0; i < j["estimators"].size(); ++i) {
        const auto& item = j["estimators"][i];
        if (!item.is_string())
            fail("/estimators/" + std::to_string(i), "must be a string");
        try {
            out.methods.push_back(parse_method(item.get<std::string>()));
        } catch (const InvalidInput& e) {
            fail("/estimators/" + std::to_string(i), e.what());
        }
    }

    validate(out.spec);
    return out;
}

ScenarioConfig scenario_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput("scenario config: " + std::string(e.what()));
    }
    return scenario_from_json(j);
}

}  // namespace nfactor::cli
