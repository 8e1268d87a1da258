#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nfactor/simulate.hpp"

namespace nfactor::cli {

struct ScenarioConfig {
    ScenarioSpec spec;
    std::vector<Method> methods;
};

// Parses the scenario schema with exactly the keys
//   population, case, p, n, K, kmax, reps, seed, estimators.
// Unknown keys and type mismatches are rejected with a JSON pointer to
// the offending field.
ScenarioConfig scenario_from_json(const nlohmann::json& j);

ScenarioConfig scenario_from_file(const std::string& path);

}  // namespace nfactor::cli
