#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "omegalab/dynamics.hpp"
#include "omegalab/omega.hpp"

namespace omegalab::harness {

using nlohmann::json;

/// Malformed or invalid scenario input.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CheckSpec {
    std::string name;
    json params = json::object();
    /// "pass" (default) or "fail": a check expected to fail is a negative control.
    bool expect_pass = true;
};

/// Names accepted in a scenario's "checks" list.
const std::vector<std::string>& check_registry();

struct ScenarioConfig {
    std::string id;
    json map_spec = json::object();
    dynamics::DynamicalMap map = dynamics::DynamicalMap::dendrite_f0();
    spaces::Point start = spaces::DendritePoint::baseline(0);
    std::size_t steps = 1;    // N
    std::size_t burn_in = 0;  // B
    double eps_net = 0.01;
    double eps_comp = 0.01;
    double slack = 0.0;
    std::size_t n_max = 1000;
    double tol = 1e-9;
    std::optional<omega::Target> target;
    std::size_t sampling = 4097;
    /// Replaces the orbit tail as the omega estimate (hand-built fixtures).
    std::optional<std::vector<spaces::Point>> net_override;
    std::vector<CheckSpec> checks;

    /// Throws ConfigError on violated invariants.
    void validate() const;
};

// Point and map encodings. Rationals are "p/q" strings.
json point_to_json(const spaces::Point& p);
spaces::Point point_from_json(const json& j);
dynamics::DynamicalMap map_from_json(const json& j);
flows::IntegratorConfig integrator_from_json(const json& j);

ScenarioConfig scenario_from_json(const json& j);
ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace omegalab::harness
