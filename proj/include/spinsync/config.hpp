#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "spinsync/catalog.hpp"
#include "spinsync/grid.hpp"

namespace spinsync {

using Json = nlohmann::ordered_json;

struct SignalConfig {
    std::string family = "semiclassical";
    Json params = Json::object();
};

struct OutputConfig {
    std::string path;  ///< empty means standard output
    std::string format = "csv";
};

struct OptimizerConfig {
    std::string family = "equatorial_angles";
    int grid = 64;
    double tau_max = 4.0;
};

struct RunConfig {
    ScenarioId scenario;
    /// Multiplies every rate and the detuning before the model is built.
    double unit_rate = 1.0;
    SignalConfig signal;
    double eta = kDefaultEta;
    /// Signal strength for the exact stationary state in `perturb`.
    std::optional<double> epsilon;
    int order = 2;
    std::vector<Axis> sweep;
    OutputConfig output;
    OptimizerConfig optimizer;
    BoundParams bound;
    std::string figure;
};

/// Throws Error(InvalidConfig) on unknown keys, wrong types or values that
/// break a RunConfig invariant.
RunConfig config_from_json(const Json& j);
Json config_to_json(const RunConfig& config);
RunConfig load_config(const std::string& path);

/// Applies `key=value` with a dotted key. The value is read as JSON when it
/// parses, otherwise as a string.
void apply_override(Json& j, const std::string& assignment);

/// Sets a dotted parameter path; throws InvalidConfig when it does not exist.
void set_parameter(Json& j, const std::string& path, double value);
bool has_parameter(const Json& j, const std::string& path);

void validate_config(const RunConfig& config);

/// Returns the scenario with unit_rate applied.
ScenarioId physical_scenario(const RunConfig& config);

/// Builds the signal named in the config for a solver of the configured
/// limit cycle.
SignalSpec build_signal(const RunConfig& config, const PerturbativeSolver& solver);

}  // namespace spinsync
