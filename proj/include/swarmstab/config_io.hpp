#ifndef SWARMSTAB_CONFIG_IO_HPP
#define SWARMSTAB_CONFIG_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmstab/control.hpp"
#include "swarmstab/objective.hpp"
#include "swarmstab/optim.hpp"
#include "swarmstab/plant.hpp"

namespace swarmstab {

using Json = nlohmann::ordered_json;

enum class Algorithm { none, pso, bfo };

Algorithm parse_algorithm(const std::string& s);
std::string to_string(Algorithm a);

/// One scenario plus everything needed to tune and compare on it.
struct RunConfig {
    std::string scenario_ref;  ///< empty when inline
    Scenario scenario;
    Algorithm optimizer = Algorithm::none;
    PsoConfig pso;
    BfoConfig bfo;
    std::string baseline_ref;  ///< empty when inline or taken from the scenario
    PidGains baseline_pid;
    StabilizerParams baseline_stabilizer;
    Bounds bounds = Bounds::controller_default();
    std::optional<std::string> output_dir;
    std::uint64_t seed = 1;
    bool parallel = false;
};

/// Several run configs compared side by side.
struct CompareConfig {
    std::vector<RunConfig> runs;
    std::optional<std::string> output_dir;
};

/// BFO settings used for controller tuning when a run config gives none.
BfoConfig tuning_bfo_defaults();

Json read_json_file(const std::filesystem::path& path);

PlantConfig plant_from_json(const Json& j, const std::string& where = "plant");
PidGains pid_from_json(const Json& j, const std::string& where = "pid");
StabilizerParams stabilizer_from_json(const Json& j, const std::string& where = "stabilizer");
LoopWiring wiring_from_json(const Json& j, const std::string& where = "wiring");
ControlLimits limits_from_json(const Json& j, const std::string& where = "limits");
Disturbance disturbance_from_json(const Json& j, const std::string& where = "disturbance");
ObjectiveWeights weights_from_json(const Json& j, const std::string& where = "weights");
Bounds bounds_from_json(const Json& j, const std::string& where = "bounds");
PsoConfig pso_from_json(const Json& j, const std::string& where = "pso");
BfoConfig bfo_from_json(const Json& j, const std::string& where = "bfo", const BfoConfig& base = {});

/// Relative references resolve against `base_dir`.
Scenario scenario_from_json(const Json& j, const std::filesystem::path& base_dir);
RunConfig run_config_from_json(const Json& j, const std::filesystem::path& base_dir);
CompareConfig compare_config_from_json(const Json& j, const std::filesystem::path& base_dir);

PlantConfig load_plant_config(const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);
/// Accepts a run config or a bare scenario.
RunConfig load_run_config(const std::filesystem::path& path);
/// Accepts a compare config, a run config or a bare scenario.
CompareConfig load_compare_config(const std::filesystem::path& path);

enum class ConfigKind { plant, scenario, run, compare };
ConfigKind detect_kind(const Json& j);

Json to_json(const PlantConfig& c);
Json to_json(const PidGains& g);
Json to_json(const StabilizerParams& s);
Json to_json(const LoopWiring& w);
Json to_json(const ControlLimits& l);
Json to_json(const Disturbance& d);
Json to_json(const ObjectiveWeights& w);
Json to_json(const Bounds& b);
Json to_json(const Scenario& s);
/// Seed and parallelism are left out: they are reported separately and must
/// not change the echoed configuration.
Json to_json(const PsoConfig& c);
Json to_json(const BfoConfig& c);
/// Fully resolved; output location and parallelism are omitted.
Json to_json(const RunConfig& c);

}  // namespace swarmstab

#endif  // SWARMSTAB_CONFIG_IO_HPP
