#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lyapspec/maps.hpp"
#include "lyapspec/wmeasure.hpp"

namespace lyapspec {

using json = nlohmann::json;

// Strict key checking: unknown keys are schema violations.
void check_keys(const json& j, const std::string& context,
                const std::vector<std::string>& required,
                const std::vector<std::string>& optional);

json load_json_file(const std::string& path);

// Map configs: {"family": "manneville_pomeau"|"linear_sft"|"parabolic_linear_blend", ...}
// Optional keys: name, n_max, grid_points.
struct MapConfig {
    std::shared_ptr<MapModel> map;
    std::string name;
    int n_max = 0;        // 0: defaults
    int grid_points = 5;
    json raw;
};
MapConfig map_from_config(const json& j);
MapConfig load_map_config(const std::string& path);

// Schedule configs: {"stages": [...], "switch_times": [...], "policy": {...}}
struct ScheduleConfig {
    std::vector<StageSpec> stages;
    std::vector<long long> switch_times;
    GrowthPolicy policy;
    json raw;
};
ScheduleConfig schedule_from_config(const json& j);
ScheduleConfig load_schedule_config(const std::string& path);

}  // namespace lyapspec
