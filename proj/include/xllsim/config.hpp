#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "xllsim/scenario.hpp"
#include "xllsim/workloads.hpp"

namespace xllsim {

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Declarative project configuration, all sections optional:
///
///   {
///     "workloads": [ {"name": ..., "kind": "linear|amdahl|saturating",
///                     "parallel_fraction": ..., "saturation_threads": ...,
///                     "post_peak_slope": ..., "total_work": ...,
///                     "init_jiffies": ..., "threads": ...,
///                     "sleep_jiffies": ...}, ... ],
///     "engine":    { "cores": ..., "reserve_core_zero": ...,
///                    "resolution_bump": ..., "sched_load_scale": ...,
///                    "balance_interval": ..., "staleness": ...,
///                    "stagger": ..., "jitter": ..., "warmup": ...,
///                    "seed": ... },
///     "scenario":  { "name": ..., "policies": [...],
///                    "submissions": [ {"workload": ..., "at": ...}, ... ] }
///   }
///
/// Workload entries may also carry a free-form "rationale" string.
struct ProjectConfig {
    std::map<std::string, WorkloadModel> workloads;  // by name
    SimConfig engine;
    bool has_scenario = false;
    Scenario scenario;
};

ProjectConfig load_config(const std::filesystem::path& path);
ProjectConfig parse_config(const std::string& text);

/// Stock model by name, shadowed by any same-named entry in `config`.
std::optional<WorkloadModel> resolve_workload(const ProjectConfig& config,
                                              const std::string& name);

}  // namespace xllsim
