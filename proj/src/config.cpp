#include "xllsim/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace xllsim {

namespace {

using nlohmann::json;

WorkloadModel parse_workload(const json& entry) {
    WorkloadModel model;
    if (!entry.contains("name") || !entry.contains("kind")) {
        throw ConfigError("workload entry needs 'name' and 'kind'");
    }
    model.name = entry.at("name").get<std::string>();
    std::string kind = entry.at("kind").get<std::string>();
    if (kind == "linear") {
        model.curve = SpeedupCurve::linear();
    } else if (kind == "amdahl") {
        model.curve =
            SpeedupCurve::amdahl(entry.at("parallel_fraction").get<double>());
    } else if (kind == "saturating") {
        model.curve = SpeedupCurve::saturating(
            entry.at("parallel_fraction").get<double>(),
            entry.at("saturation_threads").get<int>(),
            entry.value("post_peak_slope", 0.0));
    } else {
        throw ConfigError("workload '" + model.name + "': unknown kind '" +
                          kind + "'");
    }
    model.total_work = entry.at("total_work").get<Jiffies>();
    model.init_jiffies = entry.value("init_jiffies", Jiffies{0});
    model.thread_count = entry.value("threads", 1);
    model.sleep_jiffies = entry.value("sleep_jiffies", Jiffies{0});
    if (model.total_work == 0) {
        throw ConfigError("workload '" + model.name + "': total_work must be > 0");
    }
    if (model.thread_count < 1) {
        throw ConfigError("workload '" + model.name + "': threads must be >= 1");
    }
    return model;
}

void parse_engine(const json& section, SimConfig& config) {
    config.total_cores = section.value("cores", config.total_cores);
    config.reserve_core_zero =
        section.value("reserve_core_zero", config.reserve_core_zero);
    config.resolution_bump =
        section.value("resolution_bump", config.resolution_bump);
    config.sched_load_scale =
        section.value("sched_load_scale", config.sched_load_scale);
    config.balance_interval =
        section.value("balance_interval", config.balance_interval);
    config.snapshot_staleness =
        section.value("staleness", config.snapshot_staleness);
    config.spawn_stagger = section.value("stagger", config.spawn_stagger);
    config.creation_jitter = section.value("jitter", config.creation_jitter);
    config.migration_warmup = section.value("warmup", config.migration_warmup);
    config.rng_seed = section.value("seed", config.rng_seed);
}

}  // namespace

ProjectConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    ProjectConfig config;
    if (root.contains("workloads")) {
        for (const json& entry : root.at("workloads")) {
            WorkloadModel model = parse_workload(entry);
            config.workloads[model.name] = model;
        }
    }
    if (root.contains("engine")) {
        parse_engine(root.at("engine"), config.engine);
    }
    if (root.contains("scenario")) {
        const json& section = root.at("scenario");
        config.has_scenario = true;
        config.scenario.name = section.value("name", std::string("custom"));
        config.scenario.base_config = config.engine;
        if (section.contains("policies")) {
            for (const json& name : section.at("policies")) {
                auto policy = policy_from_name(name.get<std::string>());
                if (!policy) {
                    throw ConfigError("unknown policy '" +
                                      name.get<std::string>() + "'");
                }
                config.scenario.policies.push_back(*policy);
            }
        }
        Tick previous = 0;
        for (const json& entry : section.at("submissions")) {
            std::string workload = entry.at("workload").get<std::string>();
            auto model = resolve_workload(config, workload);
            if (!model) {
                throw ConfigError("scenario refers to unknown workload '" +
                                  workload + "'");
            }
            if (entry.contains("threads")) {
                model->thread_count = entry.at("threads").get<int>();
            }
            Tick at = entry.value("at", Tick{0});
            if (at < previous) {
                throw ConfigError("submission ticks must be non-decreasing");
            }
            previous = at;
            config.scenario.submissions.push_back(Submission{*model, at});
        }
    }
    return config;
}

ProjectConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::optional<WorkloadModel> resolve_workload(const ProjectConfig& config,
                                              const std::string& name) {
    auto it = config.workloads.find(name);
    if (it != config.workloads.end()) return it->second;
    return find_stock_model(name);
}

}  // namespace xllsim
