#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "xllsim/config.hpp"
#include "xllsim/engine.hpp"
#include "xllsim/report.hpp"
#include "xllsim/scenario.hpp"
#include "xllsim/workloads.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> policies;
    int cores = 0;            // 0: keep default
    bool no_reserve = false;
    std::int64_t seed = -1;   // <0: keep default
    std::int64_t staleness = -1;
    std::int64_t stagger = -1;
    std::int64_t jitter = -1;
    std::int64_t warmup = -1;
    std::int64_t bump = -1;
    std::int64_t scale = -1;
    std::int64_t balance_interval = -1;
};

void add_common_flags(CLI::App* cmd, CommonOptions& options) {
    cmd->add_option("--config", options.config_path,
                    "JSON config file; explicit flags win over it");
    cmd->add_option("--policies", options.policies,
                    "comma-separated policies (static,bll,xll,linux)")
        ->delimiter(',');
    cmd->add_option("--cores", options.cores, "total machine cores");
    cmd->add_flag("--no-reserve", options.no_reserve,
                  "use cores 0..N-1 instead of reserving core 0");
    cmd->add_option("--seed", options.seed, "RNG seed");
    cmd->add_option("--staleness", options.staleness,
                    "snapshot staleness in jiffies");
    cmd->add_option("--stagger", options.stagger,
                    "jiffies between thread creations of one team");
    cmd->add_option("--jitter", options.jitter,
                    "max random extra creation delay in jiffies");
    cmd->add_option("--warmup", options.warmup,
                    "jiffies a migrated thread stays cold");
    cmd->add_option("--bump", options.bump, "xll resolution bump");
    cmd->add_option("--scale", options.scale, "SCHED_LOAD_SCALE");
    cmd->add_option("--balance-interval", options.balance_interval,
                    "jiffies between balancing passes");
}

// Flags override config values, config overrides built-in defaults.
void apply_overrides(const CommonOptions& options, xllsim::SimConfig& config) {
    if (options.cores > 0) config.total_cores = options.cores;
    if (options.no_reserve) config.reserve_core_zero = false;
    if (options.seed >= 0) config.rng_seed = static_cast<std::uint64_t>(options.seed);
    if (options.staleness >= 0) config.snapshot_staleness = options.staleness;
    if (options.stagger >= 0) config.spawn_stagger = options.stagger;
    if (options.jitter >= 0) config.creation_jitter = options.jitter;
    if (options.warmup >= 0) config.migration_warmup = options.warmup;
    if (options.bump >= 0) config.resolution_bump = options.bump;
    if (options.scale > 0) config.sched_load_scale = options.scale;
    if (options.balance_interval > 0) config.balance_interval = options.balance_interval;
}

std::vector<xllsim::Policy> resolve_policies(
    const std::vector<std::string>& names, bool& ok) {
    ok = true;
    std::vector<xllsim::Policy> policies;
    if (names.empty()) {
        policies = {xllsim::Policy::static_map, xllsim::Policy::bll,
                    xllsim::Policy::xll, xllsim::Policy::linux_like};
        return policies;
    }
    for (const std::string& name : names) {
        auto policy = xllsim::policy_from_name(name);
        if (!policy) {
            std::cerr << "unknown policy '" << name
                      << "' (expected static, bll, xll or linux)\n";
            ok = false;
            return {};
        }
        policies.push_back(*policy);
    }
    return policies;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

int cmd_run(const CommonOptions& options, const std::string& scenario_name,
            int threads, const std::string& out_dir, const std::string& format,
            bool keep_trace) {
    xllsim::ProjectConfig project;
    if (!options.config_path.empty()) {
        project = xllsim::load_config(options.config_path);
    }

    bool ok = true;
    std::vector<xllsim::Policy> policies = resolve_policies(options.policies, ok);
    if (!ok) return kExitUsage;

    xllsim::Scenario scenario;
    if (scenario_name == "scenario1") {
        scenario = xllsim::scenario_one();
    } else if (scenario_name == "scenario2") {
        scenario = xllsim::scenario_two();
    } else if (scenario_name == "scenario3") {
        scenario = xllsim::scenario_three(threads == 0 ? 16 : threads);
    } else if (std::filesystem::exists(scenario_name)) {
        xllsim::ProjectConfig file = xllsim::load_config(scenario_name);
        if (!file.has_scenario) {
            std::cerr << scenario_name << " has no scenario section\n";
            return kExitUsage;
        }
        scenario = file.scenario;
        if (!scenario.policies.empty() && options.policies.empty()) {
            policies = scenario.policies;
        }
    } else {
        std::cerr << "unknown scenario '" << scenario_name
                  << "' (expected scenario1, scenario2, scenario3 or a config "
                     "file path)\n";
        return kExitUsage;
    }

    apply_overrides(options, scenario.base_config);

    std::vector<xllsim::ScenarioReport> reports;
    for (xllsim::Policy policy : policies) {
        reports.push_back(xllsim::score(scenario, policy, keep_trace));
    }

    std::cout << xllsim::comparison_table(reports);

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::filesystem::path dir(out_dir);
        for (const xllsim::ScenarioReport& report : reports) {
            std::string stem = report.scenario + "_" +
                               std::string(xllsim::policy_name(report.policy));
            if (format == "json") {
                write_file(dir / (stem + ".json"), xllsim::report_to_json(report));
            } else {
                write_file(dir / (stem + ".csv"),
                           xllsim::report_programs_csv(report));
                write_file(dir / (stem + "_load.csv"),
                           xllsim::report_samples_csv(report));
            }
            if (keep_trace) {
                write_file(dir / (stem + ".trace"), report.trace);
            }
        }
        write_file(dir / (scenario.name + "_comparison.csv"),
                   xllsim::comparison_csv(reports));
        std::cout << "\nreports written to " << out_dir << "\n";
    }
    return kExitOk;
}

int cmd_sweep(const CommonOptions& options, const std::string& model_name,
              int max_threads, const std::string& out_path) {
    xllsim::ProjectConfig project;
    if (!options.config_path.empty()) {
        project = xllsim::load_config(options.config_path);
    }
    auto model = xllsim::resolve_workload(project, model_name);
    if (!model) {
        std::cerr << "unknown model '" << model_name
                  << "' (stock: nqueens, strassen, sort, health_small, "
                     "health_medium, health_large)\n";
        return kExitUsage;
    }
    bool ok = true;
    std::vector<xllsim::Policy> policies = resolve_policies(options.policies, ok);
    if (!ok) return kExitUsage;

    xllsim::SimConfig config = project.engine;
    apply_overrides(options, config);
    if (max_threads <= 0) {
        max_threads = static_cast<int>(config.make_core_set().size());
    }

    auto rows = xllsim::single_program_sweep(*model, max_threads, policies, config);
    std::string csv = xllsim::sweep_csv(rows);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        write_file(out_path, csv);
        std::cout << "sweep written to " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_parse_stat(const std::string& path) {
    xllsim::ProcStatSnapshot snapshot = xllsim::load_proc_stat(path);
    nlohmann::ordered_json j;
    j["cpus"] = nlohmann::ordered_json::array();
    auto emit = [](const xllsim::CpuJiffies& cpu) {
        nlohmann::ordered_json entry;
        entry["cpu"] = cpu.cpu_index;
        entry["user"] = cpu.user;
        entry["nice"] = cpu.nice;
        entry["system"] = cpu.system;
        entry["idle"] = cpu.idle;
        entry["remaining"] = cpu.remaining;
        return entry;
    };
    if (snapshot.aggregate) j["aggregate"] = emit(*snapshot.aggregate);
    for (const xllsim::CpuJiffies& cpu : snapshot.per_cpu) {
        j["cpus"].push_back(emit(cpu));
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"thread-mapping policy simulator"};
    app.require_subcommand(1);

    CommonOptions options;

    auto* run = app.add_subcommand("run", "replay a scenario under one or more policies");
    std::string scenario_name;
    int run_threads = 0;
    std::string out_dir;
    std::string format = "csv";
    bool keep_trace = false;
    run->add_option("--scenario", scenario_name,
                    "scenario1|scenario2|scenario3 or a config file")
        ->required();
    run->add_option("--threads", run_threads,
                    "threads per sort for scenario3 (16 or 63)");
    run->add_option("--out", out_dir, "directory for report files");
    run->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_flag("--trace", keep_trace, "also write event traces");
    add_common_flags(run, options);

    auto* sweep = app.add_subcommand("sweep", "speedup table for one model, n = 1..max");
    std::string model_name;
    int max_threads = 0;
    std::string sweep_out;
    sweep->add_option("--model", model_name, "workload name")->required();
    sweep->add_option("--max-threads", max_threads, "defaults to the usable core count");
    sweep->add_option("--out", sweep_out, "CSV output path (stdout otherwise)");
    add_common_flags(sweep, options);

    auto* parse = app.add_subcommand("parse-stat", "parse a /proc/stat image to JSON");
    std::string stat_path;
    parse->add_option("path", stat_path, "file to parse")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (run->parsed()) {
            return cmd_run(options, scenario_name, run_threads, out_dir, format,
                           keep_trace);
        }
        if (sweep->parsed()) {
            return cmd_sweep(options, model_name, max_threads, sweep_out);
        }
        if (parse->parsed()) {
            return cmd_parse_stat(stat_path);
        }
    } catch (const xllsim::ProcStatError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
