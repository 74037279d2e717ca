#pragma once

#include <string>
#include <vector>

#include "xllsim/engine.hpp"
#include "xllsim/workloads.hpp"

namespace xllsim {

class CalibrationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Submission {
    WorkloadModel model;
    Tick at = 0;
};

struct Scenario {
    std::string name;
    std::vector<Submission> submissions;  // submit ticks non-decreasing
    std::vector<Policy> policies;
    /// Engine settings this scenario was calibrated against. The policy
    /// field is overwritten per run.
    SimConfig base_config;
};

/// Three health runs, 6 seconds apart: large at 0, small at 600, large at
/// 1200, 32 threads each. Construction verifies that the small run finishes
/// before tick 1200 under every policy and throws CalibrationError if not.
Scenario scenario_one();

/// All four programs submitted together; their serial phases differ, so the
/// teams appear at distinct ticks. sort runs 16 threads, health 32, strassen
/// and nqueens 63.
Scenario scenario_two();

/// Ten identical sorts, one second apart, with 16 or 63 threads each.
Scenario scenario_three(int threads_per_sort);

struct ProgramResult {
    int program = 0;
    std::string name;
    Tick submit_tick = 0;
    Tick spawn_tick = 0;
    Tick completion_tick = 0;
    Tick turnaround = 0;
};

struct CoreLoad {
    int core_id = 0;
    Jiffies user = 0;
    Jiffies idle = 0;
};

struct LoadSample {
    Tick tick = 0;
    std::vector<Jiffies> user;  // cumulative, per usable core
};

struct ScenarioReport {
    std::string scenario;
    Policy policy = Policy::xll;
    std::vector<ProgramResult> programs;
    double mean_turnaround = 0.0;
    Tick max_turnaround = 0;
    /// Programs completed per jiffy of makespan.
    double throughput = 0.0;
    std::vector<CoreLoad> core_load;   // final counters, usable cores
    std::vector<LoadSample> samples;   // cumulative user jiffies over time
    std::string trace;                 // filled when keep_trace is set
};

/// Ticks between load-trace samples in a scored run.
inline constexpr Tick kLoadSampleInterval = 100;

ScenarioReport score(const Scenario& scenario, Policy policy,
                     bool keep_trace = false);

struct SweepRow {
    int threads = 0;
    Policy policy = Policy::xll;
    Tick turnaround = 0;
    double speedup = 0.0;  // turnaround(1) / turnaround(n), same policy
};

/// Runs the model alone on an idle system for every thread count 1..max.
std::vector<SweepRow> single_program_sweep(const WorkloadModel& model,
                                           int max_threads,
                                           const std::vector<Policy>& policies,
                                           const SimConfig& base = {});

}  // namespace xllsim
