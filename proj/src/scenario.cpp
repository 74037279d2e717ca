#include "xllsim/scenario.hpp"

#include <algorithm>
#include <stdexcept>

namespace xllsim {

namespace {

const std::vector<Policy> kAllPolicies = {Policy::static_map, Policy::bll,
                                          Policy::xll, Policy::linux_like};

SimConfig scenario_config() {
    SimConfig config;
    // Teams come up one thread per jiffy, the granularity at which the
    // counters can tell a busy core from an idle one. A thread that gets
    // bounced to another core spends a few jiffies refilling its working
    // set before it makes progress again, and a saturated box rebalances
    // lazily (the busy-factor pacing of the 2.6-era balancer).
    config.spawn_stagger = 1;
    config.migration_warmup = 3;
    config.balance_interval = 200;
    return config;
}

}  // namespace

Scenario scenario_one() {
    StockModels models = stock_models();
    Scenario scenario;
    scenario.name = "scenario1";
    scenario.policies = kAllPolicies;
    scenario.base_config = scenario_config();

    WorkloadModel large = models.health_large;
    WorkloadModel small = models.health_small;
    large.thread_count = 32;
    small.thread_count = 32;
    scenario.submissions = {{large, 0}, {small, 600}, {large, 1200}};

    // The schedule only makes sense if the small run is out of the way
    // before the second large one arrives, whichever mapper is active.
    for (Policy policy : kAllPolicies) {
        SimConfig config = scenario.base_config;
        config.policy = policy;
        Engine engine(config);
        engine.submit(large, 0);
        int small_id = engine.submit(small, 600);
        while (!engine.idle() && engine.tick() < 1200) engine.step();
        if (!engine.programs()[small_id].done ||
            engine.programs()[small_id].completion_tick > 1200) {
            throw CalibrationError(
                "scenario1: small health run does not finish before tick "
                "1200 under policy " +
                std::string(policy_name(policy)));
        }
    }
    return scenario;
}

Scenario scenario_two() {
    StockModels models = stock_models();
    Scenario scenario;
    scenario.name = "scenario2";
    scenario.policies = kAllPolicies;
    scenario.base_config = scenario_config();
    scenario.submissions = {{models.sort, 0},
                            {models.health_medium, 0},
                            {models.strassen, 0},
                            {models.nqueens, 0}};

    // Distinct serial phases give distinct team-creation ticks.
    for (std::size_t a = 0; a < scenario.submissions.size(); ++a) {
        for (std::size_t b = a + 1; b < scenario.submissions.size(); ++b) {
            if (scenario.submissions[a].model.init_jiffies ==
                scenario.submissions[b].model.init_jiffies) {
                throw CalibrationError(
                    "scenario2: init phases must be pairwise distinct");
            }
        }
    }
    return scenario;
}

Scenario scenario_three(int threads_per_sort) {
    if (threads_per_sort != 16 && threads_per_sort != 63) {
        throw std::invalid_argument("threads_per_sort must be 16 or 63");
    }
    StockModels models = stock_models();
    Scenario scenario;
    scenario.name = threads_per_sort == 16 ? "scenario3_t16" : "scenario3_t63";
    scenario.policies = kAllPolicies;
    scenario.base_config = scenario_config();
    // A busy machine is noisy: thread creation times wobble by a few
    // jiffies, and a thread that is bounced to another core drags its
    // working set behind it.
    scenario.base_config.creation_jitter = 2;
    scenario.base_config.migration_warmup = 3;

    WorkloadModel sort = models.sort;
    sort.thread_count = threads_per_sort;
    for (int i = 0; i < 10; ++i) {
        scenario.submissions.push_back({sort, static_cast<Tick>(i) * 100});
    }
    return scenario;
}

ScenarioReport score(const Scenario& scenario, Policy policy,
                     bool keep_trace) {
    SimConfig config = scenario.base_config;
    config.policy = policy;
    Engine engine(config);
    for (const Submission& submission : scenario.submissions) {
        engine.submit(submission.model, submission.at);
    }

    ScenarioReport report;
    report.scenario = scenario.name;
    report.policy = policy;

    while (!engine.idle()) {
        engine.step();
        if (engine.tick() % kLoadSampleInterval == 0) {
            LoadSample sample;
            sample.tick = engine.tick();
            for (int core : engine.usable_cores()) {
                sample.user.push_back(engine.counters()[core].user);
            }
            report.samples.push_back(std::move(sample));
        }
    }

    Tick first_submit = scenario.submissions.empty()
                            ? 0
                            : scenario.submissions.front().at;
    Tick last_completion = 0;
    double turnaround_sum = 0.0;
    for (std::size_t pid = 0; pid < engine.programs().size(); ++pid) {
        const SimProgram& program = engine.programs()[pid];
        ProgramResult result;
        result.program = static_cast<int>(pid);
        result.name = program.model.name;
        result.submit_tick = program.submit_tick;
        result.spawn_tick = program.spawn_tick;
        result.completion_tick = program.completion_tick;
        result.turnaround = program.completion_tick - program.submit_tick;
        turnaround_sum += static_cast<double>(result.turnaround);
        report.max_turnaround = std::max(report.max_turnaround, result.turnaround);
        last_completion = std::max(last_completion, program.completion_tick);
        report.programs.push_back(std::move(result));
    }
    if (!report.programs.empty()) {
        report.mean_turnaround = turnaround_sum / report.programs.size();
        Tick makespan = last_completion - first_submit;
        if (makespan > 0) {
            report.throughput = static_cast<double>(report.programs.size()) /
                                static_cast<double>(makespan);
        }
    }
    for (int core : engine.usable_cores()) {
        const CoreCounter& counter = engine.counters()[core];
        report.core_load.push_back(
            CoreLoad{.core_id = core, .user = counter.user, .idle = counter.idle});
    }
    if (keep_trace) report.trace = engine.trace();
    return report;
}

std::vector<SweepRow> single_program_sweep(const WorkloadModel& model,
                                           int max_threads,
                                           const std::vector<Policy>& policies,
                                           const SimConfig& base) {
    std::vector<SweepRow> rows;
    for (Policy policy : policies) {
        Tick baseline = 0;
        for (int n = 1; n <= max_threads; ++n) {
            WorkloadModel variant = model;
            variant.thread_count = n;
            SimConfig config = base;
            config.policy = policy;
            Engine engine(config);
            engine.submit(variant, 0);
            Tick final_tick = engine.run_until_idle();
            Tick turnaround = final_tick;  // submitted at 0
            if (n == 1) baseline = turnaround;
            rows.push_back(SweepRow{
                .threads = n,
                .policy = policy,
                .turnaround = turnaround,
                .speedup = static_cast<double>(baseline) /
                           static_cast<double>(turnaround),
            });
        }
    }
    return rows;
}

}  // namespace xllsim
