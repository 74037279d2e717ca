// Acceptance suite: replays the headline behaviours end to end and prints one
// PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "xllsim/engine.hpp"
#include "xllsim/policies.hpp"
#include "xllsim/procstat.hpp"
#include "xllsim/report.hpp"
#include "xllsim/scenario.hpp"
#include "xllsim/workloads.hpp"

using namespace xllsim;

namespace {

int g_failures = 0;

class Criterion {
public:
    Criterion(int id, std::string description)
        : id_(id), description_(std::move(description)),
          start_(std::chrono::steady_clock::now()) {}

    void require(bool condition, const std::string& detail) {
        if (!condition && failure_.empty()) failure_ = detail;
    }

    double elapsed() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start_).count();
    }

    void finish(double time_limit_s = 0.0) {
        double seconds = elapsed();
        if (time_limit_s > 0.0 && seconds >= time_limit_s && failure_.empty()) {
            failure_ = "runtime " + format_ratio(seconds) + "s over the " +
                       format_ratio(time_limit_s) + "s limit";
        }
        if (failure_.empty()) {
            std::printf("PASS  criterion %d: %s (%.2fs)\n", id_,
                        description_.c_str(), seconds);
        } else {
            std::printf("FAIL  criterion %d: %s (%.2fs) -- %s\n", id_,
                        description_.c_str(), seconds, failure_.c_str());
            ++g_failures;
        }
    }

private:
    int id_;
    std::string description_;
    std::string failure_;
    std::chrono::steady_clock::time_point start_;
};

std::string fixture(const std::string& name) {
    return std::string(XLLSIM_FIXTURE_DIR) + "/" + name;
}

ProcStatSnapshot snapshot_of(const std::vector<Jiffies>& user_loads) {
    std::ostringstream text;
    for (std::size_t i = 0; i < user_loads.size(); ++i) {
        text << "cpu" << i << ' ' << user_loads[i] << " 0 0 1000\n";
    }
    return parse_proc_stat(text.str());
}

// --- criterion 1 -----------------------------------------------------------

void criterion_1() {
    Criterion c(1, "xll matches a brute-force first-minimum scan on 10000 "
                   "random instances");
    std::mt19937_64 rng(2024);

    for (int iteration = 0; iteration < 10000; ++iteration) {
        int n = 2 + static_cast<int>(rng() % 15);
        CoreSet cores = CoreSet::full(n);
        std::vector<Jiffies> current(n);
        std::uint64_t pinned_before = 0;
        for (int i = 0; i < n; ++i) {
            current[i] = rng() % 101;
            cores.records[i].load = rng() % 101;
            cores.records[i].pinned = static_cast<std::uint32_t>(rng() % 101);
            pinned_before += cores.records[i].pinned;
        }

        // Independent oracle: evaluate all changes, take the first minimum.
        std::size_t expected = 0;
        std::int64_t best = INT64_MAX;
        std::vector<std::int64_t> change(n);
        for (int i = 0; i < n; ++i) {
            change[i] = static_cast<std::int64_t>(current[i]) -
                        static_cast<std::int64_t>(cores.records[i].load) +
                        static_cast<std::int64_t>(cores.records[i].pinned);
            if (change[i] < best) {
                best = change[i];
                expected = static_cast<std::size_t>(i);
            }
        }

        int picked = xll_map(cores, snapshot_of(current));
        c.require(picked == cores.usable[expected],
                  "argmin mismatch on iteration " + std::to_string(iteration));
        std::uint64_t pinned_after = 0;
        for (int i = 0; i < n; ++i) {
            c.require(cores.records[i].load == current[i] + 10,
                      "stored load != current + 10");
            pinned_after += cores.records[i].pinned;
        }
        c.require(pinned_after == pinned_before + 1,
                  "pinned total did not grow by exactly 1");
    }

    // Pinned bookkeeping over a call sequence on one fresh table.
    CoreSet cores = CoreSet::full(8);
    std::vector<Jiffies> user(8, 0);
    for (int call = 1; call <= 500; ++call) {
        for (auto& u : user) u += rng() % 3;
        xll_map(cores, snapshot_of(user));
        std::uint64_t total = 0;
        for (const CoreRecord& rec : cores.records) total += rec.pinned;
        c.require(total == static_cast<std::uint64_t>(call),
                  "sum of pinned != number of calls");
    }
    c.finish(5.0);
}

// --- criterion 2 -----------------------------------------------------------

void criterion_2() {
    Criterion c(2, "bll and static follow usable[k mod 63] for k in [0,500]");
    CoreSet cores = CoreSet::reserved_zero(64);
    BllCounter counter;
    for (std::uint64_t k = 0; k <= 500; ++k) {
        c.require(bll_map(counter, cores) == cores.usable[k % 63],
                  "bll target mismatch at k=" + std::to_string(k));
    }
    for (std::uint64_t i = 0; i <= 500; ++i) {
        c.require(static_map(i, cores) == cores.usable[i % 63],
                  "static target mismatch at i=" + std::to_string(i));
    }
    c.finish(1.0);
}

// --- criterion 3 -----------------------------------------------------------

struct TraceEvent {
    Tick tick;
    std::string kind;
    int program;
    int thread;
    int core;
};

std::vector<TraceEvent> parse_trace(const std::string& trace) {
    std::vector<TraceEvent> events;
    std::istringstream in(trace);
    std::string line;
    while (std::getline(in, line)) {
        TraceEvent event;
        std::istringstream fields(line);
        std::string token;
        std::getline(fields, token, ',');
        event.tick = std::stoull(token);
        std::getline(fields, event.kind, ',');
        std::getline(fields, token, ',');
        event.program = std::stoi(token);
        std::getline(fields, token, ',');
        event.thread = std::stoi(token);
        std::getline(fields, token, ',');
        event.core = std::stoi(token);
        events.push_back(event);
    }
    return events;
}

void criterion_3() {
    Criterion c(3, "scenario 1: xll beats bll for the third program by 10%, "
                   "and bll walks into the busy cores");
    Scenario scenario = scenario_one();
    ScenarioReport bll = score(scenario, Policy::bll, true);
    ScenarioReport xll = score(scenario, Policy::xll);

    Tick bll_turnaround = bll.programs[2].turnaround;
    Tick xll_turnaround = xll.programs[2].turnaround;
    c.require(static_cast<double>(xll_turnaround) <=
                  0.9 * static_cast<double>(bll_turnaround),
              "xll turnaround " + std::to_string(xll_turnaround) +
                  " not 10% under bll " + std::to_string(bll_turnaround));

    // Replay the bll trace: program 2 (the third submission) must land on
    // the 2nd..33rd usable cores while at least 31 of them still run
    // program-0 threads.
    CoreSet cores = scenario.base_config.make_core_set();
    std::set<int> expected_targets(cores.usable.begin() + 1,
                                   cores.usable.begin() + 33);
    std::map<int, std::multiset<int>> live_on_core;  // core -> programs
    std::map<int, std::vector<int>> cores_of_program;
    int overlapped = 0;
    std::set<int> targets;
    for (const TraceEvent& event : parse_trace(bll.trace)) {
        if (event.kind == "SPAWN") {
            if (event.program == 2) {
                targets.insert(event.core);
                if (live_on_core[event.core].count(0) > 0) ++overlapped;
            }
            live_on_core[event.core].insert(event.program);
            cores_of_program[event.program].push_back(event.core);
        } else if (event.kind == "DONE") {
            for (int core : cores_of_program[event.program]) {
                auto it = live_on_core[core].find(event.program);
                if (it != live_on_core[core].end()) live_on_core[core].erase(it);
            }
        }
    }
    c.require(targets == expected_targets,
              "program 2 did not land on the 2nd..33rd usable cores");
    c.require(overlapped >= 31,
              "only " + std::to_string(overlapped) +
                  " placements hit cores still running program 0");
    c.finish(10.0);
}

// --- criterion 4 -----------------------------------------------------------

void criterion_4() {
    Criterion c(4, "scenario 2: xll no worse than the O(1)-style baseline for "
                   "all four programs, strictly better for two");
    Scenario scenario = scenario_two();
    ScenarioReport xll = score(scenario, Policy::xll);
    ScenarioReport lin = score(scenario, Policy::linux_like);
    int strict = 0;
    for (std::size_t i = 0; i < xll.programs.size(); ++i) {
        Tick x = xll.programs[i].turnaround;
        Tick l = lin.programs[i].turnaround;
        c.require(x <= l, xll.programs[i].name + ": xll " + std::to_string(x) +
                              " > linux " + std::to_string(l));
        if (x < l) ++strict;
    }
    c.require(strict >= 2, "strictly better for only " +
                               std::to_string(strict) + " of 4 programs");
    c.finish(10.0);
}

// --- criterion 5 -----------------------------------------------------------

void criterion_5() {
    Criterion c(5, "scenario 3: xll mean beats the baseline at both widths, "
                   "and 16 threads beat 63 by 10% under every policy");
    std::map<int, std::map<Policy, double>> means;
    for (int threads : {16, 63}) {
        Scenario scenario = scenario_three(threads);
        for (Policy policy : scenario.policies) {
            means[threads][policy] = score(scenario, policy).mean_turnaround;
        }
    }
    for (int threads : {16, 63}) {
        double xll = means[threads][Policy::xll];
        double lin = means[threads][Policy::linux_like];
        c.require(xll < lin, "at " + std::to_string(threads) +
                                 " threads: xll mean " + format_ratio(xll) +
                                 " not under linux mean " + format_ratio(lin));
    }
    for (Policy policy : {Policy::static_map, Policy::bll, Policy::xll,
                          Policy::linux_like}) {
        double narrow = means[16][policy];
        double wide = means[63][policy];
        c.require(narrow <= 0.9 * wide,
                  std::string(policy_name(policy)) + ": 16-thread mean " +
                      format_ratio(narrow) + " not 10% under 63-thread mean " +
                      format_ratio(wide));
    }
    c.finish(20.0);
}

// --- criterion 6 -----------------------------------------------------------

void criterion_6() {
    Criterion c(6, "single program at its cap: static, bll and xll agree "
                   "exactly and never lose to the baseline");
    StockModels models = stock_models();
    for (const WorkloadModel* model :
         {&models.nqueens, &models.strassen, &models.sort,
          &models.health_medium}) {
        std::set<Tick> turnarounds;
        Tick linux_turnaround = 0;
        for (Policy policy : {Policy::static_map, Policy::bll, Policy::xll,
                              Policy::linux_like}) {
            SimConfig config;
            config.policy = policy;
            Engine engine(config);
            engine.submit(*model, 0);
            Tick turnaround = engine.run_until_idle();
            if (policy == Policy::linux_like) linux_turnaround = turnaround;
            else turnarounds.insert(turnaround);
        }
        c.require(turnarounds.size() == 1,
                  model->name + ": self-mappers disagree");
        c.require(*turnarounds.begin() <= linux_turnaround,
                  model->name + ": baseline beat the self-mappers");
    }
    c.finish();
}

// --- criterion 7 -----------------------------------------------------------

void criterion_7() {
    Criterion c(7, "sweep peaks: nqueens/strassen at 63, sort at 16, health "
                   "at 32; nqueens keeps 90% of linear at 63");
    StockModels models = stock_models();
    struct Expectation { const WorkloadModel* model; int peak; };
    for (const Expectation& expected :
         {Expectation{&models.nqueens, 63}, Expectation{&models.strassen, 63},
          Expectation{&models.sort, 16}, Expectation{&models.health_medium, 32}}) {
        auto rows = single_program_sweep(*expected.model, 63,
                                         {Policy::static_map});
        int best_n = 0;
        double best_speedup = 0.0;
        for (const SweepRow& row : rows) {
            if (row.speedup > best_speedup) {
                best_speedup = row.speedup;
                best_n = row.threads;
            }
            if (expected.model == &models.nqueens && row.threads == 63) {
                c.require(row.speedup >= 0.9 * 63.0,
                          "nqueens speedup at 63 is " +
                              format_ratio(row.speedup));
            }
        }
        c.require(best_n == expected.peak,
                  expected.model->name + " peaks at " + std::to_string(best_n) +
                      " instead of " + std::to_string(expected.peak));
    }
    c.finish();
}

// --- criterion 8 -----------------------------------------------------------

void criterion_8() {
    Criterion c(8, "work is conserved at every tick and reruns are "
                   "byte-identical");
    Scenario scenario = scenario_one();
    SimConfig config = scenario.base_config;
    config.policy = Policy::xll;
    Engine engine(config);
    for (const Submission& submission : scenario.submissions) {
        engine.submit(submission.model, submission.at);
    }
    while (!engine.idle()) {
        engine.step();
        if (engine.total_user_jiffies() != engine.total_executed_work()) {
            c.require(false, "conservation broke at tick " +
                                 std::to_string(engine.tick()));
            break;
        }
    }

    Scenario rerun = scenario_three(16);
    ScenarioReport a = score(rerun, Policy::linux_like, true);
    ScenarioReport b = score(rerun, Policy::linux_like, true);
    c.require(a.trace == b.trace, "traces differ between identical runs");
    c.require(report_to_json(a) == report_to_json(b),
              "reports differ between identical runs");
    c.finish();
}

// --- criterion 9 -----------------------------------------------------------

void criterion_9() {
    Criterion c(9, "parser round-trips the fixture corpus and names bad lines");
    const char* names[] = {"sandbox_capture.stat", "quadcore_desktop.stat",
                           "minimal.stat", "tile64_idle.stat",
                           "tile64_busy.stat", "extra_columns.stat"};
    for (const char* name : names) {
        ProcStatSnapshot snap = load_proc_stat(fixture(name));
        ProcStatSnapshot reparsed = parse_proc_stat(to_proc_stat_text(snap));
        c.require(reparsed == snap,
                  std::string(name) + " did not round-trip");
    }

    struct Bad { const char* name; int line; };
    for (const Bad& bad : {Bad{"bad_nonint.stat", 2}, Bad{"bad_short.stat", 2},
                           Bad{"bad_dup.stat", 2}}) {
        try {
            load_proc_stat(fixture(bad.name));
            c.require(false, std::string(bad.name) + " parsed unexpectedly");
        } catch (const ProcStatError& e) {
            c.require(e.line() == bad.line,
                      std::string(bad.name) + " reported line " +
                          std::to_string(e.line()));
        }
    }
    c.finish();
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criteria failed\n", g_failures);
    }
    return g_failures;
}
