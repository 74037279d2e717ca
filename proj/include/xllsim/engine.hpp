#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "xllsim/policies.hpp"
#include "xllsim/procstat.hpp"
#include "xllsim/workloads.hpp"

namespace xllsim {

using Tick = std::uint64_t;

enum class Policy { static_map, bll, xll, linux_like };

std::optional<Policy> policy_from_name(std::string_view name);
std::string_view policy_name(Policy policy);

class SimError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimConfig {
    int total_cores = 64;
    /// Leave core 0 to the OS (usable ids 1..total_cores-1). When false the
    /// usable set is 0..total_cores-1.
    bool reserve_core_zero = true;

    Policy policy = Policy::xll;

    // Policy constants.
    std::int64_t resolution_bump = 10;
    std::int64_t sched_load_scale = 1024;
    Tick balance_interval = 10;

    /// Mappers read counters as of (tick - staleness).
    Tick snapshot_staleness = 0;
    /// Jiffies between successive thread creations of one team. Zero means
    /// the whole team is created and mapped within one tick.
    Tick spawn_stagger = 0;
    /// Upper bound on the random extra delay of each thread creation,
    /// drawn from the seeded generator. Zero disables it.
    Tick creation_jitter = 0;
    /// Jiffies of cache warm-up after a move: the thread keeps taking its
    /// turns on the new core but retires no work while it refills.
    Tick migration_warmup = 0;

    std::uint64_t rng_seed = 42;
    Tick tick_budget = 50'000'000;

    CoreSet make_core_set() const;
};

enum class ThreadState { created, sleeping, running, done };

struct SimThread {
    int program = -1;
    int team_index = -1;
    int core = -1;  // core id; fixed after mapping except for linux migrations
    Tick mapped_tick = 0;
    Tick wake_tick = 0;      // while sleeping: first tick the thread may run
    Tick warming_until = 0;  // turns before this tick retire nothing
    ThreadState state = ThreadState::created;
};

struct SimProgram {
    WorkloadModel model;
    Tick submit_tick = 0;
    Tick spawn_tick = 0;       // tick the first team thread was created
    Tick completion_tick = 0;  // valid once done
    bool spawned = false;
    bool done = false;

    std::int64_t init_remaining = 0;  // serial-phase jiffies left
    std::int64_t work_remaining = 0;  // parallel-region pool, drained by the team
    std::int64_t work_total = 0;
    int init_core = -1;  // core id the serial phase runs on, -1 once finished

    std::vector<int> thread_ids;  // indices into Engine::threads()
};

struct CoreCounter {
    int core_id = 0;
    Jiffies user = 0;
    Jiffies idle = 0;
};

/// Jiffy-granular simulator. Single-threaded and deterministic: the same
/// config and submission list always produce the same trace byte for byte.
///
/// Each tick, every usable core hands its one jiffy of capacity to one
/// resident entity, rotating round-robin across them. Serial phases draw the
/// jiffy from the program's init budget; team threads draw from the program's
/// shared work pool, so the team advances at the sum of its threads' core
/// shares and finishes together, the way a task-parallel run does.
class Engine {
public:
    explicit Engine(SimConfig config = {});

    /// Queues a program. Its serial phase starts at `at` on the core an idle
    /// OS placement picks; the team is created when the phase finishes and
    /// each thread is mapped by the active policy, in thread_id order.
    int submit(const WorkloadModel& model, Tick at);

    /// Advances the clock one jiffy.
    void step();

    /// Steps until every submitted program has completed. Returns the final
    /// tick. Throws SimError with a stuck-program listing if the tick budget
    /// runs out.
    Tick run_until_idle();

    /// Renders the current counters as /proc/stat text and re-parses them
    /// through the regular parser, honoring snapshot_staleness.
    ProcStatSnapshot synth_snapshot() const;

    Tick tick() const noexcept { return tick_; }
    bool idle() const;

    const SimConfig& config() const noexcept { return config_; }
    const std::vector<SimProgram>& programs() const noexcept { return programs_; }
    const std::vector<SimThread>& threads() const noexcept { return threads_; }
    const std::vector<CoreCounter>& counters() const noexcept { return counters_; }
    const std::vector<int>& usable_cores() const noexcept { return usable_; }

    /// Line-delimited event records: tick,kind,program,thread,core.
    const std::string& trace() const noexcept { return trace_; }

    Jiffies total_user_jiffies() const;
    /// Jiffies of init and pool work consumed so far; equals the sum of
    /// user jiffies over all cores at every tick.
    Jiffies total_executed_work() const noexcept { return executed_; }

private:
    // Residency entries: team threads are their index, the serial phase of
    // program p is encoded as -(p + 1).
    static int init_entity(int program) { return -(program + 1); }
    static bool is_init(int entity) { return entity < 0; }
    static int entity_program(int entity) { return -entity - 1; }

    int slot_of(int core_id) const { return slot_by_id_[core_id]; }

    void process_submissions();
    void process_wakes();
    void process_spawns();
    void execute_cores();
    void finish_programs();
    void run_balance();

    void start_serial_phase(int program_id);
    void schedule_team(int program_id, Tick first_tick);
    void map_thread(int thread_id);
    int os_place(std::uint64_t rq_key);
    void add_resident(int slot, int entity);
    void remove_resident(int slot, int entity);
    bool entity_can_run(int entity) const;
    bool entity_warming(int entity) const;
    void record_event(std::string_view kind, int program, int thread, int core);

    SimConfig config_;
    Tick tick_ = 0;

    std::vector<int> usable_;       // core ids the policies may target
    std::vector<int> slot_by_id_;   // core id -> usable slot (-1 if reserved)
    PolicyTable table_;
    LinuxRunqueues rq_;
    std::vector<std::int64_t> cpu_load_;

    std::vector<SimProgram> programs_;
    std::vector<SimThread> threads_;
    std::vector<CoreCounter> counters_;       // all machine cores, by id
    std::vector<std::vector<int>> residents_; // per usable slot, arrival order
    std::vector<std::size_t> cursor_;         // per-slot round-robin position

    std::map<Tick, std::vector<int>> pending_submissions_;  // program ids
    std::map<Tick, std::vector<int>> pending_spawns_;       // thread ids
    std::map<Tick, std::vector<int>> pending_wakes_;        // thread ids

    std::mt19937_64 rng_;
    Jiffies executed_ = 0;
    int live_programs_ = 0;
    std::string trace_;

    // End-of-tick counter frames for stale snapshot reads.
    std::deque<std::pair<Tick, std::vector<CoreCounter>>> history_;
};

}  // namespace xllsim
