#pragma once

#include <cstdint>
#include <mutex>
#include <vector>

#include "xllsim/procstat.hpp"

namespace xllsim {

/// Per-core bookkeeping kept by the lowest-load mappers.
struct CoreRecord {
    int index = 0;             // core id
    Jiffies load = 0;          // stored load: last observed user jiffies + bump
    std::int64_t change = 0;   // delta computed by the latest scan
    std::uint32_t pinned = 0;  // threads pinned here since the last reset
};

/// The cores a mapper may target. `usable` holds core ids in scan order and
/// `records` runs parallel to it.
struct CoreSet {
    std::vector<int> usable;
    std::vector<CoreRecord> records;

    /// 64-core machine with core 0 left to the OS: usable ids 1..63.
    static CoreSet reserved_zero(int total_cores = 64);
    /// Generic machine: usable ids 0..count-1.
    static CoreSet full(int count);

    std::size_t size() const noexcept { return usable.size(); }

    /// Clears all records (load, change, pinned) between experiments.
    void reset();
};

/// Pins by thread id, in order: usable[thread_id mod |usable|]. Pure; every
/// program numbers its own threads from zero.
int static_map(std::uint64_t thread_id, const CoreSet& cores);

/// Single system-wide round-robin counter shared by all programs.
struct BllCounter {
    std::uint64_t next = 0;
};

/// Fills the cores round-robin, indifferent to what the threads already
/// placed are doing.
int bll_map(BllCounter& counter, const CoreSet& cores);

struct XllConfig {
    /// Added to the stored load after every scan. Keeps cores that were just
    /// picked looking busy until the jiffy counters catch up.
    std::int64_t resolution_bump = 10;
};

/// One scan-select-update pass over the core table:
///   change[i] = user(i) - load[i] + pinned[i]
///   load[i]   = user(i) + bump
/// then picks the first core attaining the minimum change and increments its
/// pinned count. Throws std::out_of_range if the snapshot lacks a usable
/// core; the table is left untouched in that case.
int xll_map(CoreSet& cores, const ProcStatSnapshot& snapshot,
            const XllConfig& config = {});

// --- O(1)-style baseline --------------------------------------------------

struct LinuxTask {
    std::uint64_t key = 0;  // caller-defined thread handle
    bool pinned = false;    // pinned tasks are never migrated
};

/// One runqueue per core, runnable tasks only.
struct LinuxRunqueues {
    std::vector<int> core_ids;                   // queue slot -> core id
    std::vector<std::vector<LinuxTask>> queues;  // parallel to core_ids

    static LinuxRunqueues for_cores(const std::vector<int>& core_ids);

    std::size_t nr_running(std::size_t slot) const { return queues[slot].size(); }
    std::size_t total_tasks() const;
    /// Removes a task wherever it is queued. Returns false when absent.
    bool remove(std::uint64_t key);
};

/// Initial placement: enqueue on the core with the fewest runnable tasks,
/// lowest index on a tie. Returns the chosen core id.
int linux_like_place(LinuxTask task, LinuxRunqueues& rq);

struct Migration {
    std::uint64_t key = 0;
    int from_core = 0;
    int to_core = 0;
};

struct LinuxBalanceConfig {
    std::int64_t sched_load_scale = 1024;
};

/// Periodic balancing pass. cpu_load carries the decaying load average in and
/// out: each iteration folds the current runnable count into it
/// (cpu_load = (nr_running * scale + cpu_load) / 2) and, while the busiest
/// queue exceeds the idlest by at least one task's worth of load, moves one
/// non-pinned task from the back of the busiest queue to the idlest.
std::vector<Migration> linux_like_balance(LinuxRunqueues& rq,
                                          std::vector<std::int64_t>& cpu_load,
                                          const LinuxBalanceConfig& config = {});

/// Shared mapper state behind one lock; each call is an atomic
/// scan-select-update. Callers on different threads serialize here.
class PolicyTable {
public:
    explicit PolicyTable(CoreSet cores, XllConfig xll = {});

    int map_static(std::uint64_t program_thread_id);
    int map_bll();
    int map_xll(const ProcStatSnapshot& snapshot);
    void reset();

    CoreSet records() const;  // copy, for inspection
    std::uint64_t bll_count() const;

private:
    mutable std::mutex mutex_;
    CoreSet cores_;
    BllCounter bll_;
    XllConfig xll_;
};

}  // namespace xllsim
