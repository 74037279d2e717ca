#include "xllsim/policies.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace xllsim {

CoreSet CoreSet::reserved_zero(int total_cores) {
    if (total_cores < 2) throw std::invalid_argument("need at least 2 cores");
    CoreSet set;
    for (int id = 1; id < total_cores; ++id) {
        set.usable.push_back(id);
        set.records.push_back(CoreRecord{.index = id});
    }
    return set;
}

CoreSet CoreSet::full(int count) {
    if (count < 1) throw std::invalid_argument("need at least 1 core");
    CoreSet set;
    for (int id = 0; id < count; ++id) {
        set.usable.push_back(id);
        set.records.push_back(CoreRecord{.index = id});
    }
    return set;
}

void CoreSet::reset() {
    for (CoreRecord& rec : records) {
        rec.load = 0;
        rec.change = 0;
        rec.pinned = 0;
    }
}

int static_map(std::uint64_t thread_id, const CoreSet& cores) {
    return cores.usable[thread_id % cores.size()];
}

int bll_map(BllCounter& counter, const CoreSet& cores) {
    int target = cores.usable[counter.next % cores.size()];
    ++counter.next;
    return target;
}

int xll_map(CoreSet& cores, const ProcStatSnapshot& snapshot,
            const XllConfig& config) {
    // Collect all loads up front so a missing core leaves the table as-is.
    std::vector<Jiffies> current(cores.size());
    for (std::size_t i = 0; i < cores.size(); ++i) {
        const CpuJiffies* cpu = snapshot.find(cores.usable[i]);
        if (!cpu) {
            throw std::out_of_range("snapshot lacks cpu" +
                                    std::to_string(cores.usable[i]));
        }
        current[i] = cpu->user;
    }

    for (std::size_t i = 0; i < cores.size(); ++i) {
        CoreRecord& rec = cores.records[i];
        rec.change = static_cast<std::int64_t>(current[i]) -
                     static_cast<std::int64_t>(rec.load) +
                     static_cast<std::int64_t>(rec.pinned);
        rec.load = current[i] + config.resolution_bump;
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < cores.size(); ++i) {
        if (cores.records[i].change < cores.records[best].change) best = i;
    }
    cores.records[best].pinned += 1;
    return cores.usable[best];
}

LinuxRunqueues LinuxRunqueues::for_cores(const std::vector<int>& core_ids) {
    LinuxRunqueues rq;
    rq.core_ids = core_ids;
    rq.queues.resize(core_ids.size());
    return rq;
}

std::size_t LinuxRunqueues::total_tasks() const {
    return std::accumulate(queues.begin(), queues.end(), std::size_t{0},
                           [](std::size_t acc, const auto& q) { return acc + q.size(); });
}

bool LinuxRunqueues::remove(std::uint64_t key) {
    for (auto& queue : queues) {
        auto it = std::find_if(queue.begin(), queue.end(),
                               [key](const LinuxTask& t) { return t.key == key; });
        if (it != queue.end()) {
            queue.erase(it);
            return true;
        }
    }
    return false;
}

int linux_like_place(LinuxTask task, LinuxRunqueues& rq) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < rq.queues.size(); ++i) {
        if (rq.queues[i].size() < rq.queues[best].size()) best = i;
    }
    rq.queues[best].push_back(task);
    return rq.core_ids[best];
}

std::vector<Migration> linux_like_balance(LinuxRunqueues& rq,
                                          std::vector<std::int64_t>& cpu_load,
                                          const LinuxBalanceConfig& config) {
    const std::size_t n = rq.queues.size();
    cpu_load.resize(n, 0);
    std::vector<Migration> migrations;

    // The averaging memory lags behind the true queue lengths, so a pass may
    // overshoot and shuffle a task toward a queue that only looks idle. That
    // mirrors how cpu_load behaves; the iteration cap keeps the loop finite.
    const std::size_t cap = rq.total_tasks() + 8;
    for (std::size_t iter = 0; iter < cap; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            std::int64_t current =
                static_cast<std::int64_t>(rq.nr_running(i)) * config.sched_load_scale;
            cpu_load[i] = (current + cpu_load[i]) / 2;
        }
        std::size_t busiest = 0;
        std::size_t idlest = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (cpu_load[i] > cpu_load[busiest]) busiest = i;
            if (cpu_load[i] < cpu_load[idlest]) idlest = i;
        }
        if (cpu_load[busiest] - cpu_load[idlest] < config.sched_load_scale) break;

        auto& source = rq.queues[busiest];
        auto candidate = std::find_if(source.rbegin(), source.rend(),
                                      [](const LinuxTask& t) { return !t.pinned; });
        if (candidate == source.rend()) break;

        LinuxTask task = *candidate;
        source.erase(std::next(candidate).base());
        rq.queues[idlest].push_back(task);
        migrations.push_back(Migration{.key = task.key,
                                       .from_core = rq.core_ids[busiest],
                                       .to_core = rq.core_ids[idlest]});
    }
    return migrations;
}

PolicyTable::PolicyTable(CoreSet cores, XllConfig xll)
    : cores_(std::move(cores)), xll_(xll) {}

int PolicyTable::map_static(std::uint64_t program_thread_id) {
    std::lock_guard lock(mutex_);
    return static_map(program_thread_id, cores_);
}

int PolicyTable::map_bll() {
    std::lock_guard lock(mutex_);
    return bll_map(bll_, cores_);
}

int PolicyTable::map_xll(const ProcStatSnapshot& snapshot) {
    std::lock_guard lock(mutex_);
    return xll_map(cores_, snapshot, xll_);
}

void PolicyTable::reset() {
    std::lock_guard lock(mutex_);
    cores_.reset();
    bll_.next = 0;
}

CoreSet PolicyTable::records() const {
    std::lock_guard lock(mutex_);
    return cores_;
}

std::uint64_t PolicyTable::bll_count() const {
    std::lock_guard lock(mutex_);
    return bll_.next;
}

}  // namespace xllsim
