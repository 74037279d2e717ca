#include "xllsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace xllsim {

std::optional<Policy> policy_from_name(std::string_view name) {
    if (name == "static") return Policy::static_map;
    if (name == "bll") return Policy::bll;
    if (name == "xll") return Policy::xll;
    if (name == "linux") return Policy::linux_like;
    return std::nullopt;
}

std::string_view policy_name(Policy policy) {
    switch (policy) {
        case Policy::static_map: return "static";
        case Policy::bll: return "bll";
        case Policy::xll: return "xll";
        case Policy::linux_like: return "linux";
    }
    return "?";
}

CoreSet SimConfig::make_core_set() const {
    return reserve_core_zero ? CoreSet::reserved_zero(total_cores)
                             : CoreSet::full(total_cores);
}

Engine::Engine(SimConfig config)
    : config_(config),
      table_(config.make_core_set(), XllConfig{config.resolution_bump}),
      rng_(config.rng_seed) {
    usable_ = table_.records().usable;
    slot_by_id_.assign(config_.total_cores, -1);
    for (std::size_t slot = 0; slot < usable_.size(); ++slot) {
        slot_by_id_[usable_[slot]] = static_cast<int>(slot);
    }
    rq_ = LinuxRunqueues::for_cores(usable_);
    cpu_load_.assign(usable_.size(), 0);
    counters_.resize(config_.total_cores);
    for (int id = 0; id < config_.total_cores; ++id) counters_[id].core_id = id;
    residents_.resize(usable_.size());
    cursor_.assign(usable_.size(), 0);
}

int Engine::submit(const WorkloadModel& model, Tick at) {
    if (at < tick_) throw SimError("cannot submit in the past");
    if (model.total_work == 0) throw SimError("total_work must be positive");
    if (model.thread_count < 1) throw SimError("thread_count must be >= 1");

    SimProgram program;
    program.model = model;
    program.submit_tick = at;
    program.init_remaining = static_cast<std::int64_t>(model.init_jiffies);
    double pool = per_thread_work(model) * model.thread_count;
    program.work_total = std::max<std::int64_t>(1, std::llround(pool));
    program.work_remaining = program.work_total;

    int id = static_cast<int>(programs_.size());
    programs_.push_back(std::move(program));
    pending_submissions_[at].push_back(id);
    ++live_programs_;
    return id;
}

bool Engine::idle() const {
    return live_programs_ == 0 && pending_submissions_.empty();
}

void Engine::record_event(std::string_view kind, int program, int thread,
                          int core) {
    trace_ += std::to_string(tick_);
    trace_ += ',';
    trace_ += kind;
    trace_ += ',';
    trace_ += std::to_string(program);
    trace_ += ',';
    trace_ += std::to_string(thread);
    trace_ += ',';
    trace_ += std::to_string(core);
    trace_ += '\n';
}

void Engine::add_resident(int slot, int entity) {
    residents_[slot].push_back(entity);
}

void Engine::remove_resident(int slot, int entity) {
    auto& list = residents_[slot];
    auto it = std::find(list.begin(), list.end(), entity);
    if (it == list.end()) return;
    std::size_t index = static_cast<std::size_t>(it - list.begin());
    list.erase(it);
    if (cursor_[slot] > index) --cursor_[slot];
    if (!list.empty()) cursor_[slot] %= list.size();
    else cursor_[slot] = 0;
}

int Engine::os_place(std::uint64_t rq_key) {
    if (config_.policy == Policy::linux_like) {
        return linux_like_place(LinuxTask{.key = rq_key}, rq_);
    }
    // Same rule as the runqueue placement: fewest runnable residents wins,
    // lowest index breaks ties.
    std::size_t best = 0;
    std::size_t best_count = SIZE_MAX;
    for (std::size_t slot = 0; slot < residents_.size(); ++slot) {
        std::size_t count = 0;
        for (int entity : residents_[slot]) {
            if (is_init(entity)) {
                ++count;
            } else {
                const SimThread& t = threads_[entity];
                if (t.state == ThreadState::running) ++count;
            }
        }
        if (count < best_count) {
            best_count = count;
            best = slot;
        }
    }
    return usable_[best];
}

void Engine::start_serial_phase(int program_id) {
    SimProgram& program = programs_[program_id];
    record_event("SUBMIT", program_id, -1, -1);
    if (program.init_remaining == 0) {
        schedule_team(program_id, tick_);
        return;
    }
    int core = os_place(0x8000000000000000ull | static_cast<std::uint64_t>(program_id));
    program.init_core = core;
    add_resident(slot_of(core), init_entity(program_id));
    record_event("INIT", program_id, -1, core);
}

void Engine::schedule_team(int program_id, Tick first_tick) {
    SimProgram& program = programs_[program_id];
    program.spawned = true;
    program.spawn_tick = first_tick;
    for (int k = 0; k < program.model.thread_count; ++k) {
        SimThread thread;
        thread.program = program_id;
        thread.team_index = k;
        int tid = static_cast<int>(threads_.size());
        threads_.push_back(thread);
        program.thread_ids.push_back(tid);

        Tick at = first_tick + static_cast<Tick>(k) * config_.spawn_stagger;
        if (config_.creation_jitter > 0) {
            at += rng_() % (config_.creation_jitter + 1);
        }
        pending_spawns_[at].push_back(tid);
    }
}

void Engine::map_thread(int thread_id) {
    SimThread& thread = threads_[thread_id];
    const SimProgram& program = programs_[thread.program];

    int core = -1;
    switch (config_.policy) {
        case Policy::static_map:
            core = table_.map_static(static_cast<std::uint64_t>(thread.team_index));
            break;
        case Policy::bll:
            core = table_.map_bll();
            break;
        case Policy::xll:
            core = table_.map_xll(synth_snapshot());
            break;
        case Policy::linux_like:
            core = linux_like_place(
                LinuxTask{.key = static_cast<std::uint64_t>(thread_id)}, rq_);
            break;
    }

    thread.core = core;
    thread.mapped_tick = tick_;
    add_resident(slot_of(core), thread_id);
    if (program.model.sleep_jiffies > 0) {
        thread.state = ThreadState::sleeping;
        thread.wake_tick = tick_ + program.model.sleep_jiffies;
        pending_wakes_[thread.wake_tick].push_back(thread_id);
        if (config_.policy == Policy::linux_like) {
            rq_.remove(static_cast<std::uint64_t>(thread_id));
        }
    } else {
        thread.state = ThreadState::running;
    }
    record_event("SPAWN", thread.program, thread.team_index, core);
}

void Engine::process_submissions() {
    auto it = pending_submissions_.find(tick_);
    if (it == pending_submissions_.end()) return;
    for (int program_id : it->second) start_serial_phase(program_id);
    pending_submissions_.erase(it);
}

void Engine::process_wakes() {
    auto it = pending_wakes_.find(tick_);
    if (it == pending_wakes_.end()) return;
    for (int tid : it->second) {
        SimThread& thread = threads_[tid];
        if (thread.state != ThreadState::sleeping) continue;
        thread.state = ThreadState::running;
        if (config_.policy == Policy::linux_like) {
            auto& queue = rq_.queues[slot_of(thread.core)];
            queue.push_back(LinuxTask{.key = static_cast<std::uint64_t>(tid)});
        }
    }
    pending_wakes_.erase(it);
}

void Engine::process_spawns() {
    auto it = pending_spawns_.find(tick_);
    if (it == pending_spawns_.end()) return;
    // One lock acquisition per thread, in creation order.
    for (int tid : it->second) map_thread(tid);
    pending_spawns_.erase(it);
}

bool Engine::entity_can_run(int entity) const {
    if (is_init(entity)) {
        return programs_[entity_program(entity)].init_remaining > 0;
    }
    const SimThread& thread = threads_[entity];
    if (thread.state != ThreadState::running) return false;
    return programs_[thread.program].work_remaining > 0;
}

bool Engine::entity_warming(int entity) const {
    if (is_init(entity)) return false;
    const SimThread& thread = threads_[entity];
    return thread.state == ThreadState::running &&
           tick_ < thread.warming_until &&
           programs_[thread.program].work_remaining > 0;
}

void Engine::execute_cores() {
    for (std::size_t slot = 0; slot < residents_.size(); ++slot) {
        auto& list = residents_[slot];
        bool granted = false;
        if (!list.empty()) {
            std::size_t size = list.size();
            for (std::size_t j = 0; j < size; ++j) {
                std::size_t index = (cursor_[slot] + j) % size;
                int entity = list[index];
                if (!entity_can_run(entity)) continue;
                cursor_[slot] = (index + 1) % size;
                if (entity_warming(entity)) break;  // turn spent refilling
                if (is_init(entity)) {
                    --programs_[entity_program(entity)].init_remaining;
                } else {
                    --programs_[threads_[entity].program].work_remaining;
                }
                ++executed_;
                granted = true;
                break;
            }
        }
        CoreCounter& counter = counters_[usable_[slot]];
        if (granted) ++counter.user;
        else ++counter.idle;
    }
    // Reserved cores never execute simulated work.
    for (int id = 0; id < config_.total_cores; ++id) {
        if (slot_by_id_[id] < 0) ++counters_[id].idle;
    }
}

void Engine::finish_programs() {
    for (std::size_t pid = 0; pid < programs_.size(); ++pid) {
        SimProgram& program = programs_[pid];
        if (program.done) continue;

        if (!program.spawned && program.init_core >= 0 &&
            program.init_remaining == 0) {
            remove_resident(slot_of(program.init_core), init_entity(static_cast<int>(pid)));
            if (config_.policy == Policy::linux_like) {
                rq_.remove(0x8000000000000000ull | pid);
            }
            program.init_core = -1;
            schedule_team(static_cast<int>(pid), tick_ + 1);
            continue;
        }

        if (program.spawned && program.work_remaining == 0) {
            program.done = true;
            program.completion_tick = tick_ + 1;
            for (int tid : program.thread_ids) {
                SimThread& thread = threads_[tid];
                thread.state = ThreadState::done;
                remove_resident(slot_of(thread.core), tid);
                if (config_.policy == Policy::linux_like) {
                    rq_.remove(static_cast<std::uint64_t>(tid));
                }
            }
            --live_programs_;
            record_event("DONE", static_cast<int>(pid), -1, -1);
        }
    }
}

void Engine::run_balance() {
    auto migrations = linux_like_balance(
        rq_, cpu_load_, LinuxBalanceConfig{config_.sched_load_scale});
    for (const Migration& m : migrations) {
        // Serial-phase entities can be moved like any other task.
        if (m.key & 0x8000000000000000ull) {
            int pid = static_cast<int>(m.key & 0x7fffffffffffffffull);
            SimProgram& program = programs_[pid];
            remove_resident(slot_of(program.init_core), init_entity(pid));
            program.init_core = m.to_core;
            add_resident(slot_of(m.to_core), init_entity(pid));
            record_event("MIGRATE", pid, -1, m.to_core);
            continue;
        }
        int tid = static_cast<int>(m.key);
        SimThread& thread = threads_[tid];
        remove_resident(slot_of(thread.core), tid);
        thread.core = m.to_core;
        add_resident(slot_of(m.to_core), tid);
        record_event("MIGRATE", thread.program, thread.team_index, m.to_core);
        // The mover stays runnable but spends its first turns pulling its
        // working set across; those turns retire nothing.
        thread.warming_until = tick_ + config_.migration_warmup;
    }
}

void Engine::step() {
    if (config_.policy == Policy::linux_like && tick_ > 0 &&
        tick_ % config_.balance_interval == 0) {
        run_balance();
    }
    process_submissions();
    process_wakes();
    process_spawns();
    execute_cores();
    finish_programs();
    if (config_.snapshot_staleness > 0) {
        history_.emplace_back(tick_, counters_);
        while (history_.size() > config_.snapshot_staleness + 1) {
            history_.pop_front();
        }
    }
    ++tick_;
}

Tick Engine::run_until_idle() {
    while (!idle()) {
        if (tick_ >= config_.tick_budget) {
            std::ostringstream msg;
            msg << "tick budget " << config_.tick_budget
                << " exceeded; unfinished programs:";
            for (std::size_t pid = 0; pid < programs_.size(); ++pid) {
                const SimProgram& p = programs_[pid];
                if (p.done) continue;
                msg << " [" << pid << " " << p.model.name
                    << " init_remaining=" << p.init_remaining
                    << " work_remaining=" << p.work_remaining
                    << " spawned=" << p.spawned << "]";
            }
            throw SimError(msg.str());
        }
        step();
    }
    return tick_;
}

ProcStatSnapshot Engine::synth_snapshot() const {
    const std::vector<CoreCounter>* frame = &counters_;
    Tick as_of = tick_;
    if (config_.snapshot_staleness > 0) {
        if (tick_ <= config_.snapshot_staleness) {
            // Before enough history exists, everything reads as zero.
            std::string text;
            for (int id = 0; id < config_.total_cores; ++id) {
                text += "cpu" + std::to_string(id) + " 0 0 0 0\n";
            }
            return parse_proc_stat(text, 0);
        }
        as_of = tick_ - config_.snapshot_staleness;
        // Frame recorded at the end of tick (as_of - 1).
        for (const auto& [frame_tick, counters] : history_) {
            if (frame_tick == as_of - 1) {
                frame = &counters;
                break;
            }
        }
    }

    std::ostringstream text;
    Jiffies total_user = 0;
    Jiffies total_idle = 0;
    for (const CoreCounter& c : *frame) {
        total_user += c.user;
        total_idle += c.idle;
    }
    text << "cpu " << total_user << " 0 0 " << total_idle << " 0 0 0 0 0 0\n";
    for (const CoreCounter& c : *frame) {
        text << "cpu" << c.core_id << ' ' << c.user << " 0 0 " << c.idle
             << " 0 0 0 0 0 0\n";
    }
    return parse_proc_stat(text.str(), as_of);
}

Jiffies Engine::total_user_jiffies() const {
    Jiffies total = 0;
    for (const CoreCounter& c : counters_) total += c.user;
    return total;
}

}  // namespace xllsim
