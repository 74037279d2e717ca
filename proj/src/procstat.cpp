#include "xllsim/procstat.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace xllsim {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r';
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        std::size_t start = i;
        while (i < line.size() && !is_space(line[i])) ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

Jiffies parse_counter(std::string_view token, int line_no) {
    Jiffies value = 0;
    auto [ptr, ec] = std::from_chars(token.begin(), token.end(), value);
    if (ec != std::errc{} || ptr != token.end()) {
        throw ParseError("line " + std::to_string(line_no) +
                             ": expected a non-negative integer, got '" +
                             std::string(token) + "'",
                         line_no);
    }
    return value;
}

// Returns the numeric suffix of a cpuN label, -1 for the bare aggregate
// label, or nullopt when the label is not a cpu line at all (e.g. "cpufreq").
std::optional<int> cpu_label_index(std::string_view label) {
    if (label == "cpu") return -1;
    if (label.size() <= 3 || label.substr(0, 3) != "cpu") return std::nullopt;
    std::string_view digits = label.substr(3);
    int index = 0;
    auto [ptr, ec] = std::from_chars(digits.begin(), digits.end(), index);
    if (ec != std::errc{} || ptr != digits.end()) return std::nullopt;
    return index;
}

}  // namespace

const CpuJiffies* ProcStatSnapshot::find(int cpu_index) const noexcept {
    auto it = std::lower_bound(per_cpu.begin(), per_cpu.end(), cpu_index,
                               [](const CpuJiffies& c, int idx) { return c.cpu_index < idx; });
    if (it == per_cpu.end() || it->cpu_index != cpu_index) return nullptr;
    return &*it;
}

ProcStatSnapshot parse_proc_stat(std::string_view text, Jiffies capture_tick) {
    ProcStatSnapshot snapshot;
    snapshot.capture_tick = capture_tick;

    std::unordered_set<int> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                     ? text.size() - pos
                                                     : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (line.empty()) continue;

        auto fields = split_fields(line);
        if (fields.empty()) continue;
        auto index = cpu_label_index(fields[0]);
        if (!index) continue;  // intr, ctxt, btime, processes, ...

        if (fields.size() < 5) {
            throw ParseError("line " + std::to_string(line_no) +
                                 ": cpu line needs at least 4 counters",
                             line_no);
        }
        CpuJiffies cpu;
        cpu.cpu_index = *index;
        cpu.user = parse_counter(fields[1], line_no);
        cpu.nice = parse_counter(fields[2], line_no);
        cpu.system = parse_counter(fields[3], line_no);
        cpu.idle = parse_counter(fields[4], line_no);
        for (std::size_t i = 5; i < fields.size(); ++i) {
            cpu.remaining.push_back(parse_counter(fields[i], line_no));
        }

        if (*index < 0) {
            if (snapshot.aggregate) {
                throw StructuralError("line " + std::to_string(line_no) +
                                          ": duplicate aggregate cpu line",
                                      line_no);
            }
            snapshot.aggregate = std::move(cpu);
        } else {
            if (!seen.insert(*index).second) {
                throw StructuralError("line " + std::to_string(line_no) +
                                          ": duplicate cpu index " +
                                          std::to_string(*index),
                                      line_no);
            }
            snapshot.per_cpu.push_back(std::move(cpu));
        }
    }

    if (snapshot.per_cpu.empty()) {
        throw StructuralError("no cpu lines", 0);
    }
    std::sort(snapshot.per_cpu.begin(), snapshot.per_cpu.end(),
              [](const CpuJiffies& a, const CpuJiffies& b) {
                  return a.cpu_index < b.cpu_index;
              });
    return snapshot;
}

ProcStatSnapshot load_proc_stat(const std::filesystem::path& path,
                                Jiffies capture_tick) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_proc_stat(buffer.str(), capture_tick);
}

Jiffies user_load(const ProcStatSnapshot& snapshot, int cpu_index) {
    const CpuJiffies* cpu = snapshot.find(cpu_index);
    if (!cpu) {
        throw std::out_of_range("cpu" + std::to_string(cpu_index) +
                                " not present in snapshot");
    }
    return cpu->user;
}

std::string to_proc_stat_text(const ProcStatSnapshot& snapshot) {
    std::ostringstream out;
    auto emit = [&out](const CpuJiffies& cpu) {
        out << "cpu";
        if (cpu.cpu_index >= 0) out << cpu.cpu_index;
        out << ' ' << cpu.user << ' ' << cpu.nice << ' ' << cpu.system << ' '
            << cpu.idle;
        for (Jiffies j : cpu.remaining) out << ' ' << j;
        out << '\n';
    };
    if (snapshot.aggregate) emit(*snapshot.aggregate);
    for (const CpuJiffies& cpu : snapshot.per_cpu) emit(cpu);
    return out.str();
}

}  // namespace xllsim
