#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xllsim {

/// One jiffy is 1/kUserHz seconds of CPU time, the unit every counter in a
/// /proc/stat image is expressed in.
inline constexpr int kUserHz = 100;
inline constexpr int kJiffyMs = 1000 / kUserHz;

using Jiffies = std::uint64_t;

class ProcStatError : public std::runtime_error {
public:
    ProcStatError(const std::string& message, int line)
        : std::runtime_error(message), line_(line) {}
    /// 1-based line number the error refers to; 0 when not tied to a line.
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Malformed cpu line: a non-integer field or fewer than four counters.
class ParseError : public ProcStatError {
    using ProcStatError::ProcStatError;
};

/// Well-formed lines that violate snapshot structure (duplicate cpu index,
/// no cpu lines at all).
class StructuralError : public ProcStatError {
    using ProcStatError::ProcStatError;
};

/// Counters of one `cpuN` line, in kernel column order.
struct CpuJiffies {
    int cpu_index = -1;  // -1 on the aggregate `cpu` line
    Jiffies user = 0;
    Jiffies nice = 0;
    Jiffies system = 0;
    Jiffies idle = 0;
    /// iowait, irq, softirq, steal, guest, guest_nice and anything newer
    /// kernels append. Preserved verbatim so serialization round-trips.
    std::vector<Jiffies> remaining;

    bool operator==(const CpuJiffies&) const = default;
};

/// A parsed /proc/stat image. Non-cpu lines (intr, ctxt, btime, ...) are
/// dropped; the per-core list is kept sorted by cpu_index.
struct ProcStatSnapshot {
    std::optional<CpuJiffies> aggregate;  // the bare `cpu` line, if present
    std::vector<CpuJiffies> per_cpu;      // sorted by cpu_index, never empty
    Jiffies capture_tick = 0;

    bool operator==(const ProcStatSnapshot&) const = default;

    /// nullptr when the index is not present.
    const CpuJiffies* find(int cpu_index) const noexcept;
};

/// Parses a /proc/stat text image.
/// Throws ParseError (with the offending 1-based line number) on a malformed
/// cpu line and StructuralError on duplicate cpu indices or when the text
/// contains no cpuN lines.
ProcStatSnapshot parse_proc_stat(std::string_view text, Jiffies capture_tick = 0);

ProcStatSnapshot load_proc_stat(const std::filesystem::path& path,
                                Jiffies capture_tick = 0);

/// User-mode jiffies of one core. This is the load figure the lowest-load
/// mappers work from: strictly the `user` column, not user+nice.
/// Throws std::out_of_range when the core is absent.
Jiffies user_load(const ProcStatSnapshot& snapshot, int cpu_index);

/// Renders a snapshot back to /proc/stat text. parse_proc_stat of the result
/// reproduces the snapshot field for field.
std::string to_proc_stat_text(const ProcStatSnapshot& snapshot);

}  // namespace xllsim
