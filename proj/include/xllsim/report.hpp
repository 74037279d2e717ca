#pragma once

#include <string>
#include <vector>

#include "xllsim/scenario.hpp"

namespace xllsim {

/// Locale-independent "%.4f".
std::string format_ratio(double value);

/// One report as JSON (programs, summary figures, final per-core load,
/// sampled load trace).
std::string report_to_json(const ScenarioReport& report);

/// Per-program rows:
/// program,name,submit_tick,spawn_tick,completion_tick,turnaround_jiffies
std::string report_programs_csv(const ScenarioReport& report);

/// Sampled per-core load rows: tick,core,user_jiffies
std::string report_samples_csv(const ScenarioReport& report);

/// Side-by-side turnarounds for several policies on one scenario, one row
/// per program plus mean/max/throughput summary rows.
std::string comparison_csv(const std::vector<ScenarioReport>& reports);
std::string comparison_table(const std::vector<ScenarioReport>& reports);

/// Sweep rows: threads,policy,turnaround_jiffies,speedup
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace xllsim
