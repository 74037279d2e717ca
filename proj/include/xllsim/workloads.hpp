#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "xllsim/procstat.hpp"

namespace xllsim {

enum class CurveKind { linear, amdahl, saturating };

/// Scalability model for a program's parallel region. S(1) is 1 for every
/// kind and S(n) never exceeds n.
struct SpeedupCurve {
    CurveKind kind = CurveKind::linear;
    /// Parallelizable fraction, used by amdahl and by the rising part of
    /// saturating curves.
    double parallel_fraction = 1.0;
    /// Thread count where a saturating curve peaks.
    int saturation_threads = 1;
    /// Speedup lost per thread past the peak; zero or negative.
    double post_peak_slope = 0.0;

    static SpeedupCurve linear();
    static SpeedupCurve amdahl(double parallel_fraction);
    static SpeedupCurve saturating(double parallel_fraction,
                                   int saturation_threads,
                                   double post_peak_slope);

    bool operator==(const SpeedupCurve&) const = default;
};

/// Speedup never drops below this, whatever the post-peak slope says.
inline constexpr double kSpeedupFloor = 0.1;

/// S(n). Throws std::domain_error for n < 1.
double speedup(const SpeedupCurve& curve, int threads);

/// A program as the simulator sees it: a serial setup phase followed by one
/// parallel region.
struct WorkloadModel {
    std::string name;
    Jiffies init_jiffies = 0;  // serial phase length on an uncontended core
    Jiffies total_work = 1;    // single-thread jiffies for the parallel region
    SpeedupCurve curve;
    int thread_count = 1;
    /// Team threads stay asleep this long after creation. They occupy their
    /// pin but produce no load while sleeping.
    Jiffies sleep_jiffies = 0;

    bool operator==(const WorkloadModel&) const = default;
};

/// Work per thread such that thread_count threads on dedicated cores finish
/// the region in total_work / S(n) jiffies: total_work / S(thread_count).
double per_thread_work(const WorkloadModel& model);

/// The four modelled programs. Curve shapes and peak positions are the
/// contract; the numeric parameters are calibration constants (see
/// configs/stock_workloads.json for the committed values and rationale).
struct StockModels {
    WorkloadModel nqueens;
    WorkloadModel strassen;
    WorkloadModel sort;
    WorkloadModel health_small;
    WorkloadModel health_medium;
    WorkloadModel health_large;
};

StockModels stock_models();

/// Lookup by name ("nqueens", "strassen", "sort", "health" or
/// "health_small"/"health_medium"/"health_large"). "health" resolves to the
/// medium input.
std::optional<WorkloadModel> find_stock_model(std::string_view name);

}  // namespace xllsim
