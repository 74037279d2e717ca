#include "xllsim/workloads.hpp"

#include <algorithm>
#include <stdexcept>

namespace xllsim {

namespace {

double amdahl_eval(double p, int n) {
    return 1.0 / ((1.0 - p) + p / static_cast<double>(n));
}

}  // namespace

SpeedupCurve SpeedupCurve::linear() {
    return SpeedupCurve{.kind = CurveKind::linear};
}

SpeedupCurve SpeedupCurve::amdahl(double parallel_fraction) {
    if (parallel_fraction <= 0.0 || parallel_fraction > 1.0) {
        throw std::invalid_argument("parallel_fraction must be in (0, 1]");
    }
    return SpeedupCurve{.kind = CurveKind::amdahl,
                        .parallel_fraction = parallel_fraction};
}

SpeedupCurve SpeedupCurve::saturating(double parallel_fraction,
                                      int saturation_threads,
                                      double post_peak_slope) {
    if (parallel_fraction <= 0.0 || parallel_fraction > 1.0) {
        throw std::invalid_argument("parallel_fraction must be in (0, 1]");
    }
    if (saturation_threads < 1) {
        throw std::invalid_argument("saturation_threads must be positive");
    }
    if (post_peak_slope > 0.0) {
        throw std::invalid_argument("post_peak_slope must be <= 0");
    }
    return SpeedupCurve{.kind = CurveKind::saturating,
                        .parallel_fraction = parallel_fraction,
                        .saturation_threads = saturation_threads,
                        .post_peak_slope = post_peak_slope};
}

double speedup(const SpeedupCurve& curve, int threads) {
    if (threads < 1) throw std::domain_error("thread count must be >= 1");
    switch (curve.kind) {
        case CurveKind::linear:
            return static_cast<double>(threads);
        case CurveKind::amdahl:
            return amdahl_eval(curve.parallel_fraction, threads);
        case CurveKind::saturating: {
            if (threads <= curve.saturation_threads) {
                return amdahl_eval(curve.parallel_fraction, threads);
            }
            double peak = amdahl_eval(curve.parallel_fraction,
                                      curve.saturation_threads);
            double value = peak + curve.post_peak_slope *
                                      (threads - curve.saturation_threads);
            return std::max(kSpeedupFloor, value);
        }
    }
    throw std::logic_error("unknown curve kind");
}

double per_thread_work(const WorkloadModel& model) {
    return static_cast<double>(model.total_work) /
           speedup(model.curve, model.thread_count);
}

StockModels stock_models() {
    StockModels models;

    models.nqueens = WorkloadModel{
        .name = "nqueens",
        .init_jiffies = 85,
        .total_work = 60000,
        .curve = SpeedupCurve::linear(),
        .thread_count = 63,
    };

    models.strassen = WorkloadModel{
        .name = "strassen",
        .init_jiffies = 155,
        .total_work = 12000,
        .curve = SpeedupCurve::amdahl(0.90),
        .thread_count = 63,
    };

    models.sort = WorkloadModel{
        .name = "sort",
        .init_jiffies = 20,
        .total_work = 4000,
        .curve = SpeedupCurve::saturating(0.97, 16, -0.10),
        .thread_count = 16,
    };

    models.health_medium = WorkloadModel{
        .name = "health_medium",
        .init_jiffies = 45,
        .total_work = 12000,
        .curve = SpeedupCurve::saturating(0.97, 32, -0.10),
        .thread_count = 32,
    };

    // Small and large inputs scale the medium workload by fixed factors.
    models.health_small = models.health_medium;
    models.health_small.name = "health_small";
    models.health_small.total_work = models.health_medium.total_work / 4;

    models.health_large = models.health_medium;
    models.health_large.name = "health_large";
    models.health_large.total_work = models.health_medium.total_work * 4;

    return models;
}

std::optional<WorkloadModel> find_stock_model(std::string_view name) {
    StockModels models = stock_models();
    if (name == "nqueens") return models.nqueens;
    if (name == "strassen") return models.strassen;
    if (name == "sort") return models.sort;
    if (name == "health" || name == "health_medium") return models.health_medium;
    if (name == "health_small") return models.health_small;
    if (name == "health_large") return models.health_large;
    return std::nullopt;
}

}  // namespace xllsim
