#include "gridsel/batch.hpp"

#include <limits>

#include <omp.h>

namespace gridsel {

SolveOutcome solve_and_label(const OperatingPoint& point, const BatchOptions& options) {
    SolveOutcome out;
    try {
        out.solution = solve_ac(point.net, point.injections, options.solver);
    } catch (const SingularJacobianError&) {
        out.singular = true;
        auto& sol = out.solution;
        for (const auto& b : point.net.buses) {
            sol.voltage_mag.push_back(b.kind == BusKind::PQ ? 1.0 : b.voltage_mag);
            sol.voltage_ang.push_back(0.0);
        }
        sol.converged = false;
        sol.residual = std::numeric_limits<double>::infinity();
        sol.branch_flow_mva = branch_flows(point.net, sol);
    }
    out.congestion = detect_congestion(point.net, out.solution, options.congestion_threshold);
    return out;
}

std::vector<SolveOutcome> solve_batch_serial(std::span<const OperatingPoint> points, const BatchOptions& options) {
    std::vector<SolveOutcome> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(solve_and_label(p, options));
    return out;
}

std::vector<SolveOutcome> solve_batch_omp(std::span<const OperatingPoint> points, const BatchOptions& options) {
    std::vector<SolveOutcome> out(points.size());
    const auto n = static_cast<long>(points.size());
    const int threads = options.jobs > 0 ? options.jobs : omp_get_max_threads();
    // Each task writes only its own slot, so output order is schedule-independent.
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
    for (long i = 0; i < n; ++i) {
        out[i] = solve_and_label(points[i], options);
    }
    return out;
}

std::vector<SolveOutcome> solve_batch(std::span<const OperatingPoint> points, const BatchOptions& options) {
    if (options.jobs == 1) return solve_batch_serial(points, options);
    return solve_batch_omp(points, options);
}

}  // namespace gridsel
