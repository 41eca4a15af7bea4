#pragma once

// Batched load-flow kernels. The serial version is the reference; the OpenMP
// version must return byte-identical results in the same order.

#include <span>
#include <vector>

#include "gridsel/grid.hpp"
#include "gridsel/powerflow.hpp"

namespace gridsel {

struct OperatingPoint {
    Network net;
    Injections injections;
};

struct SolveOutcome {
    PowerFlowSolution solution;
    CongestionReport congestion;
    bool singular = false;
};

struct BatchOptions {
    SolverOptions solver;
    double congestion_threshold = 1.0;
    int jobs = 1;  // 1: serial kernel; 0: one thread per logical core
};

/// Never throws for a bad operating point: a singular Jacobian yields a
/// non-converged, congested outcome.
SolveOutcome solve_and_label(const OperatingPoint& point, const BatchOptions& options);

std::vector<SolveOutcome> solve_batch_serial(std::span<const OperatingPoint> points, const BatchOptions& options);
std::vector<SolveOutcome> solve_batch_omp(std::span<const OperatingPoint> points, const BatchOptions& options);

/// Dispatches on options.jobs.
std::vector<SolveOutcome> solve_batch(std::span<const OperatingPoint> points, const BatchOptions& options);

}  // namespace gridsel
