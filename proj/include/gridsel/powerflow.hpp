#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gridsel/grid.hpp"

namespace gridsel {

/// Net specified injection per bus (generation minus demand).
/// P is ignored at the slack bus and Q at slack/PV buses, where they are solved for.
struct Injections {
    std::vector<double> p_mw;
    std::vector<double> q_mvar;

    static Injections zeros(std::size_t buses) { return {std::vector<double>(buses, 0.0), std::vector<double>(buses, 0.0)}; }
};

struct SolverOptions {
    double tolerance = 1e-8;  // per-unit, max-abs power mismatch
    int max_iter = 30;
};

struct PowerFlowSolution {
    std::vector<double> voltage_mag;
    std::vector<double> voltage_ang;
    std::vector<double> branch_flow_mva;  // larger of the two end apparent powers
    double p_slack = 0.0;                  // MW, net injection computed at the slack bus
    double losses_mw = 0.0;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;  // mismatch before each correction, then final
};

class SingularJacobianError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Newton-Raphson AC load flow in polar coordinates from a flat start.
/// Slack and PV buses hold their Bus::voltage_mag setpoint.
/// Returns converged=false with the last iterate when max_iter is exhausted
/// or the iterate stops being finite; throws SingularJacobianError otherwise.
PowerFlowSolution solve_ac(const Network& net, const Injections& injections, const SolverOptions& options = {});

struct BranchPower {
    double p_from_mw = 0.0;
    double q_from_mvar = 0.0;
    double p_to_mw = 0.0;
    double q_to_mvar = 0.0;
};

/// Pi-model end powers for every branch at the given bus voltages.
std::vector<BranchPower> branch_power(const Network& net, const PowerFlowSolution& sol);

/// Apparent power per branch in MVA: max(|S_from|, |S_to|).
std::vector<double> branch_flows(const Network& net, const PowerFlowSolution& sol);

struct OverloadedBranch {
    std::size_t branch = 0;
    double loading = 0.0;  // flow / rating
};

struct CongestionReport {
    bool congested = false;
    /// Set when the underlying solve did not converge. Such a point is
    /// congested even if no branch in the last iterate exceeds its rating.
    bool infeasible = false;
    std::vector<OverloadedBranch> overloaded_branches;
};

/// Branch b is overloaded iff flow[b] > threshold * rating[b].
/// Throws std::invalid_argument unless 0 < threshold <= 2.
CongestionReport detect_congestion(const Network& net, const PowerFlowSolution& sol, double threshold = 1.0);

}  // namespace gridsel
