#include "gridsel/powerflow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gridsel {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

double max_abs(const VectorXd& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace

PowerFlowSolution solve_ac(const Network& net, const Injections& injections, const SolverOptions& options) {
    const auto n = static_cast<Index>(net.bus_count());
    if (injections.p_mw.size() != net.bus_count() || injections.q_mvar.size() != net.bus_count()) {
        throw std::invalid_argument("solve_ac: injection vectors must have one entry per bus");
    }
    if (!(options.tolerance > 0)) throw std::invalid_argument("solve_ac: tolerance must be positive");
    const int slack = net.slack_bus();
    if (slack < 0) throw std::invalid_argument("solve_ac: network has no slack bus");

    const ComplexMatrix ybus = admittance_matrix(net);

    std::vector<Index> pvpq;
    std::vector<Index> pq;
    for (const auto& b : net.buses) {
        if (b.kind != BusKind::Slack) pvpq.push_back(b.id);
        if (b.kind == BusKind::PQ) pq.push_back(b.id);
    }
    const auto n_ang = static_cast<Index>(pvpq.size());
    const auto n_mag = static_cast<Index>(pq.size());

    VectorXd vm(n);
    VectorXd va(n);
    for (const auto& b : net.buses) {
        vm(b.id) = b.kind == BusKind::PQ ? 1.0 : b.voltage_mag;
        va(b.id) = b.kind == BusKind::Slack ? b.voltage_ang : 0.0;
    }

    VectorXcd s_spec(n);
    for (Index i = 0; i < n; ++i) {
        s_spec(i) = Complex(injections.p_mw[i], injections.q_mvar[i]) / net.base_mva;
    }

    auto voltages = [&] {
        VectorXcd v(n);
        for (Index i = 0; i < n; ++i) v(i) = std::polar(vm(i), va(i));
        return v;
    };

    auto mismatch = [&](const VectorXcd& v, const VectorXcd& ibus) {
        const VectorXcd s_calc = v.cwiseProduct(ibus.conjugate());
        VectorXd f(n_ang + n_mag);
        for (Index k = 0; k < n_ang; ++k) f(k) = (s_calc(pvpq[k]) - s_spec(pvpq[k])).real();
        for (Index k = 0; k < n_mag; ++k) f(n_ang + k) = (s_calc(pq[k]) - s_spec(pq[k])).imag();
        return f;
    };

    PowerFlowSolution sol;
    VectorXcd v = voltages();
    VectorXcd ibus = ybus * v;
    VectorXd f = mismatch(v, ibus);
    double residual = max_abs(f);
    sol.residual_history.push_back(residual);

    int iter = 0;
    bool finite = std::isfinite(residual);
    while (finite && residual >= options.tolerance && iter < options.max_iter) {
        // dS/dVa = j diag(V) conj(diag(I) - Y diag(V))
        // dS/dVm = diag(V) conj(Y diag(V/|V|)) + conj(diag(I)) diag(V/|V|)
        const VectorXcd v_norm = v.cwiseQuotient(vm.cast<Complex>());
        ComplexMatrix ds_dva = -(ybus * v.asDiagonal());
        ds_dva.diagonal() += ibus;
        ds_dva = Complex(0.0, 1.0) * (v.asDiagonal() * ds_dva.conjugate());
        ComplexMatrix ds_dvm = v.asDiagonal() * (ybus * v_norm.asDiagonal()).conjugate();
        ds_dvm.diagonal() += ibus.conjugate().cwiseProduct(v_norm);

        MatrixXd jac(n_ang + n_mag, n_ang + n_mag);
        for (Index r = 0; r < n_ang; ++r) {
            for (Index c = 0; c < n_ang; ++c) jac(r, c) = ds_dva(pvpq[r], pvpq[c]).real();
            for (Index c = 0; c < n_mag; ++c) jac(r, n_ang + c) = ds_dvm(pvpq[r], pq[c]).real();
        }
        for (Index r = 0; r < n_mag; ++r) {
            for (Index c = 0; c < n_ang; ++c) jac(n_ang + r, c) = ds_dva(pq[r], pvpq[c]).imag();
            for (Index c = 0; c < n_mag; ++c) jac(n_ang + r, n_ang + c) = ds_dvm(pq[r], pq[c]).imag();
        }

        const Eigen::FullPivLU<MatrixXd> lu(jac);
        if (!lu.isInvertible()) {
            throw SingularJacobianError("singular Jacobian at iteration " + std::to_string(iter + 1));
        }
        const VectorXd dx = -lu.solve(f);

        for (Index k = 0; k < n_ang; ++k) va(pvpq[k]) += dx(k);
        for (Index k = 0; k < n_mag; ++k) vm(pq[k]) += dx(n_ang + k);
        ++iter;

        v = voltages();
        ibus = ybus * v;
        f = mismatch(v, ibus);
        residual = max_abs(f);
        finite = std::isfinite(residual) && vm.allFinite() && va.allFinite();
        sol.residual_history.push_back(residual);
    }

    sol.voltage_mag.assign(vm.data(), vm.data() + n);
    sol.voltage_ang.assign(va.data(), va.data() + n);
    sol.iterations = iter;
    sol.residual = residual;
    sol.converged = finite && residual < options.tolerance;
    sol.p_slack = (v(slack) * std::conj(ibus(slack))).real() * net.base_mva;

    const auto powers = branch_power(net, sol);
    sol.branch_flow_mva.reserve(powers.size());
    sol.losses_mw = 0.0;
    for (const auto& bp : powers) {
        sol.branch_flow_mva.push_back(
            std::max(std::hypot(bp.p_from_mw, bp.q_from_mvar), std::hypot(bp.p_to_mw, bp.q_to_mvar)));
        sol.losses_mw += bp.p_from_mw + bp.p_to_mw;
    }
    return sol;
}

std::vector<BranchPower> branch_power(const Network& net, const PowerFlowSolution& sol) {
    std::vector<BranchPower> out;
    out.reserve(net.branches.size());
    for (const auto& br : net.branches) {
        const Complex series = 1.0 / Complex(br.resistance, br.reactance);
        const Complex half_charging(0.0, br.charging_susceptance / 2.0);
        const Complex vf = std::polar(sol.voltage_mag[br.from_bus], sol.voltage_ang[br.from_bus]);
        const Complex vt = std::polar(sol.voltage_mag[br.to_bus], sol.voltage_ang[br.to_bus]);
        const Complex i_from = (vf - vt) * series + vf * half_charging;
        const Complex i_to = (vt - vf) * series + vt * half_charging;
        const Complex s_from = vf * std::conj(i_from) * net.base_mva;
        const Complex s_to = vt * std::conj(i_to) * net.base_mva;
        out.push_back({s_from.real(), s_from.imag(), s_to.real(), s_to.imag()});
    }
    return out;
}

std::vector<double> branch_flows(const Network& net, const PowerFlowSolution& sol) {
    std::vector<double> out;
    for (const auto& bp : branch_power(net, sol)) {
        out.push_back(std::max(std::hypot(bp.p_from_mw, bp.q_from_mvar), std::hypot(bp.p_to_mw, bp.q_to_mvar)));
    }
    return out;
}

CongestionReport detect_congestion(const Network& net, const PowerFlowSolution& sol, double threshold) {
    if (!(threshold > 0.0 && threshold <= 2.0)) {
        throw std::invalid_argument("detect_congestion: threshold must lie in (0, 2]");
    }
    CongestionReport report;
    const auto& flows = sol.branch_flow_mva.size() == net.branches.size() ? sol.branch_flow_mva : branch_flows(net, sol);
    for (std::size_t b = 0; b < net.branches.size(); ++b) {
        const double rating = net.branches[b].mva_rating;
        if (flows[b] > threshold * rating) report.overloaded_branches.push_back({b, flows[b] / rating});
    }
    report.infeasible = !sol.converged;
    report.congested = report.infeasible || !report.overloaded_branches.empty();
    return report;
}

}  // namespace gridsel
