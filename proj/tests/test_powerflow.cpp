#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gridsel/batch.hpp"
#include "gridsel/scenario.hpp"
#include "support/oracles.hpp"

using namespace gridsel;

namespace {

Injections two_bus_load(double p_mw, double q_mvar) {
    auto inj = Injections::zeros(2);
    inj.p_mw[1] = -p_mw;
    inj.q_mvar[1] = -q_mvar;
    return inj;
}

OperatingPoint reference_point(double scale, std::array<double, 3> solar, SubsetChoice choice = {}) {
    return make_operating_point(reference_network(), scale, solar, choice);
}

}  // namespace

TEST(SolveAc, ZeroInjectionsGiveFlatSolution) {
    const auto net = load_network(oracle::two_bus_grid(0.01, 0.1));
    const auto sol = solve_ac(net, Injections::zeros(2));
    ASSERT_TRUE(sol.converged);
    EXPECT_EQ(sol.iterations, 0);
    for (int i = 0; i < 2; ++i) {
        EXPECT_DOUBLE_EQ(sol.voltage_mag[i], 1.0);
        EXPECT_DOUBLE_EQ(sol.voltage_ang[i], 0.0);
    }
    for (double f : branch_flows(net, sol)) EXPECT_EQ(f, 0.0);
}

TEST(SolveAc, TwoBusClosedForm) {
    // Lossless line x = 0.1, load 0.5 pu at unity power factor, slack 1.0 at 0 rad.
    // Q balance at bus 2 gives cos(theta) = V2; P balance gives V2 sin(theta) = -0.05.
    const double v2 = std::sqrt((1.0 + std::sqrt(0.99)) / 2.0);
    const double th2 = -std::asin(0.05 / v2);
    const auto net = load_network(oracle::two_bus_grid(0.0, 0.1));
    const auto sol = solve_ac(net, two_bus_load(50.0, 0.0));
    ASSERT_TRUE(sol.converged);
    EXPECT_NEAR(sol.voltage_mag[1], v2, 1e-6);
    EXPECT_NEAR(sol.voltage_ang[1], th2, 1e-6);
    EXPECT_LT(sol.residual, 1e-8);

    const auto bp = branch_power(net, sol);
    EXPECT_NEAR(bp[0].p_from_mw, 50.0, 1e-6);
    EXPECT_NEAR(bp[0].p_to_mw, -50.0, 1e-6);
    EXPECT_NEAR(sol.p_slack, 50.0, 1e-6);
    EXPECT_NEAR(sol.losses_mw, 0.0, 1e-6);
}

TEST(SolveAc, TwoBusSendingEndCarriesLoadPlusLosses) {
    const auto net = load_network(oracle::two_bus_grid(0.02, 0.1));
    const auto sol = solve_ac(net, two_bus_load(50.0, 10.0));
    ASSERT_TRUE(sol.converged);
    const auto bp = branch_power(net, sol);
    std::vector<std::complex<double>> v = {std::polar(sol.voltage_mag[0], sol.voltage_ang[0]),
                                           std::polar(sol.voltage_mag[1], sol.voltage_ang[1])};
    const double losses = oracle::series_losses_mw(net, v);
    EXPECT_GT(losses, 0.0);
    EXPECT_NEAR(bp[0].p_from_mw, 50.0 + losses, 1e-6);
    EXPECT_NEAR(sol.losses_mw, losses, 1e-6);
}

TEST(SolveAc, FlowsSymmetricUnderRelabelling) {
    // Same physical line written as 1->2 and 2->1.
    auto text = oracle::two_bus_grid(0.0, 0.1, 0.02);
    const auto a = load_network(text);
    text.replace(text.find("1, 2, "), 6, "2, 1, ");
    const auto b = load_network(text);
    const auto sa = solve_ac(a, two_bus_load(40.0, 5.0));
    const auto sb = solve_ac(b, two_bus_load(40.0, 5.0));
    EXPECT_NEAR(branch_flows(a, sa)[0], branch_flows(b, sb)[0], 1e-9);
    EXPECT_NEAR(branch_power(a, sa)[0].p_from_mw, branch_power(b, sb)[0].p_to_mw, 1e-9);
}

TEST(SolveAc, ReferenceMediumConvergesQuadratically) {
    const auto op = reference_point(1.0, {50.0, 45.0, 45.0});
    const auto sol = solve_ac(op.net, op.injections);
    ASSERT_TRUE(sol.converged);
    EXPECT_LE(sol.iterations, 10);
    EXPECT_LT(sol.residual, 1e-8);
    const auto& h = sol.residual_history;
    ASSERT_GE(h.size(), 3u);
    for (std::size_t i = h.size() - 3; i + 1 < h.size(); ++i) EXPECT_LT(h[i + 1], h[i]);
}

TEST(SolveAc, ReferenceMediumMatchesGaussSeidel) {
    const auto op = reference_point(1.0, {50.0, 45.0, 45.0});
    const auto sol = solve_ac(op.net, op.injections);
    const auto gs = oracle::gauss_seidel(op.net, op.injections);
    ASSERT_TRUE(gs.converged);
    for (std::size_t i = 0; i < 20; ++i) {
        EXPECT_NEAR(sol.voltage_mag[i], std::abs(gs.voltage[i]), 1e-6);
        EXPECT_NEAR(sol.voltage_ang[i], std::arg(gs.voltage[i]), 1e-6);
    }
}

TEST(SolveAc, RandomSuitePowerBalanceAndOracleAgreement) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> scale(0.6, 1.3);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    std::bernoulli_distribution off(0.3);
    int converged = 0;
    for (int k = 0; k < 50; ++k) {
        SubsetChoice c;
        for (auto& f : c.off) f = off(rng);
        const auto op = reference_point(scale(rng), {100 * frac(rng), 90 * frac(rng), 90 * frac(rng)}, c);
        const auto sol = solve_ac(op.net, op.injections);
        if (!sol.converged) continue;
        ++converged;

        double gen = sol.p_slack;
        for (std::size_t i = 0; i < 20; ++i) {
            if (op.net.buses[i].kind != BusKind::Slack) gen += op.injections.p_mw[i];
        }
        std::vector<std::complex<double>> v;
        for (std::size_t i = 0; i < 20; ++i) v.push_back(std::polar(sol.voltage_mag[i], sol.voltage_ang[i]));
        EXPECT_LT(std::abs(gen - oracle::series_losses_mw(op.net, v)), 1e-4) << "scenario " << k;
        EXPECT_LT(std::abs(sol.losses_mw - oracle::series_losses_mw(op.net, v)), 1e-4);

        const auto gs = oracle::gauss_seidel(op.net, op.injections);
        ASSERT_TRUE(gs.converged) << "scenario " << k;
        for (std::size_t i = 0; i < 20; ++i) EXPECT_NEAR(sol.voltage_mag[i], std::abs(gs.voltage[i]), 1e-6);
    }
    EXPECT_EQ(converged, 50);
}

TEST(SolveAc, MaxIterExhaustionReturnsLastIterate) {
    const auto op = reference_point(1.3, {0, 0, 0});
    SolverOptions o;
    o.max_iter = 1;
    const auto sol = solve_ac(op.net, op.injections, o);
    EXPECT_FALSE(sol.converged);
    EXPECT_EQ(sol.voltage_mag.size(), 20u);
    EXPECT_TRUE(detect_congestion(op.net, sol).congested);
    EXPECT_TRUE(detect_congestion(op.net, sol).infeasible);
}

TEST(Congestion, RatingThreshold) {
    const auto net = load_network(oracle::two_bus_grid(0.01, 0.1, 0.0, 100.0));
    PowerFlowSolution sol;
    sol.converged = true;
    sol.branch_flow_mva = {80.0};
    EXPECT_FALSE(detect_congestion(net, sol).congested);
    EXPECT_TRUE(detect_congestion(net, sol).overloaded_branches.empty());
    sol.branch_flow_mva = {105.0};
    const auto r = detect_congestion(net, sol);
    ASSERT_TRUE(r.congested);
    ASSERT_EQ(r.overloaded_branches.size(), 1u);
    EXPECT_NEAR(r.overloaded_branches[0].loading, 1.05, 1e-12);
}

TEST(Congestion, ThresholdDomainAndMonotonicity) {
    const auto op = reference_point(1.3, {0, 0, 0}, SubsetChoice{{true, true, true}});
    const auto sol = solve_ac(op.net, op.injections);
    EXPECT_THROW(detect_congestion(op.net, sol, 0.0), std::invalid_argument);
    EXPECT_THROW(detect_congestion(op.net, sol, 2.5), std::invalid_argument);
    std::size_t prev = 1000;
    for (double t = 0.2; t <= 2.0; t += 0.1) {
        const auto n = detect_congestion(op.net, sol, t).overloaded_branches.size();
        EXPECT_LE(n, prev);
        prev = n;
    }
}

TEST(Congestion, HighLoadingAllSolarOffOverloadsATieLine) {
    const auto op = reference_point(1.3, {0, 0, 0}, SubsetChoice{{true, true, true}});
    const auto sol = solve_ac(op.net, op.injections);
    ASSERT_TRUE(sol.converged);
    const auto r = detect_congestion(op.net, sol);
    bool tie = false;
    for (const auto& o : r.overloaded_branches) tie = tie || op.net.branches[o.branch].is_tie_line;
    EXPECT_TRUE(tie);
}

TEST(Congestion, LowLoadingAllOnIsClear) {
    const auto op = reference_point(0.7, {60.0, 50.0, 50.0});
    const auto sol = solve_ac(op.net, op.injections);
    ASSERT_TRUE(sol.converged);
    EXPECT_FALSE(detect_congestion(op.net, sol).congested);
}

TEST(Batch, OpenMpMatchesSerialBitForBit) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    std::vector<OperatingPoint> pts;
    for (int k = 0; k < 64; ++k) {
        SubsetChoice c;
        c.off[k % 3] = k % 2 == 0;
        pts.push_back(reference_point(0.7 + 0.6 * frac(rng), {100 * frac(rng), 90 * frac(rng), 90 * frac(rng)}, c));
    }
    BatchOptions serial;
    BatchOptions par;
    par.jobs = 4;
    const auto a = solve_batch_serial(pts, serial);
    const auto b = solve_batch_omp(pts, par);
    const auto c = solve_batch(pts, par);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].solution.voltage_mag, b[i].solution.voltage_mag);
        EXPECT_EQ(a[i].solution.voltage_ang, b[i].solution.voltage_ang);
        EXPECT_EQ(a[i].solution.branch_flow_mva, b[i].solution.branch_flow_mva);
        EXPECT_EQ(a[i].congestion.congested, b[i].congestion.congested);
        EXPECT_EQ(a[i].solution.voltage_mag, c[i].solution.voltage_mag);
    }
}

TEST(Batch, SingularPointIsLabelledNotThrown) {
    // An isolated PQ bus with a load makes the Jacobian singular.
    auto op = reference_point(1.0, {50, 45, 45});
    op.net.buses.push_back({20, BusKind::PQ, 1.0, 0.0, 0.0});
    op.injections.p_mw.push_back(-10.0);
    op.injections.q_mvar.push_back(0.0);
    const auto out = solve_and_label(op, BatchOptions{});
    EXPECT_TRUE(out.singular);
    EXPECT_FALSE(out.solution.converged);
    EXPECT_TRUE(out.congestion.congested);
}
