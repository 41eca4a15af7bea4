#pragma once
// Independent reference implementations used as test oracles. They share no
// code with the library beyond the plain data types.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridsel/grid.hpp"
#include "gridsel/mlp.hpp"
#include "gridsel/powerflow.hpp"

namespace oracle {

struct GaussSeidelResult {
    std::vector<std::complex<double>> voltage;
    bool converged = false;
    int sweeps = 0;
};

/// Accelerated Gauss-Seidel load flow on an admittance matrix assembled here
/// from the branch list. PV buses are re-projected onto their setpoint each sweep.
GaussSeidelResult gauss_seidel(const gridsel::Network& net, const gridsel::Injections& inj, double tol = 1e-12,
                               int max_sweeps = 200000, double accel = 1.4);

/// Series-resistance losses in MW from bus voltages: sum of |I_series|^2 r.
double series_losses_mw(const gridsel::Network& net, const std::vector<std::complex<double>>& v);

/// Nested-loop forward pass with ReLU on hidden layers.
std::vector<double> naive_forward(const gridsel::ml::Mlp& m, const std::vector<double>& x);

/// Grid-file text for a two-bus case: slack at 1.0 pu, PQ load at bus 2, one line.
std::string two_bus_grid(double r, double x, double b = 0.0, double rating = 100.0);

}  // namespace oracle
