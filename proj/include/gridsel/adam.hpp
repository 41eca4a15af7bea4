#pragma once

#include <Eigen/Dense>

namespace gridsel::ml {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;    // decay of the first-moment estimate
    double beta2 = 0.999;  // decay of the second-moment estimate
    double epsilon = 1e-8;
};

struct AdamState {
    AdamConfig config;
    long step_count = 0;
    Eigen::VectorXd first_moments;
    Eigen::VectorXd second_moments;

    /// Throws std::invalid_argument unless 0 <= beta1, beta2 < 1, lr > 0 and epsilon > 0.
    explicit AdamState(AdamConfig cfg = {});
};

/// One bias-corrected Adam update of `params` in place. Moments are sized on
/// the first call; later calls must keep the same parameter count.
void adam_step(AdamState& state, Eigen::VectorXd& params, const Eigen::VectorXd& grads);

}  // namespace gridsel::ml
