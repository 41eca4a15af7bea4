#include "gridsel/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace gridsel::ml {

AdamState::AdamState(AdamConfig cfg) : config(cfg) {
    if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0 && cfg.beta2 >= 0.0 && cfg.beta2 < 1.0)) {
        throw std::invalid_argument("Adam: decay rates must lie in [0, 1)");
    }
    if (!(cfg.learning_rate > 0.0) || !(cfg.epsilon > 0.0)) {
        throw std::invalid_argument("Adam: learning rate and epsilon must be positive");
    }
}

void adam_step(AdamState& state, Eigen::VectorXd& params, const Eigen::VectorXd& grads) {
    if (params.size() != grads.size()) throw std::invalid_argument("adam_step: parameter/gradient size mismatch");
    if (state.step_count == 0 && state.first_moments.size() == 0) {
        state.first_moments = Eigen::VectorXd::Zero(params.size());
        state.second_moments = Eigen::VectorXd::Zero(params.size());
    }
    if (state.first_moments.size() != params.size()) throw std::invalid_argument("adam_step: parameter count changed");

    const auto& c = state.config;
    ++state.step_count;
    state.first_moments = c.beta1 * state.first_moments + (1.0 - c.beta1) * grads;
    state.second_moments = c.beta2 * state.second_moments + (1.0 - c.beta2) * grads.cwiseAbs2();

    const double t = static_cast<double>(state.step_count);
    const double m_correction = 1.0 - std::pow(c.beta1, t);
    const double v_correction = 1.0 - std::pow(c.beta2, t);
    params.array() -= c.learning_rate * (state.first_moments.array() / m_correction) /
                      ((state.second_moments.array() / v_correction).sqrt() + c.epsilon);
}

}  // namespace gridsel::ml
