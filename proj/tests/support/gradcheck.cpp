#include "support/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gridsel/mlp.hpp"

namespace oracle {

using namespace gridsel::ml;

Mlp random_model(const std::vector<int>& dims, std::uint64_t seed) {
    Mlp m = Mlp::glorot(dims, seed);
    std::mt19937_64 rng(seed + 1000);
    std::normal_distribution<double> n(0.0, 0.3);
    for (auto& b : m.biases) {
        for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = n(rng);
    }
    return m;
}

VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> d(0.0, 1.0);
    VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = d(rng);
    return v;
}

namespace {

// Loss used for the finite-difference check: cross-entropy for two outputs,
// squared error against a fixed target for one.
double loss_of(const Mlp& m, const VectorXd& x, int label, double target) {
    const VectorXd out = forward(m, x);
    return out.size() == 2 ? softmax_cross_entropy(out, label).loss : squared_error(out(0), target).loss;
}

constexpr double kKinkMargin = 1e-3;

double min_hidden_margin(const ForwardCache& cache) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l + 1 < cache.pre_activations.size(); ++l) {
        m = std::min(m, cache.pre_activations[l].cwiseAbs().minCoeff());
    }
    return m;
}

}  // namespace

double max_relative_grad_error(const std::vector<int>& dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Mlp m = random_model(dims, seed);
    MatrixXd x(dims.front(), 1);
    ForwardCache cache;
    MatrixXd out;
    // A central difference across a ReLU kink is not a derivative, so inputs
    // are redrawn until every hidden pre-activation sits clear of zero.
    do {
        x.col(0) = random_vector(dims.front(), rng);
        out = forward(m, x, &cache);
    } while (min_hidden_margin(cache) < kKinkMargin);
    const int label = static_cast<int>(seed % 2);
    const double target = 3.0;

    MatrixXd upstream(out.rows(), 1);
    if (out.rows() == 2) upstream.col(0) = softmax_cross_entropy(out.col(0), label).grad;
    else upstream(0, 0) = squared_error(out(0, 0), target).grad;
    const VectorXd analytic = backward(m, cache, upstream).flat();

    VectorXd params = m.flat_parameters();
    const double h = 1e-5;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < params.size(); ++i) {
        const double keep = params(i);
        params(i) = keep + h;
        m.set_flat_parameters(params);
        const double up = loss_of(m, x.col(0), label, target);
        params(i) = keep - h;
        m.set_flat_parameters(params);
        const double down = loss_of(m, x.col(0), label, target);
        params(i) = keep;
        const double numeric = (up - down) / (2 * h);
        const double denom = std::max({std::abs(numeric), std::abs(analytic(i)), 1e-7});
        worst = std::max(worst, std::abs(numeric - analytic(i)) / denom);
    }
    m.set_flat_parameters(params);
    return worst;
}

}  // namespace oracle
