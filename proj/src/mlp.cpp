#include "gridsel/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace gridsel::ml {

namespace {

void check_dims(const std::vector<int>& dims) {
    if (dims.size() < 2) throw std::invalid_argument("Mlp: need at least an input and an output layer");
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("Mlp: layer widths must be positive");
    }
}

}  // namespace

Mlp::Mlp(std::vector<int> dims) : layer_dims(std::move(dims)) {
    check_dims(layer_dims);
    for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
        weights.push_back(MatrixXd::Zero(layer_dims[l + 1], layer_dims[l]));
        biases.push_back(VectorXd::Zero(layer_dims[l + 1]));
    }
}

Mlp Mlp::glorot(std::vector<int> dims, std::uint64_t seed) {
    Mlp m(std::move(dims));
    std::mt19937_64 rng(seed);
    for (auto& w : m.weights) {
        const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
        std::uniform_real_distribution<double> dist(-limit, limit);
        // Row-major fill so the draw order matches the flat parameter layout.
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
        }
    }
    return m;
}

Eigen::Index Mlp::parameter_count() const {
    Eigen::Index n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
}

bool Mlp::all_finite() const {
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (!weights[l].allFinite() || !biases[l].allFinite()) return false;
    }
    return true;
}

VectorXd Mlp::flat_parameters() const {
    VectorXd flat(parameter_count());
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const auto& w = weights[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) flat(k++) = w(r, c);
        }
        flat.segment(k, biases[l].size()) = biases[l];
        k += biases[l].size();
    }
    return flat;
}

void Mlp::set_flat_parameters(const VectorXd& flat) {
    if (flat.size() != parameter_count()) throw std::invalid_argument("Mlp: flat parameter size mismatch");
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        auto& w = weights[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = flat(k++);
        }
        biases[l] = flat.segment(k, biases[l].size());
        k += biases[l].size();
    }
}

VectorXd Gradients::flat() const {
    Eigen::Index n = 0;
    for (std::size_t l = 0; l < d_weights.size(); ++l) n += d_weights[l].size() + d_biases[l].size();
    VectorXd out(n);
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < d_weights.size(); ++l) {
        const auto& w = d_weights[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) out(k++) = w(r, c);
        }
        out.segment(k, d_biases[l].size()) = d_biases[l];
        k += d_biases[l].size();
    }
    return out;
}

VectorXd relu(const VectorXd& x) {
    return x.cwiseMax(0.0);
}

MatrixXd forward(const Mlp& model, const MatrixXd& x, ForwardCache* cache) {
    if (x.rows() != model.input_dim()) {
        throw std::invalid_argument("forward: expected " + std::to_string(model.input_dim()) + " features, got " +
                                    std::to_string(x.rows()));
    }
    if (cache) {
        cache->inputs.clear();
        cache->pre_activations.clear();
    }
    MatrixXd a = x;
    for (std::size_t l = 0; l < model.layer_count(); ++l) {
        MatrixXd z = model.weights[l] * a;
        z.colwise() += model.biases[l];
        if (cache) {
            cache->inputs.push_back(a);
            cache->pre_activations.push_back(z);
        }
        const bool hidden = l + 1 < model.layer_count();
        a = hidden ? MatrixXd(z.cwiseMax(0.0)) : z;
    }
    return a;
}

VectorXd forward(const Mlp& model, const VectorXd& x) {
    return forward(model, MatrixXd(x), nullptr).col(0);
}

Gradients backward(const Mlp& model, const ForwardCache& cache, const MatrixXd& upstream) {
    const auto layers = model.layer_count();
    if (cache.inputs.size() != layers || cache.pre_activations.size() != layers) {
        throw std::invalid_argument("backward: cache does not match the model");
    }
    if (upstream.rows() != model.output_dim() || upstream.cols() != cache.inputs.front().cols()) {
        throw std::invalid_argument("backward: upstream gradient shape mismatch");
    }
    Gradients g;
    g.d_weights.resize(layers);
    g.d_biases.resize(layers);

    MatrixXd delta = upstream;  // dLoss/dz for the current layer
    for (std::size_t i = layers; i-- > 0;) {
        g.d_weights[i] = delta * cache.inputs[i].transpose();
        g.d_biases[i] = delta.rowwise().sum();
        if (i == 0) break;
        MatrixXd da = model.weights[i].transpose() * delta;
        const auto& z_prev = cache.pre_activations[i - 1];
        delta = da.cwiseProduct((z_prev.array() > 0.0).cast<double>().matrix());
    }
    return g;
}

VectorXd softmax(const VectorXd& logits) {
    const VectorXd shifted = logits.array() - logits.maxCoeff();
    const VectorXd e = shifted.array().exp();
    return e / e.sum();
}

LossAndGrad softmax_cross_entropy(const VectorXd& logits, int label) {
    if (label < 0 || label >= logits.size()) throw std::invalid_argument("softmax_cross_entropy: label out of range");
    const double m = logits.maxCoeff();
    const VectorXd shifted = logits.array() - m;
    const double log_sum = std::log(shifted.array().exp().sum());
    LossAndGrad out;
    out.loss = log_sum - shifted(label);
    out.grad = (shifted.array() - log_sum).exp();
    out.grad(label) -= 1.0;
    return out;
}

ScalarLoss squared_error(double output, double target) {
    const double diff = output - target;
    return {diff * diff, 2.0 * diff};
}

}  // namespace gridsel::ml
