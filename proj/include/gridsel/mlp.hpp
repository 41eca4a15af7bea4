#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace gridsel::ml {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Dense feed-forward network: ReLU on hidden layers, identity on the output.
/// weights[l] is (layer_dims[l+1] x layer_dims[l]).
struct Mlp {
    std::vector<int> layer_dims;
    std::vector<MatrixXd> weights;
    std::vector<VectorXd> biases;

    Mlp() = default;
    /// All-zero parameters.
    explicit Mlp(std::vector<int> dims);

    /// Uniform in +-sqrt(6 / (fan_in + fan_out)), zero biases.
    static Mlp glorot(std::vector<int> dims, std::uint64_t seed);

    int input_dim() const { return layer_dims.front(); }
    int output_dim() const { return layer_dims.back(); }
    std::size_t layer_count() const { return weights.size(); }
    Eigen::Index parameter_count() const;
    bool all_finite() const;

    /// Layer order, each weight matrix row-major followed by its bias.
    VectorXd flat_parameters() const;
    void set_flat_parameters(const VectorXd& flat);
};

struct ForwardCache {
    std::vector<MatrixXd> inputs;  // input to each layer (features x batch)
    std::vector<MatrixXd> pre_activations;
};

struct Gradients {
    std::vector<MatrixXd> d_weights;
    std::vector<VectorXd> d_biases;

    VectorXd flat() const;
};

VectorXd relu(const VectorXd& x);

/// Batched forward pass; columns of `x` are samples. Throws std::invalid_argument on a width mismatch.
MatrixXd forward(const Mlp& model, const MatrixXd& x, ForwardCache* cache = nullptr);
VectorXd forward(const Mlp& model, const VectorXd& x);

/// Parameter gradients of sum_j upstream(:, j) . output(:, j), i.e. the
/// batch-summed chain rule. Scale `upstream` by 1/batch for a mean loss.
Gradients backward(const Mlp& model, const ForwardCache& cache, const MatrixXd& upstream);

struct LossAndGrad {
    double loss = 0.0;
    VectorXd grad;
};

VectorXd softmax(const VectorXd& logits);

/// -log softmax(logits)[label] with max subtraction; grad = softmax - onehot.
LossAndGrad softmax_cross_entropy(const VectorXd& logits, int label);

struct ScalarLoss {
    double loss = 0.0;
    double grad = 0.0;
};

ScalarLoss squared_error(double output, double target);

}  // namespace gridsel::ml
