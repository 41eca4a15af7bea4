#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>

#include "gridsel/train.hpp"

namespace gridsel::ml {

struct LinearSvm {
    VectorXd weights;
    double bias = 0.0;
    double regularization = 1e-3;  // lambda
};

class SingleClassError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Called after each epoch with the 1-based epoch number.
using SvmEpochCallback = std::function<void(int, const LinearSvm&)>;

/// Primal hinge-loss minimization by stochastic subgradient descent with
/// step 1/(lambda t) (Pegasos), reshuffling every epoch. Labels are 0/1.
/// The bias is treated as a weight on a constant feature and is regularized with w.
/// Throws SingleClassError if only one label occurs.
LinearSvm svm_train(const Dataset& data, double lambda, int epochs, std::uint64_t seed,
                    const SvmEpochCallback& on_epoch = {});

/// Regularized primal objective: lambda/2 (|w|^2 + b^2) + mean hinge loss.
double svm_objective(const LinearSvm& model, const Dataset& data);

double svm_decision(const LinearSvm& model, const VectorXd& x);

/// 1 if w.x + b >= 0, else 0.
int svm_predict(const LinearSvm& model, const VectorXd& x);

std::vector<int> svm_predict_rows(const LinearSvm& model, const MatrixXd& x);

}  // namespace gridsel::ml
