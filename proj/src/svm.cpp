#include "gridsel/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace gridsel::ml {

LinearSvm svm_train(const Dataset& data, double lambda, int epochs, std::uint64_t seed,
                    const SvmEpochCallback& on_epoch) {
    if (data.size() == 0) throw std::invalid_argument("svm_train: empty dataset");
    if (!(lambda > 0)) throw std::invalid_argument("svm_train: lambda must be positive");
    if (epochs < 1) throw std::invalid_argument("svm_train: epochs must be >= 1");
    bool has_pos = false;
    bool has_neg = false;
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        if (data.y(i) != 0.0 && data.y(i) != 1.0) throw std::invalid_argument("svm_train: labels must be 0 or 1");
        (data.y(i) == 1.0 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) throw SingleClassError("svm_train: dataset contains a single class");

    LinearSvm m;
    m.weights = VectorXd::Zero(data.width());
    m.regularization = lambda;

    std::mt19937_64 rng(seed);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(data.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    long t = 0;
    for (int e = 0; e < epochs; ++e) {
        std::shuffle(order.begin(), order.end(), rng);
        for (const auto i : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double y = data.y(i) == 1.0 ? 1.0 : -1.0;
            const double margin = y * (m.weights.dot(data.x.row(i)) + m.bias);
            // The bias is an augmented constant feature and shrinks with w.
            m.weights *= 1.0 - eta * lambda;
            m.bias *= 1.0 - eta * lambda;
            if (margin < 1.0) {
                m.weights += eta * y * data.x.row(i).transpose();
                m.bias += eta * y;
            }
        }
        if (on_epoch) on_epoch(e + 1, m);
    }
    if (!m.weights.allFinite() || !std::isfinite(m.bias)) throw std::runtime_error("svm_train: diverged");
    return m;
}

double svm_objective(const LinearSvm& model, const Dataset& data) {
    if (data.size() == 0) throw std::invalid_argument("svm_objective: empty dataset");
    double hinge = 0.0;
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        const double y = data.y(i) == 1.0 ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - y * (model.weights.dot(data.x.row(i)) + model.bias));
    }
    const double norm = model.weights.squaredNorm() + model.bias * model.bias;
    return 0.5 * model.regularization * norm + hinge / static_cast<double>(data.size());
}

double svm_decision(const LinearSvm& model, const VectorXd& x) {
    if (x.size() != model.weights.size()) throw std::invalid_argument("svm: width mismatch");
    return model.weights.dot(x) + model.bias;
}

int svm_predict(const LinearSvm& model, const VectorXd& x) {
    return svm_decision(model, x) >= 0.0 ? 1 : 0;
}

std::vector<int> svm_predict_rows(const LinearSvm& model, const MatrixXd& x) {
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) out[static_cast<std::size_t>(i)] = svm_predict(model, x.row(i).transpose());
    return out;
}

}  // namespace gridsel::ml
