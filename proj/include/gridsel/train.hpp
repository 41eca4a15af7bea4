#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gridsel/adam.hpp"
#include "gridsel/mlp.hpp"

namespace gridsel::ml {

/// Row-per-sample design matrix with a scalar label/target column.
struct Dataset {
    MatrixXd x;  // rows x features
    VectorXd y;

    Eigen::Index size() const { return x.rows(); }
    Eigen::Index width() const { return x.cols(); }
    Dataset subset(const std::vector<Eigen::Index>& rows) const;
};

/// Parses a numeric CSV whose header must equal `expected_header`; the last
/// column becomes y. Throws std::runtime_error naming the line on failure.
Dataset parse_dataset_csv(const std::string& content, const std::string& expected_header);

/// Zero-mean unit-variance per feature; zero-variance features get unit scale.
struct Standardizer {
    VectorXd mean;
    VectorXd scale;

    static Standardizer fit(const MatrixXd& x);
    static Standardizer identity(Eigen::Index width);
    MatrixXd transform(const MatrixXd& x) const;
    MatrixXd inverse(const MatrixXd& z) const;
    VectorXd transform(const VectorXd& x) const;
};

/// Seeded uniform permutation of 0..n-1.
std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, std::uint64_t seed);

/// Seeded subsample without replacement; returns the dataset unchanged when n >= size.
Dataset subsample(const Dataset& data, Eigen::Index n, std::uint64_t seed);

struct Split {
    Dataset train;
    Dataset test;
};

/// Shuffle, then the first `train_count` rows train and the rest test.
Split split_dataset(const Dataset& data, Eigen::Index train_count, std::uint64_t seed);

enum class LossKind { CrossEntropy = 0, SquaredError = 1, Hinge = 2 };

struct TrainConfig {
    AdamConfig adam;
    int steps = 500;
    int batch_size = 32;
    std::uint64_t seed = 0;
};

struct CurvePoint {
    int step = 0;
    double train_loss = 0.0;  // mean loss over the step's mini-batch
    std::vector<double> metrics;
};

struct TrainingCurve {
    std::vector<std::string> metric_names;
    std::vector<CurvePoint> points;

    /// `step,train_loss,<metric names...>` followed by one row per step.
    std::string to_csv() const;
};

/// Called after every optimizer step with the current model.
using Evaluator = std::function<std::vector<double>(const Mlp&)>;

/// Mini-batch Adam on standardized inputs. Each epoch reshuffles with a
/// generator seeded from cfg.seed. Throws std::invalid_argument on an empty
/// dataset or width mismatch, std::runtime_error if a parameter stops being finite.
TrainingCurve train(Mlp& model, const Dataset& data, LossKind loss, const TrainConfig& cfg,
                    const Evaluator& evaluator = {}, std::vector<std::string> metric_names = {});

/// Per-row model outputs (rows x output_dim). Reference and OpenMP kernels.
MatrixXd predict_rows_serial(const Mlp& model, const MatrixXd& x);
MatrixXd predict_rows_omp(const Mlp& model, const MatrixXd& x, int jobs = 0);

/// argmax per row.
std::vector<int> predict_classes(const Mlp& model, const MatrixXd& x);
double accuracy(const std::vector<int>& predicted, const VectorXd& labels);
double mean_squared_error(const VectorXd& predicted, const VectorXd& target);

}  // namespace gridsel::ml
