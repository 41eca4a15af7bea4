#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gridsel/model_io.hpp"
#include "gridsel/scenario.hpp"

namespace gridsel {

enum class ClassifierKind { Svm, Nn };
enum class SolarVariant { Actual, Predicted };

std::string to_string(ClassifierKind kind);
std::string to_string(SolarVariant variant);

struct ConfusionCounts {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t true_negative = 0;
    std::size_t false_negative = 0;

    std::size_t total() const { return true_positive + false_positive + true_negative + false_negative; }
    double precision() const;  // congested class; 0 when nothing was predicted congested
    double recall() const;
};

/// Counts with label 1 as the positive (congested) class.
ConfusionCounts confusion(const std::vector<int>& predicted, const ml::VectorXd& labels);

struct ClassifierReport {
    ClassifierKind kind = ClassifierKind::Nn;
    SolarVariant variant = SolarVariant::Actual;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    ConfusionCounts test_confusion;
    int steps = 0;  // optimizer steps (NN) or epochs (SVM)
    std::uint64_t seed = 0;
    ml::TrainingCurve curve;  // step,train_loss,train_acc,test_acc

    /// key=value lines.
    std::string to_text() const;
};

struct ClassifierOptions {
    SolarVariant variant = SolarVariant::Actual;
    Eigen::Index train_count = 650;
    int nn_steps = 500;
    int batch_size = 32;
    double learning_rate = 1e-3;
    double svm_lambda = 1e-3;
    int svm_epochs = 20;
    std::uint64_t seed = 0;
};

struct TrainedClassifier {
    ml::ModelFile model;
    ClassifierReport report;
};

inline const std::vector<int> kCongestionNnLayers = {static_cast<int>(kFeatureWidth), 100, 2};

/// Design matrix from generated rows: 23 features, label in y.
ml::Dataset congestion_dataset(const std::vector<CongestionRow>& rows);

/// [23, 100, 2] ReLU network, softmax cross-entropy, Adam. The first
/// `train_count` rows of a seeded shuffle train; the remainder test.
TrainedClassifier train_congestion_nn(const ml::Dataset& data, const ClassifierOptions& options);

/// Linear SVM on the same split as train_congestion_nn for equal options.
TrainedClassifier train_congestion_svm(const ml::Dataset& data, const ClassifierOptions& options);

/// Predicts 0/1 labels from either kind of model file.
std::vector<int> classify(const ml::ModelFile& model, const ml::MatrixXd& raw_features);

/// Report of a stored classifier over every row of `data`.
ClassifierReport evaluate_classifier(const ml::ModelFile& model, const ml::Dataset& data);

struct PredictedVariantOptions {
    Eigen::Index subsample = 750;
    ClassifierOptions classifier{SolarVariant::Predicted, 650, 800};
};

/// Regenerates the congestion dataset over `days`, replaces the actual solar
/// features with historical-average forecasts, subsamples and trains both
/// classifiers. Needs at least two days of solar history before days.first.
std::pair<ClassifierReport, ClassifierReport> eval_predicted_variant(const Network& net,
                                                                     const std::vector<SolarProfile>& profiles,
                                                                     const std::vector<LoadLevel>& levels,
                                                                     DayRange days,
                                                                     const PredictedVariantOptions& options,
                                                                     const BatchOptions& batch = {});

}  // namespace gridsel
