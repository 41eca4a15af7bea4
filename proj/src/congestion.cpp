#include "gridsel/congestion.hpp"

#include <sstream>
#include <stdexcept>

#include "gridsel/text.hpp"

namespace gridsel {

using ml::Dataset;
using ml::MatrixXd;
using ml::VectorXd;

std::string to_string(ClassifierKind kind) {
    return kind == ClassifierKind::Svm ? "SVM" : "NN";
}

std::string to_string(SolarVariant variant) {
    return variant == SolarVariant::Actual ? "actual-solar" : "predicted-solar";
}

double ConfusionCounts::precision() const {
    const auto predicted = true_positive + false_positive;
    return predicted == 0 ? 0.0 : static_cast<double>(true_positive) / static_cast<double>(predicted);
}

double ConfusionCounts::recall() const {
    const auto actual = true_positive + false_negative;
    return actual == 0 ? 0.0 : static_cast<double>(true_positive) / static_cast<double>(actual);
}

ConfusionCounts confusion(const std::vector<int>& predicted, const VectorXd& labels) {
    if (predicted.size() != static_cast<std::size_t>(labels.size())) {
        throw std::invalid_argument("confusion: size mismatch");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool truth = labels(static_cast<Eigen::Index>(i)) == 1.0;
        const bool guess = predicted[i] == 1;
        if (guess && truth) ++c.true_positive;
        else if (guess) ++c.false_positive;
        else if (truth) ++c.false_negative;
        else ++c.true_negative;
    }
    return c;
}

std::string ClassifierReport::to_text() const {
    std::ostringstream out;
    out << "kind=" << to_string(kind) << '\n'
        << "variant=" << to_string(variant) << '\n'
        << "train_size=" << train_size << '\n'
        << "test_size=" << test_size << '\n'
        << "train_accuracy=" << text::format_double(train_accuracy) << '\n'
        << "test_accuracy=" << text::format_double(test_accuracy) << '\n'
        << "test_precision=" << text::format_double(test_confusion.precision()) << '\n'
        << "test_recall=" << text::format_double(test_confusion.recall()) << '\n'
        << "test_tp=" << test_confusion.true_positive << '\n'
        << "test_fp=" << test_confusion.false_positive << '\n'
        << "test_tn=" << test_confusion.true_negative << '\n'
        << "test_fn=" << test_confusion.false_negative << '\n'
        << "steps=" << steps << '\n'
        << "seed=" << seed << '\n';
    return out.str();
}

Dataset congestion_dataset(const std::vector<CongestionRow>& rows) {
    Dataset d;
    d.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kFeatureWidth));
    d.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].features.size() != kFeatureWidth) throw std::invalid_argument("congestion row has the wrong width");
        for (std::size_t c = 0; c < kFeatureWidth; ++c) {
            d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i].features[c];
        }
        d.y(static_cast<Eigen::Index>(i)) = rows[i].label;
    }
    return d;
}

namespace {

void require_width(const Dataset& data) {
    if (data.width() != static_cast<Eigen::Index>(kFeatureWidth)) {
        throw std::invalid_argument("congestion dataset must have " + std::to_string(kFeatureWidth) +
                                    " features, got " + std::to_string(data.width()));
    }
}

struct PreparedSplit {
    ml::Standardizer standardizer;
    Dataset train;  // standardized
    Dataset test;   // standardized
};

PreparedSplit prepare(const Dataset& data, const ClassifierOptions& options) {
    require_width(data);
    auto split = ml::split_dataset(data, options.train_count, options.seed);
    PreparedSplit p;
    p.standardizer = ml::Standardizer::fit(split.train.x);
    p.train = {p.standardizer.transform(split.train.x), std::move(split.train.y)};
    p.test = {p.standardizer.transform(split.test.x), std::move(split.test.y)};
    return p;
}

void finish_report(ClassifierReport& r, const std::vector<int>& train_pred, const std::vector<int>& test_pred,
                   const PreparedSplit& s) {
    r.train_size = static_cast<std::size_t>(s.train.size());
    r.test_size = static_cast<std::size_t>(s.test.size());
    r.train_accuracy = ml::accuracy(train_pred, s.train.y);
    r.test_accuracy = ml::accuracy(test_pred, s.test.y);
    r.test_confusion = confusion(test_pred, s.test.y);
}

}  // namespace

TrainedClassifier train_congestion_nn(const Dataset& data, const ClassifierOptions& options) {
    const auto s = prepare(data, options);

    ml::Mlp net = ml::Mlp::glorot(kCongestionNnLayers, options.seed);
    ml::TrainConfig cfg;
    cfg.adam.learning_rate = options.learning_rate;
    cfg.steps = options.nn_steps;
    cfg.batch_size = options.batch_size;
    cfg.seed = options.seed;

    auto evaluator = [&s](const ml::Mlp& m) {
        return std::vector<double>{ml::accuracy(ml::predict_classes(m, s.train.x), s.train.y),
                                   ml::accuracy(ml::predict_classes(m, s.test.x), s.test.y)};
    };

    TrainedClassifier out;
    out.report.kind = ClassifierKind::Nn;
    out.report.variant = options.variant;
    out.report.steps = options.nn_steps;
    out.report.seed = options.seed;
    out.report.curve = ml::train(net, s.train, ml::LossKind::CrossEntropy, cfg, evaluator, {"train_acc", "test_acc"});
    finish_report(out.report, ml::predict_classes(net, s.train.x), ml::predict_classes(net, s.test.x), s);
    out.model = {ml::LossKind::CrossEntropy, std::move(net), s.standardizer};
    return out;
}

TrainedClassifier train_congestion_svm(const Dataset& data, const ClassifierOptions& options) {
    const auto s = prepare(data, options);

    TrainedClassifier out;
    out.report.kind = ClassifierKind::Svm;
    out.report.variant = options.variant;
    out.report.steps = options.svm_epochs;
    out.report.seed = options.seed;
    out.report.curve.metric_names = {"train_acc", "test_acc"};

    auto on_epoch = [&](int epoch, const ml::LinearSvm& m) {
        ml::CurvePoint p;
        p.step = epoch;
        p.train_loss = ml::svm_objective(m, s.train);
        p.metrics = {ml::accuracy(ml::svm_predict_rows(m, s.train.x), s.train.y),
                     ml::accuracy(ml::svm_predict_rows(m, s.test.x), s.test.y)};
        out.report.curve.points.push_back(std::move(p));
    };
    const auto svm = ml::svm_train(s.train, options.svm_lambda, options.svm_epochs, options.seed, on_epoch);
    finish_report(out.report, ml::svm_predict_rows(svm, s.train.x), ml::svm_predict_rows(svm, s.test.x), s);
    out.model = ml::svm_model_file(svm, s.standardizer);
    return out;
}

std::vector<int> classify(const ml::ModelFile& model, const MatrixXd& raw_features) {
    const MatrixXd z = model.standardizer.transform(raw_features);
    switch (model.loss) {
        case ml::LossKind::Hinge:
            return ml::svm_predict_rows(ml::svm_from_model_file(model), z);
        case ml::LossKind::CrossEntropy:
            if (model.network.output_dim() != 2) break;
            return ml::predict_classes(model.network, z);
        case ml::LossKind::SquaredError:
            break;
    }
    throw ml::ModelFormatError("model file does not hold a congestion classifier");
}

ClassifierReport evaluate_classifier(const ml::ModelFile& model, const Dataset& data) {
    require_width(data);
    if (data.size() == 0) throw std::invalid_argument("evaluate_classifier: empty dataset");
    const auto predicted = classify(model, data.x);
    ClassifierReport r;
    r.kind = model.loss == ml::LossKind::Hinge ? ClassifierKind::Svm : ClassifierKind::Nn;
    r.test_size = static_cast<std::size_t>(data.size());
    r.test_accuracy = ml::accuracy(predicted, data.y);
    r.test_confusion = confusion(predicted, data.y);
    return r;
}

std::pair<ClassifierReport, ClassifierReport> eval_predicted_variant(const Network& net,
                                                                     const std::vector<SolarProfile>& profiles,
                                                                     const std::vector<LoadLevel>& levels,
                                                                     DayRange days,
                                                                     const PredictedVariantOptions& options,
                                                                     const BatchOptions& batch) {
    if (days.first < 2) throw std::invalid_argument("eval_predicted_variant: needs two days of solar history");
    const auto predicted = predicted_profiles(profiles, days.first);
    auto rows = gen_congestion_dataset(net, profiles, levels, days, batch).rows;
    rows = with_predicted_solar(std::move(rows), predicted);
    const auto data = ml::subsample(congestion_dataset(rows), options.subsample, options.classifier.seed);

    auto cls = options.classifier;
    cls.variant = SolarVariant::Predicted;
    return {train_congestion_nn(data, cls).report, train_congestion_svm(data, cls).report};
}

}  // namespace gridsel
