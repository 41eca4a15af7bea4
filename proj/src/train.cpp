#include "gridsel/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "gridsel/text.hpp"

namespace gridsel::ml {

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const {
    Dataset out;
    out.x.resize(static_cast<Eigen::Index>(rows.size()), x.cols());
    out.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.x.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
        out.y(static_cast<Eigen::Index>(i)) = y(rows[i]);
    }
    return out;
}

Dataset parse_dataset_csv(const std::string& content, const std::string& expected_header) {
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t columns = 0;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty()) continue;
        if (!header_seen) {
            if (trimmed != expected_header) {
                throw std::runtime_error("dataset csv line " + std::to_string(line_no) + ": unexpected header");
            }
            columns = text::split(trimmed, ',').size();
            header_seen = true;
            continue;
        }
        const auto fields = text::split(trimmed, ',');
        if (fields.size() != columns) {
            throw std::runtime_error("dataset csv line " + std::to_string(line_no) + ": wrong number of fields");
        }
        for (const auto f : fields) {
            const auto v = text::parse_double(f);
            if (!v) throw std::runtime_error("dataset csv line " + std::to_string(line_no) + ": bad number");
            values.push_back(*v);
        }
    }
    if (!header_seen) throw std::runtime_error("dataset csv: missing header");

    const auto rows = static_cast<Eigen::Index>(values.size() / columns);
    const auto width = static_cast<Eigen::Index>(columns - 1);
    Dataset d;
    d.x.resize(rows, width);
    d.y.resize(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < width; ++c) d.x(r, c) = values[static_cast<std::size_t>(r * (width + 1) + c)];
        d.y(r) = values[static_cast<std::size_t>(r * (width + 1) + width)];
    }
    return d;
}

Standardizer Standardizer::fit(const MatrixXd& x) {
    if (x.rows() == 0) throw std::invalid_argument("Standardizer::fit: empty matrix");
    Standardizer s;
    s.mean = x.colwise().mean().transpose();
    s.scale.resize(x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const double var = (x.col(c).array() - s.mean(c)).square().mean();
        const double sd = std::sqrt(var);
        s.scale(c) = sd > 1e-12 ? sd : 1.0;
    }
    return s;
}

Standardizer Standardizer::identity(Eigen::Index width) {
    return {VectorXd::Zero(width), VectorXd::Ones(width)};
}

MatrixXd Standardizer::transform(const MatrixXd& x) const {
    if (x.cols() != mean.size()) throw std::invalid_argument("Standardizer: width mismatch");
    return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

MatrixXd Standardizer::inverse(const MatrixXd& z) const {
    if (z.cols() != mean.size()) throw std::invalid_argument("Standardizer: width mismatch");
    MatrixXd x = z.array().rowwise() * scale.transpose().array();
    return x.rowwise() + mean.transpose();
}

VectorXd Standardizer::transform(const VectorXd& x) const {
    if (x.size() != mean.size()) throw std::invalid_argument("Standardizer: width mismatch");
    return (x - mean).cwiseQuotient(scale);
}

std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, std::uint64_t seed) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    return idx;
}

Dataset subsample(const Dataset& data, Eigen::Index n, std::uint64_t seed) {
    if (n >= data.size()) return data;
    auto idx = shuffled_indices(data.size(), seed);
    idx.resize(static_cast<std::size_t>(n));
    std::sort(idx.begin(), idx.end());
    return data.subset(idx);
}

Split split_dataset(const Dataset& data, Eigen::Index train_count, std::uint64_t seed) {
    if (train_count <= 0 || train_count >= data.size()) {
        throw std::invalid_argument("split_dataset: train count must leave a nonempty test split");
    }
    const auto idx = shuffled_indices(data.size(), seed);
    const std::vector<Eigen::Index> train(idx.begin(), idx.begin() + train_count);
    const std::vector<Eigen::Index> test(idx.begin() + train_count, idx.end());
    return {data.subset(train), data.subset(test)};
}

std::string TrainingCurve::to_csv() const {
    std::ostringstream out;
    out << "step,train_loss";
    for (const auto& n : metric_names) out << ',' << n;
    out << '\n';
    for (const auto& p : points) {
        out << p.step << ',' << text::format_double(p.train_loss);
        for (double m : p.metrics) out << ',' << text::format_double(m);
        out << '\n';
    }
    return out.str();
}

TrainingCurve train(Mlp& model, const Dataset& data, LossKind loss, const TrainConfig& cfg, const Evaluator& evaluator,
                    std::vector<std::string> metric_names) {
    if (data.size() == 0) throw std::invalid_argument("train: empty dataset");
    if (data.width() != model.input_dim()) throw std::invalid_argument("train: dataset width does not match the model");
    if (cfg.batch_size < 1 || cfg.steps < 0) throw std::invalid_argument("train: bad batch size or step count");
    if (loss == LossKind::Hinge) throw std::invalid_argument("train: hinge loss is only used by the linear SVM");
    if (loss == LossKind::CrossEntropy) {
        for (Eigen::Index i = 0; i < data.size(); ++i) {
            const double label = data.y(i);
            if (label != std::floor(label) || label < 0 || label >= model.output_dim()) {
                throw std::invalid_argument("train: class label out of range");
            }
        }
    } else if (model.output_dim() != 1) {
        throw std::invalid_argument("train: squared error needs a single output");
    }

    TrainingCurve curve;
    curve.metric_names = std::move(metric_names);

    AdamState adam(cfg.adam);
    VectorXd params = model.flat_parameters();
    std::mt19937_64 rng(cfg.seed);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(data.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t cursor = 0;

    const auto batch = static_cast<Eigen::Index>(std::min<Eigen::Index>(cfg.batch_size, data.size()));
    MatrixXd xb(data.width(), batch);
    VectorXd yb(batch);
    ForwardCache cache;

    for (int step = 1; step <= cfg.steps; ++step) {
        for (Eigen::Index j = 0; j < batch; ++j) {
            if (cursor == order.size()) {
                std::shuffle(order.begin(), order.end(), rng);
                cursor = 0;
            }
            const auto row = order[cursor++];
            xb.col(j) = data.x.row(row).transpose();
            yb(j) = data.y(row);
        }

        const MatrixXd out = forward(model, xb, &cache);
        MatrixXd upstream(out.rows(), batch);
        double total = 0.0;
        for (Eigen::Index j = 0; j < batch; ++j) {
            if (loss == LossKind::CrossEntropy) {
                const auto lg = softmax_cross_entropy(out.col(j), static_cast<int>(yb(j)));
                total += lg.loss;
                upstream.col(j) = lg.grad;
            } else {
                const auto se = squared_error(out(0, j), yb(j));
                total += se.loss;
                upstream(0, j) = se.grad;
            }
        }
        upstream /= static_cast<double>(batch);

        const Gradients g = backward(model, cache, upstream);
        adam_step(adam, params, g.flat());
        model.set_flat_parameters(params);
        if (!model.all_finite()) throw std::runtime_error("train: non-finite parameter at step " + std::to_string(step));

        CurvePoint p;
        p.step = step;
        p.train_loss = total / static_cast<double>(batch);
        if (evaluator) p.metrics = evaluator(model);
        curve.points.push_back(std::move(p));
    }
    return curve;
}

MatrixXd predict_rows_serial(const Mlp& model, const MatrixXd& x) {
    MatrixXd out(x.rows(), model.output_dim());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        out.row(i) = forward(model, VectorXd(x.row(i).transpose())).transpose();
    }
    return out;
}

MatrixXd predict_rows_omp(const Mlp& model, const MatrixXd& x, int jobs) {
    if (x.cols() != model.input_dim()) throw std::invalid_argument("predict_rows: width mismatch");
    MatrixXd out(x.rows(), model.output_dim());
    const auto n = static_cast<long>(x.rows());
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long i = 0; i < n; ++i) {
        out.row(i) = forward(model, VectorXd(x.row(i).transpose())).transpose();
    }
    return out;
}

std::vector<int> predict_classes(const Mlp& model, const MatrixXd& x) {
    const MatrixXd out = predict_rows_serial(model, x);
    std::vector<int> cls(static_cast<std::size_t>(out.rows()));
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        Eigen::Index arg = 0;
        out.row(i).maxCoeff(&arg);
        cls[static_cast<std::size_t>(i)] = static_cast<int>(arg);
    }
    return cls;
}

double accuracy(const std::vector<int>& predicted, const VectorXd& labels) {
    if (predicted.size() != static_cast<std::size_t>(labels.size()) || predicted.empty()) {
        throw std::invalid_argument("accuracy: size mismatch or empty");
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        correct += predicted[i] == static_cast<int>(labels(static_cast<Eigen::Index>(i))) ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

double mean_squared_error(const VectorXd& predicted, const VectorXd& target) {
    if (predicted.size() != target.size() || predicted.size() == 0) {
        throw std::invalid_argument("mean_squared_error: size mismatch or empty");
    }
    return (predicted - target).squaredNorm() / static_cast<double>(predicted.size());
}

}  // namespace gridsel::ml
