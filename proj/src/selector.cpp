#include "gridsel/selector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gridsel/text.hpp"

namespace gridsel {

using ml::Dataset;
using ml::MatrixXd;
using ml::VectorXd;

std::string RegressorReport::to_text() const {
    std::ostringstream out;
    out << "kind=penalty-regressor\n"
        << "train_size=" << train_size << '\n'
        << "test_size=" << test_size << '\n'
        << "train_mse=" << text::format_double(train_mse) << '\n'
        << "test_mse=" << text::format_double(test_mse) << '\n'
        << "baseline_test_mse=" << text::format_double(baseline_test_mse) << '\n'
        << "test_l1_proxy=" << text::format_double(test_l1_proxy) << '\n'
        << "test_l2_proxy=" << text::format_double(test_l2_proxy) << '\n'
        << "steps=" << steps << '\n'
        << "seed=" << seed << '\n';
    return out.str();
}

Dataset subset_dataset(const std::vector<SubsetRow>& rows) {
    Dataset d;
    d.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kFeatureWidth));
    d.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].features.size() != kFeatureWidth) throw std::invalid_argument("subset row has the wrong width");
        for (std::size_t c = 0; c < kFeatureWidth; ++c) {
            d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i].features[c];
        }
        d.y(static_cast<Eigen::Index>(i)) = rows[i].target;
    }
    return d;
}

std::pair<double, double> component_error_proxies(const VectorXd& predicted, const VectorXd& target,
                                                  double l2_congestion_penalty) {
    if (predicted.size() != target.size()) throw std::invalid_argument("component_error_proxies: size mismatch");
    double l1_sum = 0.0;
    double l2_sum = 0.0;
    Eigen::Index l1_n = 0;
    Eigen::Index l2_n = 0;
    for (Eigen::Index i = 0; i < target.size(); ++i) {
        const double err = std::abs(predicted(i) - target(i));
        if (target(i) >= l2_congestion_penalty) {
            l2_sum += err;
            ++l2_n;
        } else {
            l1_sum += err;
            ++l1_n;
        }
    }
    return {l1_n ? l1_sum / static_cast<double>(l1_n) : 0.0, l2_n ? l2_sum / static_cast<double>(l2_n) : 0.0};
}

TrainedRegressor train_penalty_regressor(const Dataset& data, const RegressorOptions& options) {
    if (data.width() != static_cast<Eigen::Index>(kFeatureWidth)) {
        throw std::invalid_argument("subset dataset must have " + std::to_string(kFeatureWidth) + " features, got " +
                                    std::to_string(data.width()));
    }
    auto split = ml::split_dataset(data, options.train_count, options.seed);
    const auto standardizer = ml::Standardizer::fit(split.train.x);
    const Dataset train{standardizer.transform(split.train.x), split.train.y};
    const Dataset test{standardizer.transform(split.test.x), split.test.y};

    ml::Mlp net = ml::Mlp::glorot(kPenaltyRegressorLayers, options.seed);
    ml::TrainConfig cfg;
    cfg.adam.learning_rate = options.learning_rate;
    cfg.steps = options.steps;
    cfg.batch_size = options.batch_size;
    cfg.seed = options.seed;

    const double penalty = options.l2_congestion_penalty;
    auto evaluator = [&test, penalty](const ml::Mlp& m) {
        const VectorXd pred = ml::predict_rows_serial(m, test.x).col(0);
        const auto [l1, l2] = component_error_proxies(pred, test.y, penalty);
        return std::vector<double>{l1, l2};
    };

    TrainedRegressor out;
    auto& r = out.report;
    r.curve = ml::train(net, train, ml::LossKind::SquaredError, cfg, evaluator, {"test_l1_proxy", "test_l2_proxy"});
    r.train_size = static_cast<std::size_t>(train.size());
    r.test_size = static_cast<std::size_t>(test.size());
    r.steps = options.steps;
    r.seed = options.seed;

    const VectorXd train_pred = ml::predict_rows_serial(net, train.x).col(0);
    const VectorXd test_pred = ml::predict_rows_serial(net, test.x).col(0);
    r.train_mse = ml::mean_squared_error(train_pred, train.y);
    r.test_mse = ml::mean_squared_error(test_pred, test.y);
    r.baseline_test_mse = ml::mean_squared_error(VectorXd::Constant(test.size(), train.y.mean()), test.y);
    std::tie(r.test_l1_proxy, r.test_l2_proxy) = component_error_proxies(test_pred, test.y, penalty);

    out.model = {ml::LossKind::SquaredError, std::move(net), standardizer};
    return out;
}

namespace {

void require_regressor(const ml::ModelFile& model) {
    if (model.loss != ml::LossKind::SquaredError || model.network.output_dim() != 1 ||
        model.network.input_dim() != static_cast<int>(kFeatureWidth)) {
        throw ml::ModelFormatError("model file does not hold a penalty regressor");
    }
}

}  // namespace

VectorXd predict_penalty(const ml::ModelFile& model, const MatrixXd& raw_features, int jobs) {
    require_regressor(model);
    const MatrixXd z = model.standardizer.transform(raw_features);
    const MatrixXd out = jobs == 1 ? ml::predict_rows_serial(model.network, z) : ml::predict_rows_omp(model.network, z, jobs);
    return out.col(0);
}

PenaltyScorer model_scorer(const ml::ModelFile& model) {
    require_regressor(model);
    return [&model](const std::vector<double>& features) {
        const VectorXd x = Eigen::Map<const VectorXd>(features.data(), static_cast<Eigen::Index>(features.size()));
        return ml::forward(model.network, model.standardizer.transform(x))(0);
    };
}

std::vector<SubsetEvaluation> score_candidates(const PenaltyScorer& scorer, const std::vector<double>& base_voltages,
                                               const std::array<double, kSolarUnits>& predicted_mw,
                                               const std::vector<SubsetChoice>& candidates) {
    if (base_voltages.size() != kVoltageFeatures) throw std::invalid_argument("base state must hold 20 voltages");
    std::vector<SubsetEvaluation> out;
    out.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        SubsetEvaluation e;
        e.choice = candidates[i];
        e.candidate_index = i;
        e.predicted_total = scorer(subset_features(base_voltages, candidates[i], predicted_mw));
        out.push_back(e);
    }
    return out;
}

SubsetEvaluation select_subset(const PenaltyScorer& scorer, const std::vector<double>& base_voltages,
                               const std::array<double, kSolarUnits>& predicted_mw,
                               const std::vector<SubsetChoice>& candidates) {
    if (candidates.empty()) throw std::invalid_argument("select_subset: no candidates");
    const auto scored = score_candidates(scorer, base_voltages, predicted_mw, candidates);
    return *std::min_element(scored.begin(), scored.end(), [](const SubsetEvaluation& a, const SubsetEvaluation& b) {
        if (a.predicted_total != b.predicted_total) return a.predicted_total < b.predicted_total;
        return tie_break_less(a, b);
    });
}

SubsetEvaluation select_subset(const ml::ModelFile& model, const std::vector<double>& base_voltages,
                               const std::array<double, kSolarUnits>& predicted_mw,
                               const std::vector<SubsetChoice>& candidates) {
    return select_subset(model_scorer(model), base_voltages, predicted_mw, candidates);
}

std::vector<SubsetEvaluation> oracle_select(const Network& net, double load_scale,
                                            const std::array<double, kSolarUnits>& actual_next,
                                            const std::array<double, kSolarUnits>& predicted_next,
                                            const std::vector<SubsetChoice>& candidates, const PenaltyConfig& cfg,
                                            const BatchOptions& batch) {
    std::vector<OperatingPoint> points;
    points.reserve(candidates.size());
    for (const auto& c : candidates) points.push_back(make_operating_point(net, load_scale, actual_next, c));
    const auto outcomes = solve_batch(points, batch);

    std::vector<SubsetEvaluation> ranked;
    ranked.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        ranked.push_back(score_candidate(outcomes[i], candidates[i], i, predicted_next, actual_next, cfg));
    }
    std::sort(ranked.begin(), ranked.end(), [](const SubsetEvaluation& a, const SubsetEvaluation& b) {
        if (a.total != b.total) return a.total < b.total;
        return tie_break_less(a, b);
    });
    return ranked;
}

ScenarioState scenario_state(const Network& net, const std::vector<SolarProfile>& profiles,
                             const std::vector<SolarProfile>& predicted, const Scenario& s, const BatchOptions& batch) {
    const auto usable = daylight_instants(s.day);
    const int now = s.day * kSlotsPerDay + s.slot;
    const auto it = std::find(usable.begin(), usable.end(), now);
    if (it == usable.end() || it + 1 == usable.end()) {
        throw std::invalid_argument("slot " + std::to_string(s.slot) + " of day " + std::to_string(s.day) +
                                    " has no usable successor");
    }
    for (const auto* set : {&profiles, &predicted}) {
        if (set->size() != kSolarUnits || (*set)[0].days() <= s.day) {
            throw std::invalid_argument("solar profiles do not cover day " + std::to_string(s.day));
        }
    }
    const int next = *(it + 1);
    const auto base = solve_and_label(make_operating_point(net, s.level.scale, solar_at(profiles, now), SubsetChoice{}),
                                      batch);
    ScenarioState st;
    st.base_voltages = base.solution.voltage_mag;
    st.base_converged = base.solution.converged;
    st.actual_next = solar_at(profiles, next);
    st.predicted_next = solar_at(predicted, next);
    return st;
}

std::vector<Scenario> scenarios_in(DayRange days, const LoadLevel& level) {
    std::vector<Scenario> out;
    for (int d = days.first; d < days.first + days.count; ++d) {
        const auto usable = daylight_instants(d);
        for (std::size_t k = 0; k + 1 < usable.size(); ++k) out.push_back({d, usable[k] % kSlotsPerDay, level});
    }
    return out;
}

}  // namespace gridsel
