#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gridsel/model_io.hpp"
#include "gridsel/scenario.hpp"

namespace gridsel {

inline const std::vector<int> kPenaltyRegressorLayers = {static_cast<int>(kFeatureWidth), 200, 1};

struct RegressorOptions {
    Eigen::Index train_count = 4500;
    int steps = 2500;
    int batch_size = 32;
    double learning_rate = 1e-3;
    double l2_congestion_penalty = 50.0;  // rows with target >= this count as congested for the proxies
    std::uint64_t seed = 0;
};

struct RegressorReport {
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    double train_mse = 0.0;
    double test_mse = 0.0;
    double baseline_test_mse = 0.0;  // always predicting the training-target mean
    double test_l1_proxy = 0.0;
    double test_l2_proxy = 0.0;
    int steps = 0;
    std::uint64_t seed = 0;
    ml::TrainingCurve curve;  // step,train_loss,test_l1_proxy,test_l2_proxy

    std::string to_text() const;
};

struct TrainedRegressor {
    ml::ModelFile model;
    RegressorReport report;
};

ml::Dataset subset_dataset(const std::vector<SubsetRow>& rows);

/// Mean |prediction - target| over rows whose target is below the congestion
/// penalty (l1) and over rows at or above it (l2). A side with no rows gives 0.
std::pair<double, double> component_error_proxies(const ml::VectorXd& predicted, const ml::VectorXd& target,
                                                  double l2_congestion_penalty);

/// [23, 200, 1] ReLU network trained on squared error with Adam.
TrainedRegressor train_penalty_regressor(const ml::Dataset& data, const RegressorOptions& options);

/// Regressor output for raw (unstandardized) 23-feature rows.
ml::VectorXd predict_penalty(const ml::ModelFile& model, const ml::MatrixXd& raw_features, int jobs = 1);

/// Maps a 23-element feature vector to a predicted total penalty.
using PenaltyScorer = std::function<double(const std::vector<double>&)>;

/// The model must outlive the returned scorer.
PenaltyScorer model_scorer(const ml::ModelFile& model);

/// Every candidate with its predicted total, in candidate order.
std::vector<SubsetEvaluation> score_candidates(const PenaltyScorer& scorer, const std::vector<double>& base_voltages,
                                               const std::array<double, kSolarUnits>& predicted_mw,
                                               const std::vector<SubsetChoice>& candidates);

/// Candidate with the lowest predicted total; ties go to fewest units off,
/// then the lowest candidate index. Throws std::invalid_argument when empty.
SubsetEvaluation select_subset(const PenaltyScorer& scorer, const std::vector<double>& base_voltages,
                               const std::array<double, kSolarUnits>& predicted_mw,
                               const std::vector<SubsetChoice>& candidates);
SubsetEvaluation select_subset(const ml::ModelFile& model, const std::vector<double>& base_voltages,
                               const std::array<double, kSolarUnits>& predicted_mw,
                               const std::vector<SubsetChoice>& candidates);

/// Solves the network once per candidate with `actual_next` solar and scores
/// the true penalties. Sorted ascending by total with the select_subset tie-break.
std::vector<SubsetEvaluation> oracle_select(const Network& net, double load_scale,
                                            const std::array<double, kSolarUnits>& actual_next,
                                            const std::array<double, kSolarUnits>& predicted_next,
                                            const std::vector<SubsetChoice>& candidates, const PenaltyConfig& cfg,
                                            const BatchOptions& batch = {});

/// One decision instant: the base state at `slot` and the pattern applied at the next usable slot.
struct Scenario {
    int day = 0;
    int slot = 0;
    LoadLevel level;
};

struct ScenarioState {
    std::vector<double> base_voltages;
    std::array<double, kSolarUnits> actual_next{};
    std::array<double, kSolarUnits> predicted_next{};
    bool base_converged = true;
};

/// Solves the all-on base state for `s` exactly as gen_subset_dataset does.
ScenarioState scenario_state(const Network& net, const std::vector<SolarProfile>& profiles,
                             const std::vector<SolarProfile>& predicted, const Scenario& s,
                             const BatchOptions& batch = {});

/// Every (day, slot) pair in `days` that has a usable successor, at one load level.
std::vector<Scenario> scenarios_in(DayRange days, const LoadLevel& level);

}  // namespace gridsel
