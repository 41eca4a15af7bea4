#pragma once
// End-to-end orchestration shared by the command-line tool and the tests.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridsel/congestion.hpp"
#include "gridsel/selector.hpp"

namespace gridsel {

inline constexpr const char* kToolName = "gridsel";
const char* tool_version();

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string grid_path;  // empty: built-in reference grid
    std::uint64_t seed = 2017;
    std::string out_dir = "out";
    int jobs = 0;  // 0: one worker per logical core

    std::string solar_source = "synthetic";  // synthetic | csv
    std::string solar_csv;
    std::vector<double> solar_peaks_mw = {100.0, 90.0, 90.0};
    int history_days = 2;  // feed the forecaster only
    int days = 14;         // dataset days
    int holdout_days = 2;  // decision sweep only

    std::vector<LoadLevel> levels = default_load_levels();

    double l2_congestion_penalty = 50.0;
    std::optional<double> l1_scale;  // unset: calibrated from the solar data

    Eigen::Index congestion_subsample = 715;  // 0: use every row
    Eigen::Index predicted_subsample = 750;
    Eigen::Index congestion_train_count = 650;
    int congestion_nn_steps = 500;
    int predicted_nn_steps = 800;
    double svm_lambda = 1e-3;
    int svm_epochs = 20;
    double congestion_learning_rate = 1e-3;

    std::string subset_level = "High";
    Eigen::Index subset_train_count = 4500;
    int subset_steps = 2500;
    double subset_learning_rate = 1e-3;
    int batch_size = 32;

    std::string candidates = "all";  // all | off-only (no all-on candidate)

    DayRange dataset_days() const { return {history_days, days}; }
    DayRange holdout_range() const { return {history_days + days, holdout_days}; }
    int total_days() const { return history_days + days + holdout_days; }
    const LoadLevel& level(const std::string& name) const;
    std::vector<SubsetChoice> candidate_set() const;
    /// Throws ConfigError on an inconsistent configuration.
    void validate() const;
};

/// Parses INI text (`key = value` under `[section]` headers). Unknown keys are errors.
RunConfig parse_run_config(const std::string& ini_text);
RunConfig load_run_config(const std::string& path);
/// Canonical INI form of every setting that affects outputs (not out_dir or jobs).
std::string format_run_config(const RunConfig& cfg);

/// Independent stream seeds derived from the run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

enum SeedStream : std::uint64_t { kSolarStream = 1, kClassifierStream = 2, kRegressorStream = 3 };

/// key=value sidecar written next to every artifact as `<artifact>.meta`.
struct Metadata {
    std::map<std::string, std::string> fields;
    std::string to_text() const;
    static Metadata parse(const std::string& text);
};

/// tool, version, seed and the config fingerprint.
Metadata base_metadata(const RunConfig& cfg);

/// Writes `content` to `path` and its sidecar, adding the artifact's own sha256.
void write_artifact(const std::string& path, const std::string& content, Metadata meta);

struct PipelineInputs {
    Network net;
    std::string grid_sha256;
    std::vector<SolarProfile> solar;      // actual outputs, total_days() days
    std::vector<SolarProfile> predicted;  // historical-average forecasts
    std::string solar_sha256;
};

/// Loads the grid and produces solar data (synthetic or from CSV).
PipelineInputs prepare_inputs(const RunConfig& cfg);

BatchOptions batch_options(const RunConfig& cfg);

double resolve_l1_scale(const RunConfig& cfg, const PipelineInputs& in);

std::string subset_csv_name(const std::string& level);

struct GenDataSummary {
    std::size_t congestion_rows = 0;
    std::size_t congested_rows = 0;
    std::map<std::string, std::size_t> subset_rows;  // per level
    double l1_scale = 0.0;
    std::vector<std::string> files;
};

/// Writes solar.csv, congestion.csv, congestion_predicted.csv, one
/// subset_<level>.csv per load level, archive.jsonl and dataset.meta into out_dir.
GenDataSummary run_gen_data(const RunConfig& cfg);

enum class TrainTarget { CongestionNn, CongestionSvm, Subset };
TrainTarget parse_train_target(const std::string& name);
std::string to_string(TrainTarget t);

struct TrainSummary {
    std::string model_path;
    std::string report_text;
    std::string curve_path;
};

/// Trains from the datasets in out_dir and writes models/<name>.model with its
/// report and curve. `predicted_variant` selects congestion_predicted.csv.
TrainSummary run_train(const RunConfig& cfg, TrainTarget target, bool predicted_variant = false);

/// Model file evaluated against every row of a dataset CSV.
std::string run_eval(const std::string& model_path, const std::string& csv_path);

struct Decision {
    Scenario scenario;
    std::vector<SubsetEvaluation> scored;  // candidate order, predicted totals
    SubsetEvaluation chosen;
    std::vector<SubsetEvaluation> oracle;  // ranked; empty without the oracle
    double chosen_true_total = 0.0;
    double regret = 0.0;  // chosen true total - oracle best
};

struct SelectRequest {
    std::string model_path;  // empty: out_dir/models/subset.model
    std::vector<Scenario> scenarios;
    bool oracle = false;
};

struct SelectResult {
    std::vector<Decision> decisions;
    std::string listing;
};

/// Scenarios from the held-out days at the subset level, first `n` of them.
std::vector<Scenario> holdout_scenarios(const RunConfig& cfg, int n);

SelectResult run_select(const RunConfig& cfg, const SelectRequest& request);

}  // namespace gridsel
