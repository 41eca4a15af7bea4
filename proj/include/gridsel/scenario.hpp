#pragma once

#include <array>
#include <string>
#include <vector>

#include "gridsel/batch.hpp"
#include "gridsel/grid.hpp"
#include "gridsel/solar.hpp"
#include "gridsel/subset.hpp"

namespace gridsel {

inline constexpr std::size_t kVoltageFeatures = 20;
inline constexpr std::size_t kFeatureWidth = kVoltageFeatures + kSolarUnits;

struct LoadLevel {
    std::string name;
    double scale = 1.0;
};

/// Low < Medium < High.
std::vector<LoadLevel> default_load_levels();

/// Throws std::invalid_argument unless the scales are strictly increasing.
void check_load_levels(const std::vector<LoadLevel>& levels);

/// Contiguous span of day indices into the solar profiles.
struct DayRange {
    int first = 0;
    int count = 0;
};

/// Network and injections for one load scale, one set of solar outputs and
/// one on/off pattern. Online solar units become PV buses at their v_set with
/// p_set = solar_mw; offline units leave their bus as PQ with no injection.
OperatingPoint make_operating_point(const Network& base, double load_scale,
                                    const std::array<double, kSolarUnits>& solar_mw, const SubsetChoice& choice);

std::array<double, kSolarUnits> solar_at(const std::vector<SolarProfile>& profiles, int global_index);

struct CongestionRow {
    std::vector<double> features;  // 20 bus voltage magnitudes, 3 solar MW
    int label = 0;                 // 1 = congested
    int day = 0;
    int slot = 0;
    std::size_t level = 0;
    bool converged = true;
};

struct SubsetRow {
    std::vector<double> features;  // 20 base-state voltage magnitudes, 3-element descriptor
    double target = 0.0;           // l1 + l2
    double l1 = 0.0;
    double l2 = 0.0;
    std::size_t pattern = 0;  // index into subset_combinations()
    int day = 0;
    int slot = 0;  // base-state slot t; the pattern is applied at t + 1
};

template <typename Row>
struct GeneratedDataset {
    std::vector<Row> rows;
    std::vector<std::string> archive;  // one JSON object per solve
};

/// One row per (day, usable instant, level), in that nesting order.
GeneratedDataset<CongestionRow> gen_congestion_dataset(const Network& net, const std::vector<SolarProfile>& profiles,
                                                       const std::vector<LoadLevel>& levels, DayRange days,
                                                       const BatchOptions& options = {});

/// Replaces the three solar features with predicted values at each row's instant.
std::vector<CongestionRow> with_predicted_solar(std::vector<CongestionRow> rows,
                                                const std::vector<SolarProfile>& predicted);

/// Mean over (day, t, off-pattern) of the unscaled L1, i.e. the quantity the
/// calibrated l1_scale normalizes.
double mean_raw_l1(const std::vector<SolarProfile>& profiles, const std::vector<SolarProfile>& predicted, DayRange days);

/// l1_scale such that the mean scaled L1 equals half the congestion penalty.
double calibrate_l1_scale(const std::vector<SolarProfile>& profiles, const std::vector<SolarProfile>& predicted,
                          DayRange days, double l2_congestion_penalty);

/// Penalty terms for one solved candidate. Shared by the dataset generator and
/// the brute-force oracle so both produce identical totals.
SubsetEvaluation score_candidate(const SolveOutcome& outcome, const SubsetChoice& choice, std::size_t candidate_index,
                                 const std::array<double, kSolarUnits>& predicted_mw,
                                 const std::array<double, kSolarUnits>& actual_mw, const PenaltyConfig& cfg);

/// 23-element regressor input: base-state voltages, then predicted MW masked by the choice.
std::vector<double> subset_features(const std::vector<double>& base_voltages, const SubsetChoice& choice,
                                    const std::array<double, kSolarUnits>& predicted_mw);

/// For each day and each usable instant t that has a usable successor:
/// base solve at t with every unit on, then one solve per off-pattern at t + 1.
/// Rows are ordered by (day, t, pattern).
GeneratedDataset<SubsetRow> gen_subset_dataset(const Network& net, const std::vector<SolarProfile>& profiles,
                                               const std::vector<SolarProfile>& predicted, const LoadLevel& level,
                                               const PenaltyConfig& cfg, DayRange days, const BatchOptions& options = {});

std::string congestion_csv_header();
std::string subset_csv_header();
std::string format_congestion_csv(const std::vector<CongestionRow>& rows);
std::string format_subset_csv(const std::vector<SubsetRow>& rows);

}  // namespace gridsel
