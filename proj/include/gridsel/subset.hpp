#pragma once

#include <array>
#include <string>
#include <vector>

#include "gridsel/powerflow.hpp"

namespace gridsel {

inline constexpr std::size_t kSolarUnits = 3;

/// On/off pattern of the three solar units; `off[i]` switches unit i+1 off.
struct SubsetChoice {
    std::array<bool, kSolarUnits> off{};

    int off_count() const;
    bool all_on() const { return off_count() == 0; }
    /// "all-on", "off=1", "off=1+3", ...
    std::string label() const;
    friend bool operator==(const SubsetChoice&, const SubsetChoice&) = default;
};

/// The seven nonempty off-patterns in a fixed order:
/// {1}, {2}, {3}, {1,2}, {2,3}, {1,3}, {1,2,3}.
std::vector<SubsetChoice> subset_combinations();

/// The seven off-patterns followed by all-on.
std::vector<SubsetChoice> decision_candidates();

struct PenaltyConfig {
    double l2_congestion_penalty = 50.0;
    double l1_scale = 1.0;
};

/// l1_scale * sum |predicted - actual| over the units the choice keeps on.
/// Both vectors are aligned with the ON units. Throws std::invalid_argument on length mismatch.
double compute_l1(const std::vector<double>& predicted_mw, const std::vector<double>& actual_mw, const PenaltyConfig& cfg);

/// Convenience overload taking all three units and masking by the choice.
double compute_l1(const SubsetChoice& choice, const std::array<double, kSolarUnits>& predicted_mw,
                  const std::array<double, kSolarUnits>& actual_mw, const PenaltyConfig& cfg);

double compute_l2(const CongestionReport& report, const PenaltyConfig& cfg);

struct SubsetEvaluation {
    SubsetChoice choice;
    std::size_t candidate_index = 0;
    double l1 = 0.0;
    double l2 = 0.0;
    double total = 0.0;
    double predicted_total = 0.0;
};

/// Tie-break shared by select_subset and oracle_select: fewest units off,
/// then lowest candidate index.
bool tie_break_less(const SubsetEvaluation& a, const SubsetEvaluation& b);

}  // namespace gridsel
