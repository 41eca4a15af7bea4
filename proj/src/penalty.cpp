#include <cmath>
#include <stdexcept>

#include "gridsel/subset.hpp"

namespace gridsel {

int SubsetChoice::off_count() const {
    int n = 0;
    for (bool o : off) n += o ? 1 : 0;
    return n;
}

std::string SubsetChoice::label() const {
    if (all_on()) return "all-on";
    std::string s = "off=";
    bool first = true;
    for (std::size_t i = 0; i < off.size(); ++i) {
        if (!off[i]) continue;
        if (!first) s += '+';
        s += std::to_string(i + 1);
        first = false;
    }
    return s;
}

std::vector<SubsetChoice> subset_combinations() {
    return {
        {{true, false, false}},
        {{false, true, false}},
        {{false, false, true}},
        {{true, true, false}},
        {{false, true, true}},
        {{true, false, true}},
        {{true, true, true}},
    };
}

std::vector<SubsetChoice> decision_candidates() {
    auto c = subset_combinations();
    c.push_back(SubsetChoice{});
    return c;
}

double compute_l1(const std::vector<double>& predicted_mw, const std::vector<double>& actual_mw, const PenaltyConfig& cfg) {
    if (predicted_mw.size() != actual_mw.size()) throw std::invalid_argument("compute_l1: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted_mw.size(); ++i) sum += std::abs(predicted_mw[i] - actual_mw[i]);
    return cfg.l1_scale * sum;
}

double compute_l1(const SubsetChoice& choice, const std::array<double, kSolarUnits>& predicted_mw,
                  const std::array<double, kSolarUnits>& actual_mw, const PenaltyConfig& cfg) {
    std::vector<double> p;
    std::vector<double> a;
    for (std::size_t i = 0; i < kSolarUnits; ++i) {
        if (choice.off[i]) continue;
        p.push_back(predicted_mw[i]);
        a.push_back(actual_mw[i]);
    }
    return compute_l1(p, a, cfg);
}

double compute_l2(const CongestionReport& report, const PenaltyConfig& cfg) {
    return report.congested ? cfg.l2_congestion_penalty : 0.0;
}

bool tie_break_less(const SubsetEvaluation& a, const SubsetEvaluation& b) {
    if (a.choice.off_count() != b.choice.off_count()) return a.choice.off_count() < b.choice.off_count();
    return a.candidate_index < b.candidate_index;
}

}  // namespace gridsel
