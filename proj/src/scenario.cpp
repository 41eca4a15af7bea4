#include "gridsel/scenario.hpp"

#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gridsel/text.hpp"

namespace gridsel {

namespace {

using nlohmann::json;

void require_profiles(const std::vector<SolarProfile>& profiles, DayRange days, const char* who) {
    if (profiles.size() != kSolarUnits) {
        throw std::invalid_argument(std::string(who) + ": expected one profile per solar unit");
    }
    if (days.first < 0 || days.count < 1) throw std::invalid_argument(std::string(who) + ": empty day range");
    for (const auto& p : profiles) {
        if (p.days() < days.first + days.count) {
            throw std::invalid_argument(std::string(who) + ": solar profiles do not cover the requested days");
        }
    }
}

std::string archive_line(const char* dataset, int day, int slot, const std::string& level,
                         const std::string& pattern, const SolveOutcome& o) {
    json j;
    j["dataset"] = dataset;
    j["day"] = day;
    j["slot"] = slot;
    j["level"] = level;
    j["pattern"] = pattern;
    j["converged"] = o.solution.converged;
    j["singular"] = o.singular;
    j["iterations"] = o.solution.iterations;
    j["residual"] = o.solution.residual;
    j["p_slack_mw"] = o.solution.p_slack;
    j["losses_mw"] = o.solution.losses_mw;
    j["voltage_mag"] = o.solution.voltage_mag;
    j["voltage_ang"] = o.solution.voltage_ang;
    j["branch_flow_mva"] = o.solution.branch_flow_mva;
    j["congested"] = o.congestion.congested;
    return j.dump();
}

}  // namespace

std::vector<LoadLevel> default_load_levels() {
    return {{"Low", 0.7}, {"Medium", 1.0}, {"High", 1.3}};
}

void check_load_levels(const std::vector<LoadLevel>& levels) {
    for (std::size_t i = 1; i < levels.size(); ++i) {
        if (!(levels[i - 1].scale < levels[i].scale)) {
            throw std::invalid_argument("load levels must have strictly increasing scales");
        }
    }
}

OperatingPoint make_operating_point(const Network& base, double load_scale,
                                    const std::array<double, kSolarUnits>& solar_mw, const SubsetChoice& choice) {
    OperatingPoint op{base, Injections::zeros(base.bus_count())};
    Network& net = op.net;

    const auto solar = net.solar_generators();
    if (solar.size() != kSolarUnits) throw std::invalid_argument("make_operating_point: network needs 3 solar units");
    for (std::size_t i = 0; i < kSolarUnits; ++i) {
        auto& g = net.generators[solar[i]];
        g.online = !choice.off[i];
        g.p_set = g.online ? solar_mw[i] : 0.0;
    }

    std::vector<bool> has_gen(net.bus_count(), false);
    std::vector<bool> has_online(net.bus_count(), false);
    for (const auto& g : net.generators) {
        has_gen[g.bus] = true;
        if (!g.online) continue;
        if (!has_online[g.bus] && net.buses[g.bus].kind != BusKind::Slack) {
            net.buses[g.bus].kind = BusKind::PV;
        }
        if (!has_online[g.bus]) net.buses[g.bus].voltage_mag = g.v_set;
        has_online[g.bus] = true;
        op.injections.p_mw[g.bus] += g.p_set;
    }
    for (auto& b : net.buses) {
        if (has_gen[b.id] && !has_online[b.id] && b.kind == BusKind::PV) b.kind = BusKind::PQ;
    }
    for (auto& l : net.loads) {
        l.p_base *= load_scale;
        l.q_base *= load_scale;
        op.injections.p_mw[l.bus] -= l.p_base;
        op.injections.q_mvar[l.bus] -= l.q_base;
    }
    return op;
}

std::array<double, kSolarUnits> solar_at(const std::vector<SolarProfile>& profiles, int global_index) {
    std::array<double, kSolarUnits> out{};
    for (std::size_t i = 0; i < kSolarUnits; ++i) out[i] = profiles.at(i).samples.at(global_index);
    return out;
}

GeneratedDataset<CongestionRow> gen_congestion_dataset(const Network& net, const std::vector<SolarProfile>& profiles,
                                                       const std::vector<LoadLevel>& levels, DayRange days,
                                                       const BatchOptions& options) {
    require_profiles(profiles, days, "gen_congestion_dataset");
    check_load_levels(levels);

    struct Task {
        int day;
        int index;
        std::size_t level;
    };
    std::vector<Task> tasks;
    std::vector<OperatingPoint> points;
    for (int d = days.first; d < days.first + days.count; ++d) {
        for (int idx : daylight_instants(d)) {
            for (std::size_t l = 0; l < levels.size(); ++l) {
                tasks.push_back({d, idx, l});
                points.push_back(make_operating_point(net, levels[l].scale, solar_at(profiles, idx), SubsetChoice{}));
            }
        }
    }

    const auto outcomes = solve_batch(points, options);

    GeneratedDataset<CongestionRow> out;
    out.rows.reserve(tasks.size());
    out.archive.reserve(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& t = tasks[i];
        const auto& o = outcomes[i];
        CongestionRow row;
        row.features = o.solution.voltage_mag;
        const auto solar = solar_at(profiles, t.index);
        row.features.insert(row.features.end(), solar.begin(), solar.end());
        row.label = o.congestion.congested ? 1 : 0;
        row.day = t.day;
        row.slot = t.index % kSlotsPerDay;
        row.level = t.level;
        row.converged = o.solution.converged;
        out.rows.push_back(std::move(row));
        out.archive.push_back(archive_line("congestion", t.day, t.index % kSlotsPerDay, levels[t.level].name, "all-on", o));
    }
    return out;
}

std::vector<CongestionRow> with_predicted_solar(std::vector<CongestionRow> rows,
                                                const std::vector<SolarProfile>& predicted) {
    for (auto& row : rows) {
        const auto mw = solar_at(predicted, row.day * kSlotsPerDay + row.slot);
        const auto first_solar = row.features.size() - kSolarUnits;
        for (std::size_t i = 0; i < kSolarUnits; ++i) row.features[first_solar + i] = mw[i];
    }
    return rows;
}

double mean_raw_l1(const std::vector<SolarProfile>& profiles, const std::vector<SolarProfile>& predicted, DayRange days) {
    require_profiles(profiles, days, "mean_raw_l1");
    require_profiles(predicted, days, "mean_raw_l1");
    const PenaltyConfig unit{0.0, 1.0};
    double sum = 0.0;
    std::size_t n = 0;
    for (int d = days.first; d < days.first + days.count; ++d) {
        const auto instants = daylight_instants(d);
        for (std::size_t k = 0; k + 1 < instants.size(); ++k) {
            const auto actual = solar_at(profiles, instants[k + 1]);
            const auto pred = solar_at(predicted, instants[k + 1]);
            for (const auto& choice : subset_combinations()) {
                sum += compute_l1(choice, pred, actual, unit);
                ++n;
            }
        }
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

double calibrate_l1_scale(const std::vector<SolarProfile>& profiles, const std::vector<SolarProfile>& predicted,
                          DayRange days, double l2_congestion_penalty) {
    const double mean = mean_raw_l1(profiles, predicted, days);
    return mean > 0.0 ? (l2_congestion_penalty / 2.0) / mean : 1.0;
}

SubsetEvaluation score_candidate(const SolveOutcome& outcome, const SubsetChoice& choice, std::size_t candidate_index,
                                 const std::array<double, kSolarUnits>& predicted_mw,
                                 const std::array<double, kSolarUnits>& actual_mw, const PenaltyConfig& cfg) {
    SubsetEvaluation e;
    e.choice = choice;
    e.candidate_index = candidate_index;
    e.l1 = compute_l1(choice, predicted_mw, actual_mw, cfg);
    e.l2 = compute_l2(outcome.congestion, cfg);
    e.total = e.l1 + e.l2;
    return e;
}

std::vector<double> subset_features(const std::vector<double>& base_voltages, const SubsetChoice& choice,
                                    const std::array<double, kSolarUnits>& predicted_mw) {
    std::vector<double> f = base_voltages;
    for (std::size_t i = 0; i < kSolarUnits; ++i) f.push_back(choice.off[i] ? 0.0 : predicted_mw[i]);
    return f;
}

GeneratedDataset<SubsetRow> gen_subset_dataset(const Network& net, const std::vector<SolarProfile>& profiles,
                                               const std::vector<SolarProfile>& predicted, const LoadLevel& level,
                                               const PenaltyConfig& cfg, DayRange days, const BatchOptions& options) {
    require_profiles(profiles, days, "gen_subset_dataset");
    require_profiles(predicted, days, "gen_subset_dataset");
    const auto patterns = subset_combinations();
    const std::size_t per_instant = 1 + patterns.size();

    struct Instant {
        int day;
        int now;
        int next;
    };
    std::vector<Instant> instants;
    std::vector<OperatingPoint> points;
    for (int d = days.first; d < days.first + days.count; ++d) {
        const auto usable = daylight_instants(d);
        for (std::size_t k = 0; k + 1 < usable.size(); ++k) {
            instants.push_back({d, usable[k], usable[k + 1]});
            points.push_back(make_operating_point(net, level.scale, solar_at(profiles, usable[k]), SubsetChoice{}));
            const auto next_solar = solar_at(profiles, usable[k + 1]);
            for (const auto& choice : patterns) {
                points.push_back(make_operating_point(net, level.scale, next_solar, choice));
            }
        }
    }

    const auto outcomes = solve_batch(points, options);

    GeneratedDataset<SubsetRow> out;
    out.rows.reserve(instants.size() * patterns.size());
    for (std::size_t i = 0; i < instants.size(); ++i) {
        const auto& inst = instants[i];
        const auto& base = outcomes[i * per_instant];
        const auto actual = solar_at(profiles, inst.next);
        const auto pred = solar_at(predicted, inst.next);
        const int slot = inst.now % kSlotsPerDay;
        out.archive.push_back(archive_line("subset-base", inst.day, slot, level.name, "all-on", base));
        for (std::size_t p = 0; p < patterns.size(); ++p) {
            const auto& o = outcomes[i * per_instant + 1 + p];
            const auto eval = score_candidate(o, patterns[p], p, pred, actual, cfg);
            SubsetRow row;
            row.features = subset_features(base.solution.voltage_mag, patterns[p], pred);
            row.l1 = eval.l1;
            row.l2 = eval.l2;
            row.target = eval.total;
            row.pattern = p;
            row.day = inst.day;
            row.slot = slot;
            out.rows.push_back(std::move(row));
            out.archive.push_back(
                archive_line("subset", inst.day, inst.next % kSlotsPerDay, level.name, patterns[p].label(), o));
        }
    }
    return out;
}

namespace {

std::string voltage_header(std::size_t n) {
    std::string h;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i > 1) h += ',';
        h += 'v' + std::to_string(i);
    }
    return h;
}

}  // namespace

std::string congestion_csv_header() {
    return voltage_header(kVoltageFeatures) + ",solar1,solar2,solar3,label";
}

std::string subset_csv_header() {
    return voltage_header(kVoltageFeatures) + ",d1,d2,d3,target";
}

std::string format_congestion_csv(const std::vector<CongestionRow>& rows) {
    std::ostringstream out;
    out << congestion_csv_header() << '\n';
    for (const auto& r : rows) {
        for (double f : r.features) out << text::format_double(f) << ',';
        out << r.label << '\n';
    }
    return out.str();
}

std::string format_subset_csv(const std::vector<SubsetRow>& rows) {
    std::ostringstream out;
    out << subset_csv_header() << '\n';
    for (const auto& r : rows) {
        for (double f : r.features) out << text::format_double(f) << ',';
        out << text::format_double(r.target) << '\n';
    }
    return out.str();
}

}  // namespace gridsel
