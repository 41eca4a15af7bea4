// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
// Usage: gridsel_acceptance [work-dir]

#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "gridsel/adam.hpp"
#include "gridsel/pipeline.hpp"
#include "gridsel/text.hpp"
#include "support/gradcheck.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace gridsel;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void report(int id, const std::string& name, Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " " << name << ":" << o.detail.str() << std::endl;
    if (!o.pass) ++failures;
}

std::string g(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

std::map<std::string, std::string> key_values(const std::string& content) {
    return Metadata::parse(content).fields;
}

double field(const std::map<std::string, std::string>& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error("report has no " + key);
    return std::stod(it->second);
}

// Every regular file under `root`, by relative path.
std::map<std::string, std::string> tree_contents(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = text::read_file(e.path().string());
    }
    return out;
}

void criterion_power_flow() {
    Outcome o;
    const auto t0 = Clock::now();

    // Lossless 2-bus, 0.5 pu unity-pf load: cos(theta) = V2 and V2 sin(theta) = -0.05.
    const double v2 = std::sqrt((1.0 + std::sqrt(0.99)) / 2.0);
    const double th2 = -std::asin(0.05 / v2);
    const auto two = load_network(oracle::two_bus_grid(0.0, 0.1));
    auto inj = Injections::zeros(2);
    inj.p_mw[1] = -50.0;
    const auto s2 = solve_ac(two, inj);
    const double closed_err = std::max(std::abs(s2.voltage_mag[1] - v2), std::abs(s2.voltage_ang[1] - th2));
    o.require(s2.converged && closed_err < 1e-6, "2-bus closed form");

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> scale(0.6, 1.3);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    std::bernoulli_distribution off(0.3);
    const auto net = reference_network();
    double worst_balance = 0.0;
    double worst_gs = 0.0;
    int converged = 0;
    for (int k = 0; k < 50; ++k) {
        SubsetChoice c;
        for (auto& f : c.off) f = off(rng);
        const auto op = make_operating_point(net, scale(rng), {100 * frac(rng), 90 * frac(rng), 90 * frac(rng)}, c);
        const auto sol = solve_ac(op.net, op.injections);
        const auto gs = oracle::gauss_seidel(op.net, op.injections);
        if (!sol.converged || !gs.converged) continue;
        ++converged;
        const std::size_t n = op.net.buses.size();
        double net_gen = sol.p_slack;
        std::vector<std::complex<double>> v;
        for (std::size_t i = 0; i < n; ++i) {
            if (op.net.buses[i].kind != BusKind::Slack) net_gen += op.injections.p_mw[i];
            v.push_back(std::polar(sol.voltage_mag[i], sol.voltage_ang[i]));
        }
        worst_balance = std::max(worst_balance, std::abs(net_gen - oracle::series_losses_mw(op.net, v)));
        for (std::size_t i = 0; i < n; ++i) {
            worst_gs = std::max(worst_gs, std::abs(v[i] - gs.voltage[i]));
        }
    }
    const double elapsed = seconds_since(t0);
    o.require(converged == 50, "all 50 scenarios converge");
    o.require(worst_balance < 1e-4, "power balance < 1e-4 MW");
    o.require(worst_gs < 1e-6, "Newton vs Gauss-Seidel < 1e-6 pu");
    o.require(elapsed < 10.0, "runtime < 10 s");
    o.detail << " 2-bus err=" << g(closed_err) << " converged=" << converged << "/50 max_balance_mw=" << g(worst_balance)
             << " max_gs_gap_pu=" << g(worst_gs) << " runtime_s=" << g(elapsed);
    report(1, "power-flow correctness", o);
}

void criterion_gradients() {
    Outcome o;
    double worst_cls = 0.0;
    double worst_reg = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        worst_cls = std::max(worst_cls, oracle::max_relative_grad_error({23, 100, 2}, 100 + s));
        worst_reg = std::max(worst_reg, oracle::max_relative_grad_error({23, 200, 1}, 200 + s));
    }
    o.require(worst_cls < 1e-4, "[23,100,2] finite differences");
    o.require(worst_reg < 1e-4, "[23,200,1] finite differences");

    // First Adam step, t = 1: m_hat = g and v_hat = g^2, so each step is lr * g / (|g| + eps).
    ml::AdamState st;
    Eigen::VectorXd w(3);
    w << 0.5, -1.0, 2.0;
    Eigen::VectorXd grad(3);
    grad << 0.3, -2.0, 1e-3;
    Eigen::VectorXd expect(3);
    for (int i = 0; i < 3; ++i) {
        const double m = (1 - 0.9) * grad(i);
        const double v = (1 - 0.999) * grad(i) * grad(i);
        expect(i) = w(i) - 1e-3 * (m / (1 - 0.9)) / (std::sqrt(v / (1 - 0.999)) + 1e-8);
    }
    ml::adam_step(st, w, grad);
    const double adam_err = (w - expect).cwiseAbs().maxCoeff();
    o.require(adam_err < 1e-9, "Adam first step");
    o.detail << " max_rel_err[23,100,2]=" << g(worst_cls) << " max_rel_err[23,200,1]=" << g(worst_reg)
             << " adam_err=" << g(adam_err);
    report(2, "gradient fidelity", o);
}

RunConfig default_config(const fs::path& out) {
    RunConfig c = load_run_config(GRIDSEL_SOURCE_DIR "/configs/default.ini");
    c.out_dir = out.string();
    return c;
}

void run_full_pipeline(const RunConfig& cfg) {
    run_gen_data(cfg);
    run_train(cfg, TrainTarget::CongestionNn);
    run_train(cfg, TrainTarget::CongestionSvm);
    run_train(cfg, TrainTarget::CongestionNn, true);
    run_train(cfg, TrainTarget::CongestionSvm, true);
    run_train(cfg, TrainTarget::Subset);
    SelectRequest req;
    req.scenarios = holdout_scenarios(cfg, 100);
    req.oracle = true;
    const auto r = run_select(cfg, req);
    write_artifact((fs::path(cfg.out_dir) / "decisions.txt").string(), r.listing, base_metadata(cfg));
}

void criterion_datasets(const RunConfig& a, const RunConfig& b) {
    Outcome o;
    const auto sa = run_gen_data(a);
    const auto sb = run_gen_data(b);
    o.require(sa.congestion_rows == 2142, "2142 congestion rows");
    for (const auto& [level, n] : sa.subset_rows) o.require(n == 4900, "4900 subset rows at " + level);
    o.require(sa.subset_rows.size() == 3, "three load levels");
    o.require(sa.congested_rows > 0 && sa.congested_rows < sa.congestion_rows, "both labels present");

    const auto csv_rows = [](const fs::path& p) {
        const auto content = text::read_file(p.string());
        return static_cast<std::size_t>(std::count(content.begin(), content.end(), '\n')) - 1;
    };
    o.require(csv_rows(fs::path(a.out_dir) / "congestion.csv") == 2142, "congestion.csv line count");
    o.require(csv_rows(fs::path(a.out_dir) / "subset_High.csv") == 4900, "subset_High.csv line count");

    bool identical = true;
    for (const auto& f : sa.files) {
        const auto ha = text::sha256_hex(text::read_file((fs::path(a.out_dir) / f).string()));
        const auto hb = text::sha256_hex(text::read_file((fs::path(b.out_dir) / f).string()));
        identical = identical && ha == hb;
    }
    o.require(identical, "regeneration hash-identical");
    o.detail << " congestion_rows=" << sa.congestion_rows << " congested=" << sa.congested_rows;
    for (const auto& [level, n] : sa.subset_rows) o.detail << " subset_" << level << "=" << n;
    o.detail << " regenerated_identical=" << (identical ? "yes" : "no");
    report(3, "dataset protocol fidelity", o);
}

void criterion_classifiers(const RunConfig& cfg) {
    Outcome o;
    const auto acc = [&](TrainTarget t, bool predicted) {
        return field(key_values(run_train(cfg, t, predicted).report_text), "test_accuracy");
    };
    const double nn = acc(TrainTarget::CongestionNn, false);
    const double svm = acc(TrainTarget::CongestionSvm, false);
    const double nn_pred = acc(TrainTarget::CongestionNn, true);
    const double svm_pred = acc(TrainTarget::CongestionSvm, true);
    o.require(nn >= 0.90, "NN test accuracy >= 0.90");
    o.require(nn >= svm - 0.01, "NN >= SVM - 0.01");
    o.require(nn_pred <= nn, "predicted-solar NN <= actual-solar NN");
    o.detail << " nn=" << g(nn) << " svm=" << g(svm) << " nn_predicted=" << g(nn_pred) << " svm_predicted=" << g(svm_pred);
    report(4, "classifier ordering", o);
}

void criterion_regressor(const RunConfig& cfg) {
    Outcome o;
    const auto kv = key_values(run_train(cfg, TrainTarget::Subset).report_text);
    const double mse = field(kv, "test_mse");
    const double base = field(kv, "baseline_test_mse");
    const double gain = 1.0 - mse / base;
    o.require(field(kv, "train_size") == 4500 && field(kv, "test_size") == 400, "4500/400 split");
    o.require(field(kv, "steps") == 2500, "2500 steps");
    o.require(gain >= 0.20, "MSE >= 20% below baseline");
    o.detail << " test_mse=" << g(mse) << " baseline_mse=" << g(base) << " improvement=" << g(100 * gain) << "%";
    report(5, "regressor usefulness", o);
}

void criterion_decisions(const RunConfig& cfg) {
    Outcome o;
    SelectRequest req;
    req.scenarios = holdout_scenarios(cfg, 100);
    req.oracle = true;
    const auto r = run_select(cfg, req);
    write_artifact((fs::path(cfg.out_dir) / "decisions.txt").string(), r.listing, base_metadata(cfg));
    std::size_t within = 0;
    double regret = 0.0;
    for (const auto& d : r.decisions) {
        within += d.regret <= cfg.l2_congestion_penalty ? 1 : 0;
        regret += d.regret;
    }
    o.require(r.decisions.size() == 100, "100 held-out scenarios");
    o.require(within >= 90, ">= 90 within one L2 unit of the oracle");

    // Oracle totals against the stored High-level targets for the first dataset day.
    const auto in = prepare_inputs(cfg);
    const auto level = cfg.level(cfg.subset_level);
    const auto data = ml::parse_dataset_csv(
        text::read_file((fs::path(cfg.out_dir) / subset_csv_name(level.name)).string()), subset_csv_header());
    const PenaltyConfig penalty{cfg.l2_congestion_penalty,
                                field(key_values(text::read_file((fs::path(cfg.out_dir) / "dataset.meta").string())),
                                      "l1_scale")};
    const auto combos = subset_combinations();
    const auto shared = scenarios_in({cfg.dataset_days().first, 1}, level);
    std::size_t compared = 0;
    std::size_t mismatched = 0;
    for (std::size_t k = 0; k < shared.size(); ++k) {
        const auto st = scenario_state(in.net, in.solar, in.predicted, shared[k], batch_options(cfg));
        for (const auto& e : oracle_select(in.net, level.scale, st.actual_next, st.predicted_next, combos, penalty,
                                           batch_options(cfg))) {
            ++compared;
            mismatched += data.y(static_cast<Eigen::Index>(k * combos.size() + e.candidate_index)) == e.total ? 0 : 1;
        }
    }
    o.require(compared == 350 && mismatched == 0, "oracle totals equal dataset targets");
    o.detail << " within_l2=" << within << "/" << r.decisions.size() << " mean_regret=" << g(regret / r.decisions.size())
             << " oracle_vs_dataset=" << (compared - mismatched) << "/" << compared << " exact";
    report(6, "decision quality vs oracle", o);
}

void criterion_determinism(const RunConfig& a, const RunConfig& b) {
    Outcome o;
    run_full_pipeline(b);
    const auto ta = tree_contents(a.out_dir);
    const auto tb = tree_contents(b.out_dir);
    std::size_t differing = 0;
    for (const auto& [name, content] : ta) {
        const auto it = tb.find(name);
        if (it == tb.end() || it->second != content) {
            ++differing;
            o.detail << " differs:" << name;
        }
    }
    o.require(ta.size() == tb.size(), "same file set");
    o.require(differing == 0, "byte-identical outputs");
    o.require(ta.count("decisions.txt") && ta.count("models/subset.model"), "decisions and models present");
    o.detail << " files=" << ta.size() << " identical=" << (ta.size() - differing);
    report(7, "end-to-end determinism", o);
}

}  // namespace

int main(int argc, char** argv) {
    const auto t0 = Clock::now();
    const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "gridsel-acceptance";
    fs::remove_all(work);
    const auto a = default_config(work / "run-a");
    const auto b = default_config(work / "run-b");

    try {
        criterion_power_flow();
        criterion_gradients();
        criterion_datasets(a, b);
        criterion_classifiers(a);
        criterion_regressor(a);
        criterion_decisions(a);
        criterion_determinism(a, b);
    } catch (const std::exception& e) {
        std::cout << "FAIL acceptance aborted: " << e.what() << std::endl;
        return 1;
    }
    std::cout << (failures ? "FAILED " : "ALL PASSED ") << "(" << failures << " failing, " << g(seconds_since(t0))
              << " s total)" << std::endl;
    return failures ? 1 : 0;
}
