#include "gridsel/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gridsel/text.hpp"

#ifndef GRIDSEL_VERSION
#define GRIDSEL_VERSION "0.0.0"
#endif

namespace gridsel {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

const char* tool_version() {
    return GRIDSEL_VERSION;
}

const LoadLevel& RunConfig::level(const std::string& name) const {
    for (const auto& l : levels) {
        if (l.name == name) return l;
    }
    throw ConfigError("unknown load level '" + name + "'");
}

std::vector<SubsetChoice> RunConfig::candidate_set() const {
    if (candidates == "all") return decision_candidates();
    if (candidates == "off-only") return subset_combinations();
    throw ConfigError("candidates must be 'all' or 'off-only'");
}

void RunConfig::validate() const {
    if (solar_source != "synthetic" && solar_source != "csv") throw ConfigError("solar.source must be synthetic or csv");
    if (solar_source == "csv" && solar_csv.empty()) throw ConfigError("solar.csv_path is required for a csv source");
    if (solar_peaks_mw.size() != kSolarUnits) throw ConfigError("solar.peaks_mw needs one value per solar unit");
    for (double p : solar_peaks_mw) {
        if (!(p > 0)) throw ConfigError("solar.peaks_mw must be positive");
    }
    if (history_days < 2) throw ConfigError("solar.history_days must be at least 2");
    if (days < 1 || holdout_days < 0) throw ConfigError("solar.days must be >= 1 and solar.holdout_days >= 0");
    if (levels.empty()) throw ConfigError("at least one load level is required");
    try {
        check_load_levels(levels);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    level(subset_level);
    candidate_set();
    if (!(l2_congestion_penalty > 0)) throw ConfigError("penalty.l2 must be positive");
    if (l1_scale && !(*l1_scale > 0)) throw ConfigError("penalty.l1_scale must be positive or 'auto'");
    if (congestion_subsample < 0 || predicted_subsample < 0) throw ConfigError("subsample sizes must be >= 0");
    if (congestion_train_count < 1 || subset_train_count < 1) throw ConfigError("train counts must be >= 1");
    if (congestion_nn_steps < 1 || predicted_nn_steps < 1 || subset_steps < 1 || svm_epochs < 1 || batch_size < 1) {
        throw ConfigError("step, epoch and batch counts must be >= 1");
    }
    if (!(svm_lambda > 0) || !(congestion_learning_rate > 0) || !(subset_learning_rate > 0)) {
        throw ConfigError("learning rates and svm lambda must be positive");
    }
    if (jobs < 0) throw ConfigError("jobs must be >= 0");
}

namespace {

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"run", {"seed", "out_dir", "jobs"}},
    {"grid", {"path"}},
    {"solar", {"source", "csv_path", "peaks_mw", "history_days", "days", "holdout_days"}},
    {"levels", {"names", "scales"}},
    {"penalty", {"l2", "l1_scale"}},
    {"congestion", {"subsample", "predicted_subsample", "train_count", "nn_steps", "predicted_nn_steps", "svm_lambda",
                    "svm_epochs", "learning_rate"}},
    {"subset", {"level", "train_count", "steps", "learning_rate", "batch_size"}},
    {"select", {"candidates"}},
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    for (const auto f : text::split(s, ',')) {
        if (!f.empty()) out.emplace_back(f);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    const auto d = text::parse_double(text::trim(v));
    if (!d) throw ConfigError(key + ": not a number: '" + v + "'");
    return *d;
}

long long to_int(const std::string& key, const std::string& v) {
    const auto i = text::parse_int(text::trim(v));
    if (!i) throw ConfigError(key + ": not an integer: '" + v + "'");
    return *i;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
    return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& ini_text) {
    pt::ptree tree;
    std::istringstream in(ini_text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
    }

    RunConfig c;
    std::vector<std::string> level_names;
    std::vector<double> level_scales;
    for (const auto& [section, body] : tree) {
        const auto known = kKnownKeys.find(section);
        if (known == kKnownKeys.end() || body.data().size() != 0) {
            throw ConfigError("unknown config section [" + section + "]");
        }
        for (const auto& [key, node] : body) {
            const std::string name = section + "." + key;
            if (!known->second.count(key)) throw ConfigError("unknown config key " + name);
            const std::string v{text::trim(node.data())};
            if (name == "run.seed") c.seed = static_cast<std::uint64_t>(to_int(name, v));
            else if (name == "run.out_dir") c.out_dir = v;
            else if (name == "run.jobs") c.jobs = static_cast<int>(to_int(name, v));
            else if (name == "grid.path") c.grid_path = v;
            else if (name == "solar.source") c.solar_source = v;
            else if (name == "solar.csv_path") c.solar_csv = v;
            else if (name == "solar.peaks_mw") {
                c.solar_peaks_mw.clear();
                for (const auto& p : split_list(v)) c.solar_peaks_mw.push_back(to_double(name, p));
            } else if (name == "solar.history_days") c.history_days = static_cast<int>(to_int(name, v));
            else if (name == "solar.days") c.days = static_cast<int>(to_int(name, v));
            else if (name == "solar.holdout_days") c.holdout_days = static_cast<int>(to_int(name, v));
            else if (name == "levels.names") level_names = split_list(v);
            else if (name == "levels.scales") {
                for (const auto& p : split_list(v)) level_scales.push_back(to_double(name, p));
            } else if (name == "penalty.l2") c.l2_congestion_penalty = to_double(name, v);
            else if (name == "penalty.l1_scale") {
                if (v == "auto") c.l1_scale.reset();
                else c.l1_scale = to_double(name, v);
            } else if (name == "congestion.subsample") c.congestion_subsample = to_int(name, v);
            else if (name == "congestion.predicted_subsample") c.predicted_subsample = to_int(name, v);
            else if (name == "congestion.train_count") c.congestion_train_count = to_int(name, v);
            else if (name == "congestion.nn_steps") c.congestion_nn_steps = static_cast<int>(to_int(name, v));
            else if (name == "congestion.predicted_nn_steps") c.predicted_nn_steps = static_cast<int>(to_int(name, v));
            else if (name == "congestion.svm_lambda") c.svm_lambda = to_double(name, v);
            else if (name == "congestion.svm_epochs") c.svm_epochs = static_cast<int>(to_int(name, v));
            else if (name == "congestion.learning_rate") c.congestion_learning_rate = to_double(name, v);
            else if (name == "subset.level") c.subset_level = v;
            else if (name == "subset.train_count") c.subset_train_count = to_int(name, v);
            else if (name == "subset.steps") c.subset_steps = static_cast<int>(to_int(name, v));
            else if (name == "subset.learning_rate") c.subset_learning_rate = to_double(name, v);
            else if (name == "subset.batch_size") c.batch_size = static_cast<int>(to_int(name, v));
            else if (name == "select.candidates") c.candidates = v;
        }
    }
    if (!level_names.empty() || !level_scales.empty()) {
        if (level_names.size() != level_scales.size()) throw ConfigError("levels.names and levels.scales differ in length");
        c.levels.clear();
        for (std::size_t i = 0; i < level_names.size(); ++i) c.levels.push_back({level_names[i], level_scales[i]});
    }
    c.validate();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    RunConfig c = parse_run_config(text::read_file(path));
    // Relative paths in a config file are relative to that file.
    const auto base = fs::path(path).parent_path();
    auto rebase = [&](std::string& p) {
        if (!p.empty() && fs::path(p).is_relative()) p = (base / p).lexically_normal().string();
    };
    rebase(c.grid_path);
    rebase(c.solar_csv);
    return c;
}

std::string format_run_config(const RunConfig& c) {
    std::vector<std::string> names;
    std::vector<std::string> scales;
    for (const auto& l : c.levels) {
        names.push_back(l.name);
        scales.push_back(text::format_double(l.scale));
    }
    std::vector<std::string> peaks;
    for (double p : c.solar_peaks_mw) peaks.push_back(text::format_double(p));

    std::ostringstream o;
    o << "[run]\nseed = " << c.seed << "\n\n"
      << "[grid]\npath = " << (c.grid_path.empty() ? "" : fs::path(c.grid_path).filename().string()) << "\n\n"
      << "[solar]\nsource = " << c.solar_source << '\n'
      << "peaks_mw = " << join(peaks) << '\n'
      << "history_days = " << c.history_days << '\n'
      << "days = " << c.days << '\n'
      << "holdout_days = " << c.holdout_days << "\n\n"
      << "[levels]\nnames = " << join(names) << "\nscales = " << join(scales) << "\n\n"
      << "[penalty]\nl2 = " << text::format_double(c.l2_congestion_penalty) << '\n'
      << "l1_scale = " << (c.l1_scale ? text::format_double(*c.l1_scale) : "auto") << "\n\n"
      << "[congestion]\nsubsample = " << c.congestion_subsample << '\n'
      << "predicted_subsample = " << c.predicted_subsample << '\n'
      << "train_count = " << c.congestion_train_count << '\n'
      << "nn_steps = " << c.congestion_nn_steps << '\n'
      << "predicted_nn_steps = " << c.predicted_nn_steps << '\n'
      << "svm_lambda = " << text::format_double(c.svm_lambda) << '\n'
      << "svm_epochs = " << c.svm_epochs << '\n'
      << "learning_rate = " << text::format_double(c.congestion_learning_rate) << "\n\n"
      << "[subset]\nlevel = " << c.subset_level << '\n'
      << "train_count = " << c.subset_train_count << '\n'
      << "steps = " << c.subset_steps << '\n'
      << "learning_rate = " << text::format_double(c.subset_learning_rate) << '\n'
      << "batch_size = " << c.batch_size << "\n\n"
      << "[select]\ncandidates = " << c.candidates << '\n';
    return o.str();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over the combined value
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string Metadata::to_text() const {
    std::string out;
    for (const auto& [k, v] : fields) out += k + "=" + v + "\n";
    return out;
}

Metadata Metadata::parse(const std::string& content) {
    Metadata m;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        const auto t = text::trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) throw std::runtime_error("metadata line without '='");
        m.fields[std::string(t.substr(0, eq))] = std::string(t.substr(eq + 1));
    }
    return m;
}

Metadata base_metadata(const RunConfig& cfg) {
    Metadata m;
    m.fields["tool"] = kToolName;
    m.fields["version"] = tool_version();
    m.fields["seed"] = std::to_string(cfg.seed);
    m.fields["config_sha256"] = text::sha256_hex(format_run_config(cfg));
    return m;
}

void write_artifact(const std::string& path, const std::string& content, Metadata meta) {
    const auto parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    meta.fields["sha256"] = text::sha256_hex(content);
    text::write_file(path, content);
    text::write_file(path + ".meta", meta.to_text());
}

PipelineInputs prepare_inputs(const RunConfig& cfg) {
    cfg.validate();
    PipelineInputs in;
    if (cfg.grid_path.empty()) {
        in.net = reference_network();
        in.grid_sha256 = text::sha256_hex(serialize_network(in.net));
    } else {
        const auto grid_text = text::read_file(cfg.grid_path);
        in.net = load_network(grid_text);
        in.grid_sha256 = text::sha256_hex(grid_text);
    }
    if (in.net.solar_generators().size() != kSolarUnits) {
        throw ValidationError("the grid must have exactly " + std::to_string(kSolarUnits) + " solar generators");
    }

    if (cfg.solar_source == "csv") {
        const auto content = text::read_file(cfg.solar_csv);
        in.solar = parse_solar_csv(content);
        in.solar_sha256 = text::sha256_hex(content);
        if (in.solar.size() != kSolarUnits) throw ConfigError("solar csv must have one column per solar unit");
        if (in.solar[0].days() < cfg.total_days()) {
            throw ConfigError("solar csv covers " + std::to_string(in.solar[0].days()) + " days, config needs " +
                              std::to_string(cfg.total_days()));
        }
    } else {
        in.solar = synth_solar(cfg.total_days(), cfg.solar_peaks_mw, derive_seed(cfg.seed, kSolarStream));
        in.solar_sha256 = text::sha256_hex(format_solar_csv(in.solar));
    }
    in.predicted = predicted_profiles(in.solar, 1);
    return in;
}

BatchOptions batch_options(const RunConfig& cfg) {
    BatchOptions b;
    b.jobs = cfg.jobs;
    return b;
}

double resolve_l1_scale(const RunConfig& cfg, const PipelineInputs& in) {
    if (cfg.l1_scale) return *cfg.l1_scale;
    return calibrate_l1_scale(in.solar, in.predicted, cfg.dataset_days(), cfg.l2_congestion_penalty);
}

std::string subset_csv_name(const std::string& level) {
    return "subset_" + level + ".csv";
}

namespace {

Metadata input_metadata(const RunConfig& cfg, const PipelineInputs& in) {
    auto m = base_metadata(cfg);
    m.fields["grid_sha256"] = in.grid_sha256;
    m.fields["solar_sha256"] = in.solar_sha256;
    return m;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) out += l + '\n';
    return out;
}

}  // namespace

GenDataSummary run_gen_data(const RunConfig& cfg) {
    const auto in = prepare_inputs(cfg);
    const auto batch = batch_options(cfg);
    const auto meta = input_metadata(cfg, in);
    fs::create_directories(cfg.out_dir);

    GenDataSummary s;
    s.l1_scale = resolve_l1_scale(cfg, in);
    std::vector<std::string> archive;

    write_artifact(out_path(cfg, "solar.csv"), format_solar_csv(in.solar), meta);
    s.files.push_back("solar.csv");

    auto cong = gen_congestion_dataset(in.net, in.solar, cfg.levels, cfg.dataset_days(), batch);
    s.congestion_rows = cong.rows.size();
    for (const auto& r : cong.rows) s.congested_rows += static_cast<std::size_t>(r.label);
    write_artifact(out_path(cfg, "congestion.csv"), format_congestion_csv(cong.rows), meta);
    write_artifact(out_path(cfg, "congestion_predicted.csv"),
                   format_congestion_csv(with_predicted_solar(cong.rows, in.predicted)), meta);
    s.files.insert(s.files.end(), {"congestion.csv", "congestion_predicted.csv"});
    archive = std::move(cong.archive);

    PenaltyConfig penalty{cfg.l2_congestion_penalty, s.l1_scale};
    for (const auto& level : cfg.levels) {
        auto sub = gen_subset_dataset(in.net, in.solar, in.predicted, level, penalty, cfg.dataset_days(), batch);
        s.subset_rows[level.name] = sub.rows.size();
        const auto name = subset_csv_name(level.name);
        write_artifact(out_path(cfg, name), format_subset_csv(sub.rows), meta);
        s.files.push_back(name);
        archive.insert(archive.end(), std::make_move_iterator(sub.archive.begin()),
                       std::make_move_iterator(sub.archive.end()));
    }
    write_artifact(out_path(cfg, "archive.jsonl"), join_lines(archive), meta);
    s.files.push_back("archive.jsonl");

    auto summary = meta;
    summary.fields["l1_scale"] = text::format_double(s.l1_scale);
    summary.fields["l2_congestion_penalty"] = text::format_double(cfg.l2_congestion_penalty);
    summary.fields["congestion_rows"] = std::to_string(s.congestion_rows);
    summary.fields["congested_rows"] = std::to_string(s.congested_rows);
    for (const auto& [level, n] : s.subset_rows) summary.fields["subset_rows." + level] = std::to_string(n);
    for (const auto& f : s.files) summary.fields["file." + f] = text::sha256_hex(text::read_file(out_path(cfg, f)));
    text::write_file(out_path(cfg, "dataset.meta"), summary.to_text());
    return s;
}

TrainTarget parse_train_target(const std::string& name) {
    if (name == "congestion-nn") return TrainTarget::CongestionNn;
    if (name == "congestion-svm") return TrainTarget::CongestionSvm;
    if (name == "subset") return TrainTarget::Subset;
    throw ConfigError("unknown training target '" + name + "'");
}

std::string to_string(TrainTarget t) {
    switch (t) {
        case TrainTarget::CongestionNn: return "congestion-nn";
        case TrainTarget::CongestionSvm: return "congestion-svm";
        case TrainTarget::Subset: return "subset";
    }
    return "?";
}

TrainSummary run_train(const RunConfig& cfg, TrainTarget target, bool predicted_variant) {
    cfg.validate();
    if (predicted_variant && target == TrainTarget::Subset) {
        throw ConfigError("the predicted-solar variant applies to congestion classifiers only");
    }
    const std::string data_name = target == TrainTarget::Subset ? subset_csv_name(cfg.subset_level)
                                  : predicted_variant          ? "congestion_predicted.csv"
                                                               : "congestion.csv";
    const auto data_path = out_path(cfg, data_name);
    const auto content = text::read_file(data_path);

    auto meta = base_metadata(cfg);
    meta.fields["dataset"] = data_name;
    meta.fields["dataset_sha256"] = text::sha256_hex(content);

    std::string name = to_string(target) + (predicted_variant ? "-predicted" : "");
    std::string report;
    std::string curve;
    ml::ModelFile model;

    if (target == TrainTarget::Subset) {
        const auto data = ml::parse_dataset_csv(content, subset_csv_header());
        RegressorOptions o;
        o.train_count = cfg.subset_train_count;
        o.steps = cfg.subset_steps;
        o.batch_size = cfg.batch_size;
        o.learning_rate = cfg.subset_learning_rate;
        o.l2_congestion_penalty = cfg.l2_congestion_penalty;
        o.seed = derive_seed(cfg.seed, kRegressorStream);
        auto r = train_penalty_regressor(data, o);
        report = r.report.to_text();
        curve = r.report.curve.to_csv();
        model = std::move(r.model);
    } else {
        auto data = ml::parse_dataset_csv(content, congestion_csv_header());
        const auto seed = derive_seed(cfg.seed, kClassifierStream);
        const auto n = predicted_variant ? cfg.predicted_subsample : cfg.congestion_subsample;
        if (n > 0) data = ml::subsample(data, n, seed);
        ClassifierOptions o;
        o.variant = predicted_variant ? SolarVariant::Predicted : SolarVariant::Actual;
        o.train_count = cfg.congestion_train_count;
        o.nn_steps = predicted_variant ? cfg.predicted_nn_steps : cfg.congestion_nn_steps;
        o.batch_size = cfg.batch_size;
        o.learning_rate = cfg.congestion_learning_rate;
        o.svm_lambda = cfg.svm_lambda;
        o.svm_epochs = cfg.svm_epochs;
        o.seed = seed;
        auto r = target == TrainTarget::CongestionNn ? train_congestion_nn(data, o) : train_congestion_svm(data, o);
        report = r.report.to_text();
        curve = r.report.curve.to_csv();
        model = std::move(r.model);
    }
    report += "dataset=" + data_name + "\ndataset_sha256=" + meta.fields["dataset_sha256"] + "\n";

    TrainSummary s;
    s.model_path = out_path(cfg, "models/" + name + ".model");
    s.curve_path = out_path(cfg, "models/" + name + ".curve.csv");
    s.report_text = report;
    write_artifact(s.model_path, ml::encode_model(model), meta);
    write_artifact(out_path(cfg, "models/" + name + ".report.txt"), report, meta);
    write_artifact(s.curve_path, curve, meta);
    return s;
}

std::string run_eval(const std::string& model_path, const std::string& csv_path) {
    const auto model = ml::load_model(model_path);
    const auto content = text::read_file(csv_path);
    std::ostringstream out;
    out << "model=" << model_path << "\ndata=" << csv_path << '\n';
    if (model.loss == ml::LossKind::SquaredError) {
        const auto data = ml::parse_dataset_csv(content, subset_csv_header());
        if (data.size() == 0) throw std::invalid_argument("dataset has no rows");
        const auto pred = predict_penalty(model, data.x);
        const auto [l1, l2] = component_error_proxies(pred, data.y, 50.0);
        out << "kind=penalty-regressor\nrows=" << data.size()
            << "\nmse=" << text::format_double(ml::mean_squared_error(pred, data.y))
            << "\nmean_baseline_mse=" << text::format_double(ml::mean_squared_error(
                                             ml::VectorXd::Constant(data.size(), data.y.mean()), data.y))
            << "\nl1_proxy=" << text::format_double(l1) << "\nl2_proxy=" << text::format_double(l2) << '\n';
    } else {
        const auto data = ml::parse_dataset_csv(content, congestion_csv_header());
        out << evaluate_classifier(model, data).to_text();
    }
    return out.str();
}

std::vector<Scenario> holdout_scenarios(const RunConfig& cfg, int n) {
    if (cfg.holdout_days < 1) throw ConfigError("no held-out days configured");
    auto all = scenarios_in(cfg.holdout_range(), cfg.level(cfg.subset_level));
    if (n < 0 || static_cast<std::size_t>(n) > all.size()) {
        throw ConfigError("requested " + std::to_string(n) + " scenarios, held-out days provide " +
                          std::to_string(all.size()));
    }
    all.resize(static_cast<std::size_t>(n));
    return all;
}

namespace {

double dataset_l1_scale(const RunConfig& cfg, const PipelineInputs& in) {
    const auto path = out_path(cfg, "dataset.meta");
    if (fs::exists(path)) {
        const auto m = Metadata::parse(text::read_file(path));
        const auto it = m.fields.find("l1_scale");
        if (it != m.fields.end()) {
            if (const auto v = text::parse_double(it->second)) return *v;
        }
    }
    return resolve_l1_scale(cfg, in);
}

std::string fmt4(double v) {
    std::ostringstream o;
    o.setf(std::ios::fixed);
    o.precision(4);
    o << v;
    return o.str();
}

}  // namespace

SelectResult run_select(const RunConfig& cfg, const SelectRequest& request) {
    if (request.scenarios.empty()) throw ConfigError("select: no scenarios requested");
    const auto in = prepare_inputs(cfg);
    const auto batch = batch_options(cfg);
    const auto model_path = request.model_path.empty() ? out_path(cfg, "models/subset.model") : request.model_path;
    const auto model = ml::load_model(model_path);
    const auto scorer = model_scorer(model);
    const auto candidates = cfg.candidate_set();
    const PenaltyConfig penalty{cfg.l2_congestion_penalty, dataset_l1_scale(cfg, in)};

    SelectResult result;
    std::ostringstream o;
    std::size_t within = 0;
    double regret_sum = 0.0;
    for (const auto& sc : request.scenarios) {
        const auto st = scenario_state(in.net, in.solar, in.predicted, sc, batch);
        Decision d;
        d.scenario = sc;
        d.scored = score_candidates(scorer, st.base_voltages, st.predicted_next, candidates);
        d.chosen = select_subset(scorer, st.base_voltages, st.predicted_next, candidates);

        o << "scenario day=" << sc.day << " slot=" << sc.slot << " level=" << sc.level.name
          << " base_converged=" << (st.base_converged ? 1 : 0) << '\n';
        if (request.oracle) {
            d.oracle = oracle_select(in.net, sc.level.scale, st.actual_next, st.predicted_next, candidates, penalty, batch);
            for (const auto& e : d.oracle) {
                if (e.candidate_index == d.chosen.candidate_index) d.chosen_true_total = e.total;
            }
            d.regret = d.chosen_true_total - d.oracle.front().total;
            regret_sum += d.regret;
            within += d.regret <= cfg.l2_congestion_penalty ? 1 : 0;
        }
        for (const auto& e : d.scored) {
            o << "  candidate=" << e.choice.label() << " predicted_total=" << fmt4(e.predicted_total);
            if (request.oracle) {
                for (const auto& t : d.oracle) {
                    if (t.candidate_index == e.candidate_index) {
                        o << " true_l1=" << fmt4(t.l1) << " true_l2=" << fmt4(t.l2) << " true_total=" << fmt4(t.total);
                    }
                }
            }
            o << '\n';
        }
        o << "  chosen=" << d.chosen.choice.label();
        if (request.oracle) {
            o << " oracle_best=" << d.oracle.front().choice.label() << " regret=" << fmt4(d.regret);
        }
        o << '\n';
        result.decisions.push_back(std::move(d));
    }
    if (request.oracle) {
        const auto n = request.scenarios.size();
        o << "summary scenarios=" << n << " within_l2=" << within
          << " within_l2_fraction=" << fmt4(static_cast<double>(within) / static_cast<double>(n))
          << " mean_regret=" << fmt4(regret_sum / static_cast<double>(n)) << '\n';
    }
    result.listing = o.str();
    return result;
}

}  // namespace gridsel
