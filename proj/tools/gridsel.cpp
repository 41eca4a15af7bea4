// gridsel: grid validation, dataset generation, training, evaluation,
// solar-subset selection and curve plotting.
//
// Exit codes: 0 success, 1 validation or user error, 2 internal error.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "gridsel/pipeline.hpp"
#include "gridsel/plot.hpp"
#include "gridsel/text.hpp"

namespace {

using namespace gridsel;

struct UserError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GlobalFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> jobs;
};

RunConfig effective_config(const GlobalFlags& g) {
    RunConfig c = g.config.empty() ? RunConfig{} : load_run_config(g.config);
    if (g.seed) c.seed = *g.seed;
    if (g.out_dir) c.out_dir = *g.out_dir;
    if (g.jobs) c.jobs = *g.jobs;
    c.validate();
    return c;
}

int cmd_grid_validate(const std::string& path) {
    Network net;
    try {
        net = path.empty() ? reference_network() : parse_network(text::read_file(path));
    } catch (const ParseError& e) {
        std::cerr << (path.empty() ? "reference grid" : path) << ": " << e.what() << '\n';
        return 1;
    }
    bool ok = true;
    for (const auto& c : check_network(net)) {
        std::cout << (c.ok ? "ok   " : "FAIL ") << c.name;
        if (!c.detail.empty()) std::cout << ": " << c.detail;
        std::cout << '\n';
        ok = ok && c.ok;
    }
    std::cout << net.buses.size() << " buses, " << net.generators.size() << " generators, " << net.loads.size()
              << " loads, " << net.tie_line_count() << " tie-lines\n";
    return ok ? 0 : 1;
}

int cmd_gen_data(const RunConfig& cfg) {
    const auto s = run_gen_data(cfg);
    std::cout << "congestion rows=" << s.congestion_rows << " congested=" << s.congested_rows << '\n';
    for (const auto& [level, n] : s.subset_rows) std::cout << "subset " << level << " rows=" << n << '\n';
    std::cout << "l1_scale=" << text::format_double(s.l1_scale) << '\n';
    std::cout << "wrote " << s.files.size() << " files to " << cfg.out_dir << '\n';
    return 0;
}

int cmd_train(const RunConfig& cfg, const std::string& which, const std::string& variant) {
    if (variant != "actual" && variant != "predicted") throw UserError("--variant must be actual or predicted");
    const auto s = run_train(cfg, parse_train_target(which), variant == "predicted");
    std::cout << s.report_text << "model=" << s.model_path << "\ncurve=" << s.curve_path << '\n';
    return 0;
}

int cmd_select(const RunConfig& cfg, const std::string& model, int day, int slot, int sweep, const std::string& level,
               bool oracle) {
    SelectRequest req;
    req.model_path = model;
    req.oracle = oracle;
    if (sweep > 0) {
        req.scenarios = holdout_scenarios(cfg, sweep);
    } else {
        if (day < 0 || slot < 0) throw UserError("select needs --day and --slot, or --sweep N");
        req.scenarios.push_back({day, slot, cfg.level(level.empty() ? cfg.subset_level : level)});
    }
    const auto r = run_select(cfg, req);
    write_artifact((std::filesystem::path(cfg.out_dir) / "decisions.txt").string(), r.listing, base_metadata(cfg));
    std::cout << r.listing;
    return 0;
}

int cmd_plot(const std::string& csv, const std::string& out, const std::string& title) {
    const auto table = parse_curve_csv(text::read_file(csv));
    text::write_file(out, render_svg(table, title.empty() ? std::filesystem::path(csv).filename().string() : title));
    std::cout << "wrote " << out << " (" << table.steps.size() << " points, " << table.columns.size() << " series)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solar generator subset selection under congestion"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);

    GlobalFlags g;
    app.add_option("--config", g.config, "INI run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "Override the run seed");
    app.add_option("--out-dir", g.out_dir, "Override the output directory");
    app.add_option("--jobs", g.jobs, "Worker threads for load-flow batches (0: all cores)")->check(CLI::NonNegativeNumber);

    auto* grid = app.add_subcommand("grid", "Grid file utilities");
    grid->require_subcommand(1);
    auto* validate = grid->add_subcommand("validate", "Parse and check a grid file");
    std::string grid_path;
    validate->add_option("path", grid_path, "Grid file (default: built-in reference grid)");

    auto* gen = app.add_subcommand("gen-data", "Generate congestion and subset datasets");

    auto* train = app.add_subcommand("train", "Train a model from generated datasets");
    std::string which;
    std::string variant = "actual";
    train->add_option("model", which, "congestion-nn | congestion-svm | subset")
        ->required()
        ->check(CLI::IsMember({"congestion-nn", "congestion-svm", "subset"}));
    train->add_option("--variant", variant, "Solar features for the congestion models: actual | predicted");

    auto* eval = app.add_subcommand("eval", "Evaluate a model file on a dataset CSV");
    std::string eval_model;
    std::string eval_data;
    eval->add_option("--model", eval_model, "Model file")->required();
    eval->add_option("--data", eval_data, "Dataset CSV")->required();

    auto* select = app.add_subcommand("select", "Pick the solar subset with minimum predicted penalty");
    std::string select_model;
    std::string select_level;
    int day = -1;
    int slot = -1;
    int sweep = 0;
    bool oracle = false;
    std::string candidates;
    select->add_option("--model", select_model, "Penalty regressor (default: <out-dir>/models/subset.model)");
    select->add_option("--day", day, "Day index into the solar data");
    select->add_option("--slot", slot, "15-minute slot of the base state (0-95)");
    select->add_option("--level", select_level, "Load level name (default: the subset level)");
    select->add_option("--sweep", sweep, "Run the first N held-out scenarios instead of one");
    select->add_flag("--oracle", oracle, "Also simulate every candidate and report regret");
    select->add_option("--candidates", candidates, "all | off-only")->check(CLI::IsMember({"all", "off-only"}));

    auto* plot = app.add_subcommand("plot", "Render a curve CSV as an SVG line chart");
    std::string curve;
    std::string svg_out;
    std::string title;
    plot->add_option("curve", curve, "Curve CSV")->required();
    plot->add_option("-o,--output", svg_out, "Output SVG")->required();
    plot->add_option("--title", title, "Chart title");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed()) return cmd_grid_validate(grid_path);
        if (plot->parsed()) return cmd_plot(curve, svg_out, title);
        if (eval->parsed()) {
            std::cout << run_eval(eval_model, eval_data);
            return 0;
        }
        RunConfig cfg = effective_config(g);
        if (gen->parsed()) return cmd_gen_data(cfg);
        if (train->parsed()) return cmd_train(cfg, which, variant);
        if (select->parsed()) {
            if (!candidates.empty()) cfg.candidates = candidates;
            return cmd_select(cfg, select_model, day, slot, sweep, select_level, oracle);
        }
    } catch (const UserError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const SolarCsvError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ml::ModelFormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const PlotError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const text::FileError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
