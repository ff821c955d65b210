#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "specgame/experiment.hpp"

namespace {

specgame::ExperimentSpec load_spec(const std::string& config_path) {
    if (config_path.empty()) return specgame::parse_spec("");
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config: " + config_path);
    std::stringstream text;
    text << in.rdbuf();
    return specgame::parse_spec(text.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Speculation Game simulator and stylized-facts analyzer"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", report_path, in_dir;
    std::int64_t seed = -1;
    int trials = -1, figure = 0;

    auto* simulate = app.add_subcommand("simulate", "run seeded trials, write per-trial CSVs");
    simulate->add_option("--config", config_path, "key/value config file");
    simulate->add_option("--seed", seed, "master seed override");
    simulate->add_option("--trials", trials, "trial count override");
    simulate->add_option("--out", out_dir, "output directory");

    auto* analyze = app.add_subcommand("analyze", "compute diagnostics from trial CSVs");
    analyze->add_option("--in", in_dir, "directory with trial_*.csv")->required();
    analyze->add_option("--report", report_path, "stylized-facts report path")->required();
    analyze->add_option("--config", config_path, "key/value config file (analysis parameters)");

    auto* reproduce = app.add_subcommand("reproduce", "write plottable data for one figure");
    reproduce->add_option("--figure", figure, "figure id, 2..15")->required();
    reproduce->add_option("--config", config_path, "key/value config file");
    reproduce->add_option("--out", out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            specgame::ExperimentSpec spec = load_spec(config_path);
            if (seed >= 0) spec.game.seed = static_cast<std::uint64_t>(seed);
            if (trials >= 1) spec.trials = trials;
            const auto results = specgame::run_trials(spec);
            specgame::write_trial_csvs(results, out_dir);
            std::cout << "wrote " << results.size() << " trial(s) to " << out_dir
                      << '\n';
        } else if (analyze->parsed()) {
            const specgame::ExperimentSpec spec = load_spec(config_path);
            const auto trials_data = specgame::read_trial_csvs(in_dir);
            const auto analysis =
                specgame::analyze_trials(trials_data, spec.analysis);
            specgame::write_analysis_outputs(analysis, in_dir);
            specgame::write_report(analysis.report, report_path);
            int passed = 0;
            for (const auto& fact : analysis.report.facts)
                if (fact.status == specgame::FactStatus::pass) ++passed;
            std::cout << passed << "/" << analysis.report.facts.size()
                      << " stylized facts reproduced; report at " << report_path
                      << '\n';
        } else if (reproduce->parsed()) {
            specgame::ExperimentSpec spec = load_spec(config_path);
            specgame::reproduce_figure(figure, spec, out_dir);
            std::cout << "figure " << figure << " data written to " << out_dir
                      << '\n';
        }
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    }
    return 0;
}
