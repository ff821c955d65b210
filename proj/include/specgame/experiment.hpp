#pragma once

#include <map>
#include <string>
#include <vector>

#include "specgame/config.hpp"
#include "specgame/engine.hpp"
#include "specgame/fitting.hpp"
#include "specgame/stats.hpp"

namespace specgame {

struct AnalysisParams {
    int acf_max_lag = 100;         // return ACF
    int vol_acf_max_lag = 1000;    // absolute-return ACF
    int vol_fit_max_lag = 100;     // exponential-decay fit range
    std::vector<int> kurtosis_scales = {5, 10, 20, 40, 80, 160, 320, 640, 1280};
    int volume_window = 5;
    int volume_window_coarse = 20;
    double theta = 0.01;
    int leadlag_dt = 10;
    int leadlag_n = 5;
    int leadlag_stride = 50;
    int leadlag_max_lag = 10;
    int leverage_max_lag = 50;
    bool garch = true;
};

struct ExperimentSpec {
    GameConfig game;
    int trials = 10;
    AnalysisParams analysis;
    std::string out_dir = "out";
};

// Flat key/value text, '#' comments. Omitted keys take the baseline
// defaults; unknown keys and out-of-range values are rejected with the key
// name in the message.
ExperimentSpec parse_spec(const std::string& text);
std::string serialize_spec(const ExperimentSpec& spec);

enum class FactStatus { pass, fail, not_applicable };

struct FactEntry {
    std::string name;
    FactStatus status = FactStatus::not_applicable;
    std::map<std::string, double> measured;
    std::map<std::string, double> thresholds;
    std::string note;
};

// Eleven entries, one per stylized fact; gain/loss asymmetry is recorded
// as expected-absent.
struct StylizedFactReport {
    std::vector<FactEntry> facts;
};

struct AnalysisResult {
    AcfCurve acf_returns;            // trial-averaged
    AcfCurve acf_abs_returns;
    ExponentialDecayFit vol_decay;
    KurtosisCurve kurtosis;
    double volume_corr_fine = 0.0;   // at volume_window
    double volume_corr_coarse = 0.0; // at volume_window_coarse
    VolumeVolatility volume_scatter; // first trial, for plotting
    LeadLagResult lead_lag;
    LeverageCurve leverage_curve;
    HorizonDistribution horizon_pos; // trial-pooled
    HorizonDistribution horizon_neg;
    double ks_gain_loss = 0.0;
    double ks_critical = 0.0;
    double mean_return_kurtosis = 0.0;
    double mean_residual_kurtosis = 0.0;
    PowerLawFit power_law;           // pooled positive normalized returns
    ExponentialTailFit exponential_tail;
    VuongResult vuong;
    std::vector<double> pooled_positive_returns;
    StylizedFactReport report;
};

// Trial k runs on Rng::substream(master seed, k); trials execute
// concurrently when OpenMP has threads available.
std::vector<TrialResult> run_trials(const ExperimentSpec& spec);

AnalysisResult analyze_trials(const std::vector<TrialResult>& trials,
                              const AnalysisParams& params);

struct ExperimentResult {
    std::vector<TrialResult> trials;
    AnalysisResult analysis;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

// Per-trial CSVs: t,p,dp,h,P,D,q_buy,q_sell,n_buyers,n_sellers,n_replaced.
void write_trial_csvs(const std::vector<TrialResult>& trials,
                      const std::string& directory);
std::vector<TrialResult> read_trial_csvs(const std::string& directory);

// Curve CSVs (x,y[,band]) plus the JSON stylized-facts report.
void write_analysis_outputs(const AnalysisResult& analysis,
                            const std::string& directory);
void write_report(const StylizedFactReport& report, const std::string& path);

// Minimal experiment for one of the paper-style figures (2..15); writes
// that figure's plottable data into the directory.
void reproduce_figure(int figure, ExperimentSpec spec,
                      const std::string& directory);

}  // namespace specgame
