#include "specgame/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "specgame/csv.hpp"

namespace specgame {
namespace {

using nlohmann::json;

long long parse_int(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    long long parsed;
    try {
        parsed = std::stoll(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("key '" + key + "': not an integer: " + value);
    }
    if (pos != value.size())
        throw std::invalid_argument("key '" + key + "': not an integer: " + value);
    return parsed;
}

double parse_real(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double parsed;
    try {
        parsed = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("key '" + key + "': not a number: " + value);
    }
    if (pos != value.size())
        throw std::invalid_argument("key '" + key + "': not a number: " + value);
    return parsed;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::stringstream fields(value);
    std::string cell;
    while (std::getline(fields, cell, ';'))
        out.push_back(static_cast<int>(parse_int(key, cell)));
    if (out.empty()) throw std::invalid_argument("key '" + key + "': empty list");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("key '" + key + "': not a boolean: " + value);
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw std::invalid_argument("key '" + key + "': " + what);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> average_pointwise(const std::vector<std::vector<double>>& rows) {
    std::vector<double> out(rows.at(0).size(), 0.0);
    for (const auto& row : rows)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += row[i];
    for (double& v : out) v /= static_cast<double>(rows.size());
    return out;
}

// Two-sample KS statistic between discrete horizon-count maps, plus the 5%
// critical value. The horizons come from overlapping start points, so
// consecutive samples are strongly dependent; the critical value uses
// effective sample sizes of one independent passage per mean waiting time
// instead of the raw counts.
std::pair<double, double> horizon_ks(const std::map<int, double>& counts_a,
                                     const std::map<int, double>& counts_b) {
    double total_a = 0.0, total_b = 0.0;
    double horizon_a = 0.0, horizon_b = 0.0;
    for (auto [t, c] : counts_a) {
        total_a += c;
        horizon_a += t * c;
    }
    for (auto [t, c] : counts_b) {
        total_b += c;
        horizon_b += t * c;
    }
    if (total_a <= 0.0 || total_b <= 0.0)
        throw std::invalid_argument("empty horizon distribution");

    std::vector<int> support;
    for (auto [t, c] : counts_a) support.push_back(t);
    for (auto [t, c] : counts_b) support.push_back(t);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    double cdf_a = 0.0, cdf_b = 0.0, ks = 0.0;
    for (int t : support) {
        if (auto it = counts_a.find(t); it != counts_a.end()) cdf_a += it->second;
        if (auto it = counts_b.find(t); it != counts_b.end()) cdf_b += it->second;
        ks = std::max(ks, std::abs(cdf_a / total_a - cdf_b / total_b));
    }
    const double eff_a = std::max(total_a / std::max(horizon_a / total_a, 1.0), 1.0);
    const double eff_b = std::max(total_b / std::max(horizon_b / total_b, 1.0), 1.0);
    const double critical = 1.358 * std::sqrt((eff_a + eff_b) / (eff_a * eff_b));
    return {ks, critical};
}

std::string status_name(FactStatus status) {
    switch (status) {
        case FactStatus::pass: return "pass";
        case FactStatus::fail: return "fail";
        default: return "not-applicable";
    }
}

CsvTable curve_table(const std::vector<int>& x, const std::vector<double>& y) {
    CsvTable table;
    table.columns = {"x", "y"};
    for (std::size_t i = 0; i < x.size(); ++i)
        table.rows.push_back({static_cast<double>(x[i]), y[i]});
    return table;
}

CsvTable curve_table(const std::vector<int>& x, const std::vector<double>& y,
                     double band) {
    CsvTable table;
    table.columns = {"x", "y", "band"};
    for (std::size_t i = 0; i < x.size(); ++i)
        table.rows.push_back({static_cast<double>(x[i]), y[i], band});
    return table;
}

CsvTable histogram_table(const std::vector<double>& values, int bins) {
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    const double width = (hi - lo) / bins;
    std::vector<double> counts(bins, 0.0);
    for (double v : values) {
        int b = width > 0 ? static_cast<int>((v - lo) / width) : 0;
        counts[std::clamp(b, 0, bins - 1)] += 1.0;
    }
    CsvTable table;
    table.columns = {"x", "y"};
    for (int b = 0; b < bins; ++b)
        table.rows.push_back({lo + (b + 0.5) * width,
                              counts[b] / (values.size() * std::max(width, 1e-300))});
    return table;
}

CsvTable ccdf_table(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    CsvTable table;
    table.columns = {"x", "y"};
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        table.rows.push_back({values[i], (n - static_cast<double>(i)) / n});
    return table;
}

}  // namespace

ExperimentSpec parse_spec(const std::string& text) {
    ExperimentSpec spec;
    std::stringstream lines(text);
    std::string line;
    int line_number = 0;
    while (std::getline(lines, line)) {
        ++line_number;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(line_number) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "n_players") {
            spec.game.n_players = static_cast<int>(parse_int(key, value));
            require(spec.game.n_players >= 1, key, "must be >= 1");
        } else if (key == "memory") {
            spec.game.memory = static_cast<int>(parse_int(key, value));
            require(spec.game.memory >= 1, key, "must be >= 1");
        } else if (key == "n_strategies") {
            spec.game.n_strategies = static_cast<int>(parse_int(key, value));
            require(spec.game.n_strategies >= 1, key, "must be >= 1");
        } else if (key == "board_lot") {
            spec.game.board_lot = static_cast<int>(parse_int(key, value));
            require(spec.game.board_lot >= 1, key, "must be >= 1");
        } else if (key == "cognitive_threshold") {
            spec.game.cognitive_threshold = parse_real(key, value);
            require(spec.game.cognitive_threshold > 0, key, "must be > 0");
        } else if (key == "initial_price") {
            spec.game.initial_price = parse_real(key, value);
        } else if (key == "steps") {
            spec.game.steps = static_cast<int>(parse_int(key, value));
            require(spec.game.steps >= 1, key, "must be >= 1");
        } else if (key == "seed") {
            spec.game.seed = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (key == "trials") {
            spec.trials = static_cast<int>(parse_int(key, value));
            require(spec.trials >= 1, key, "must be >= 1");
        } else if (key == "acf_max_lag") {
            spec.analysis.acf_max_lag = static_cast<int>(parse_int(key, value));
            require(spec.analysis.acf_max_lag >= 1, key, "must be >= 1");
        } else if (key == "vol_acf_max_lag") {
            spec.analysis.vol_acf_max_lag = static_cast<int>(parse_int(key, value));
            require(spec.analysis.vol_acf_max_lag >= 1, key, "must be >= 1");
        } else if (key == "vol_fit_max_lag") {
            spec.analysis.vol_fit_max_lag = static_cast<int>(parse_int(key, value));
            require(spec.analysis.vol_fit_max_lag >= 2, key, "must be >= 2");
        } else if (key == "kurtosis_scales") {
            spec.analysis.kurtosis_scales = parse_int_list(key, value);
        } else if (key == "volume_window") {
            spec.analysis.volume_window = static_cast<int>(parse_int(key, value));
            require(spec.analysis.volume_window >= 1, key, "must be >= 1");
        } else if (key == "volume_window_coarse") {
            spec.analysis.volume_window_coarse =
                static_cast<int>(parse_int(key, value));
            require(spec.analysis.volume_window_coarse >= 1, key, "must be >= 1");
        } else if (key == "theta") {
            spec.analysis.theta = parse_real(key, value);
            require(spec.analysis.theta > 0, key, "must be > 0");
        } else if (key == "leadlag_dt") {
            spec.analysis.leadlag_dt = static_cast<int>(parse_int(key, value));
            require(spec.analysis.leadlag_dt >= 1, key, "must be >= 1");
        } else if (key == "leadlag_n") {
            spec.analysis.leadlag_n = static_cast<int>(parse_int(key, value));
            require(spec.analysis.leadlag_n >= 1, key, "must be >= 1");
        } else if (key == "leadlag_stride") {
            spec.analysis.leadlag_stride = static_cast<int>(parse_int(key, value));
            require(spec.analysis.leadlag_stride >= 1, key, "must be >= 1");
        } else if (key == "leadlag_max_lag") {
            spec.analysis.leadlag_max_lag = static_cast<int>(parse_int(key, value));
            require(spec.analysis.leadlag_max_lag >= 1, key, "must be >= 1");
        } else if (key == "leverage_max_lag") {
            spec.analysis.leverage_max_lag = static_cast<int>(parse_int(key, value));
            require(spec.analysis.leverage_max_lag >= 1, key, "must be >= 1");
        } else if (key == "garch") {
            spec.analysis.garch = parse_bool(key, value);
        } else if (key == "out_dir") {
            spec.out_dir = value;
        } else {
            throw std::invalid_argument("line " + std::to_string(line_number) +
                                        ": unknown key '" + key + "'");
        }
    }
    return spec;
}

std::string serialize_spec(const ExperimentSpec& spec) {
    std::stringstream out;
    out << "n_players = " << spec.game.n_players << '\n'
        << "memory = " << spec.game.memory << '\n'
        << "n_strategies = " << spec.game.n_strategies << '\n'
        << "board_lot = " << spec.game.board_lot << '\n';
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", spec.game.cognitive_threshold);
    out << "cognitive_threshold = " << buffer << '\n';
    std::snprintf(buffer, sizeof buffer, "%.17g", spec.game.initial_price);
    out << "initial_price = " << buffer << '\n';
    out << "steps = " << spec.game.steps << '\n'
        << "seed = " << spec.game.seed << '\n'
        << "trials = " << spec.trials << '\n'
        << "acf_max_lag = " << spec.analysis.acf_max_lag << '\n'
        << "vol_acf_max_lag = " << spec.analysis.vol_acf_max_lag << '\n'
        << "vol_fit_max_lag = " << spec.analysis.vol_fit_max_lag << '\n';
    out << "kurtosis_scales = ";
    for (std::size_t i = 0; i < spec.analysis.kurtosis_scales.size(); ++i)
        out << (i ? ";" : "") << spec.analysis.kurtosis_scales[i];
    out << '\n';
    out << "volume_window = " << spec.analysis.volume_window << '\n'
        << "volume_window_coarse = " << spec.analysis.volume_window_coarse << '\n';
    std::snprintf(buffer, sizeof buffer, "%.17g", spec.analysis.theta);
    out << "theta = " << buffer << '\n';
    out << "leadlag_dt = " << spec.analysis.leadlag_dt << '\n'
        << "leadlag_n = " << spec.analysis.leadlag_n << '\n'
        << "leadlag_stride = " << spec.analysis.leadlag_stride << '\n'
        << "leadlag_max_lag = " << spec.analysis.leadlag_max_lag << '\n'
        << "leverage_max_lag = " << spec.analysis.leverage_max_lag << '\n'
        << "garch = " << (spec.analysis.garch ? "true" : "false") << '\n'
        << "out_dir = " << spec.out_dir << '\n';
    return out.str();
}

std::vector<TrialResult> run_trials(const ExperimentSpec& spec) {
    spec.game.validate();
    std::vector<TrialResult> trials(spec.trials);
    // Trials are independent; the engine's inner loops stay serial here so
    // the per-trial trajectories do not depend on the thread count.
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < spec.trials; ++k) {
        trials[k] = run_trial(
            spec.game,
            Rng::substream(spec.game.seed, static_cast<std::uint64_t>(k)),
            /*parallel=*/false);
    }
    return trials;
}

AnalysisResult analyze_trials(const std::vector<TrialResult>& trials,
                              const AnalysisParams& params) {
    if (trials.empty()) throw std::invalid_argument("no trials to analyze");
    const int n_trials = static_cast<int>(trials.size());

    struct PerTrial {
        std::vector<double> acf_r, acf_v, kurtoses, rho_cf, leverage_values;
        std::vector<bool> kurtosis_defined;
        double band_r = 0, band_v = 0, band_cf = 0;
        double volume_corr_fine = 0, volume_corr_coarse = 0;
        double raw_kurtosis = 0, residual_kurtosis = 0;
        HorizonDistribution horizon_pos, horizon_neg;
        std::vector<double> positive_normalized;
    };
    std::vector<PerTrial> per_trial(n_trials);

#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < n_trials; ++k) {
        const TrialResult& trial = trials[k];
        PerTrial& out = per_trial[k];
        const ReturnSeries returns = log_returns(trial.prices, 1);
        const std::vector<double> normalized = normalize(returns.values);

        std::vector<double> abs_returns(returns.values.size());
        for (std::size_t i = 0; i < abs_returns.size(); ++i)
            abs_returns[i] = std::abs(returns.values[i]);

        const AcfCurve acf_r = autocorrelation(returns.values, params.acf_max_lag);
        const AcfCurve acf_v = autocorrelation(abs_returns, params.vol_acf_max_lag);
        out.acf_r = acf_r.correlations;
        out.acf_v = acf_v.correlations;
        out.band_r = acf_r.band_halfwidth;
        out.band_v = acf_v.band_halfwidth;

        const KurtosisCurve kc = kurtosis_curve(returns.values, params.kurtosis_scales);
        out.kurtoses = kc.kurtoses;
        out.kurtosis_defined = kc.defined;

        std::vector<long long> buy(trial.records.size()), sell(trial.records.size());
        for (std::size_t i = 0; i < trial.records.size(); ++i) {
            buy[i] = trial.records[i].buy_volume;
            sell[i] = trial.records[i].sell_volume;
        }
        out.volume_corr_fine =
            volume_volatility(buy, sell, abs_returns, params.volume_window)
                .correlation;
        out.volume_corr_coarse =
            volume_volatility(buy, sell, abs_returns, params.volume_window_coarse)
                .correlation;

        const CoarseFineSeries cf = coarse_fine_volatility(
            returns.values, params.leadlag_dt, params.leadlag_n,
            params.leadlag_stride);
        const LeadLagResult ll = lead_lag_asymmetry(cf, params.leadlag_max_lag);
        out.rho_cf = ll.rho_cf;
        out.band_cf = ll.band_halfwidth;

        out.leverage_values =
            leverage(returns.values, params.leverage_max_lag).values;

        out.horizon_pos = inverse_statistics(trial.prices, params.theta, +1);
        out.horizon_neg = inverse_statistics(trial.prices, params.theta, -1);

        out.raw_kurtosis = excess_kurtosis(returns.values);
        if (params.garch) {
            const GarchFit fit = fit_garch11(normalized);
            out.residual_kurtosis =
                excess_kurtosis(garch_residuals(normalized, fit));
        }

        for (double r : normalized)
            if (r > 0.0) out.positive_normalized.push_back(r);
    }

    AnalysisResult result;

    {  // averaged ACF curves
        std::vector<std::vector<double>> rows_r, rows_v;
        for (const auto& t : per_trial) {
            rows_r.push_back(t.acf_r);
            rows_v.push_back(t.acf_v);
        }
        result.acf_returns.correlations = average_pointwise(rows_r);
        result.acf_abs_returns.correlations = average_pointwise(rows_v);
        for (int tau = 0; tau <= params.acf_max_lag; ++tau)
            result.acf_returns.lags.push_back(tau);
        for (int tau = 0; tau <= params.vol_acf_max_lag; ++tau)
            result.acf_abs_returns.lags.push_back(tau);
        result.acf_returns.band_halfwidth = per_trial[0].band_r;
        result.acf_abs_returns.band_halfwidth = per_trial[0].band_v;
    }

    {  // fit the decay over the initial positive stretch of the volatility ACF
        int fit_hi = 0;
        for (int tau = 1; tau <= params.vol_fit_max_lag; ++tau) {
            if (result.acf_abs_returns.correlations[tau] <= 0.0) break;
            fit_hi = tau;
        }
        if (fit_hi < 2)
            throw std::runtime_error(
                "volatility autocorrelation is not positive at short lags");
        result.vol_decay = fit_exponential_decay(result.acf_abs_returns, 1, fit_hi);
    }

    {  // averaged kurtosis curve, scales where every trial had variance
        result.kurtosis.scales = params.kurtosis_scales;
        for (std::size_t s = 0; s < params.kurtosis_scales.size(); ++s) {
            double sum = 0.0;
            bool defined = true;
            for (const auto& t : per_trial) {
                defined = defined && t.kurtosis_defined[s];
                sum += t.kurtoses[s];
            }
            result.kurtosis.kurtoses.push_back(defined ? sum / n_trials : 0.0);
            result.kurtosis.defined.push_back(defined);
            result.kurtosis.sample_sizes.push_back(0);
        }
    }

    for (const auto& t : per_trial) {
        result.volume_corr_fine += t.volume_corr_fine / n_trials;
        result.volume_corr_coarse += t.volume_corr_coarse / n_trials;
        result.mean_return_kurtosis += t.raw_kurtosis / n_trials;
        result.mean_residual_kurtosis += t.residual_kurtosis / n_trials;
    }

    {  // scatter data for plotting, first trial only
        const TrialResult& trial = trials[0];
        const ReturnSeries returns = log_returns(trial.prices, 1);
        std::vector<double> abs_returns(returns.values.size());
        for (std::size_t i = 0; i < abs_returns.size(); ++i)
            abs_returns[i] = std::abs(returns.values[i]);
        std::vector<long long> buy(trial.records.size()), sell(trial.records.size());
        for (std::size_t i = 0; i < trial.records.size(); ++i) {
            buy[i] = trial.records[i].buy_volume;
            sell[i] = trial.records[i].sell_volume;
        }
        result.volume_scatter =
            volume_volatility(buy, sell, abs_returns, params.volume_window);
    }

    {  // averaged lead-lag correlation; asymmetry recomputed from the average
        std::vector<std::vector<double>> rows;
        for (const auto& t : per_trial) rows.push_back(t.rho_cf);
        result.lead_lag.rho_cf = average_pointwise(rows);
        for (int tau = -params.leadlag_max_lag; tau <= params.leadlag_max_lag; ++tau)
            result.lead_lag.lags.push_back(tau);
        for (int tau = 1; tau <= params.leadlag_max_lag; ++tau)
            result.lead_lag.asymmetry.push_back(
                result.lead_lag.rho_cf[params.leadlag_max_lag + tau] -
                result.lead_lag.rho_cf[params.leadlag_max_lag - tau]);
        // the averaged curve pools every trial's coarse/fine samples, so the
        // 95% band uses the total sample count
        result.lead_lag.band_halfwidth =
            per_trial[0].band_cf / std::sqrt(static_cast<double>(n_trials));
        result.lead_lag.sample_dt = params.leadlag_dt;
        result.lead_lag.sample_n = params.leadlag_n;
        result.lead_lag.sample_stride = params.leadlag_stride;
    }

    {  // averaged leverage curve
        std::vector<std::vector<double>> rows;
        for (const auto& t : per_trial) rows.push_back(t.leverage_values);
        result.leverage_curve.values = average_pointwise(rows);
        for (int tau = -params.leverage_max_lag; tau <= params.leverage_max_lag;
             ++tau)
            result.leverage_curve.lags.push_back(tau);
    }

    {  // horizon distributions pooled by counts across trials
        std::map<int, double> counts_pos, counts_neg;
        std::size_t observed_pos = 0, censored_pos = 0;
        std::size_t observed_neg = 0, censored_neg = 0;
        for (const auto& t : per_trial) {
            for (auto [horizon, p] : t.horizon_pos.histogram)
                counts_pos[horizon] +=
                    p * static_cast<double>(t.horizon_pos.observed_count);
            for (auto [horizon, p] : t.horizon_neg.histogram)
                counts_neg[horizon] +=
                    p * static_cast<double>(t.horizon_neg.observed_count);
            observed_pos += t.horizon_pos.observed_count;
            censored_pos += t.horizon_pos.censored_count;
            observed_neg += t.horizon_neg.observed_count;
            censored_neg += t.horizon_neg.censored_count;
        }
        result.horizon_pos.theta = params.theta;
        result.horizon_pos.sign = +1;
        result.horizon_pos.observed_count = observed_pos;
        result.horizon_pos.censored_count = censored_pos;
        for (auto [horizon, c] : counts_pos)
            result.horizon_pos.histogram[horizon] = c / observed_pos;
        result.horizon_neg.theta = params.theta;
        result.horizon_neg.sign = -1;
        result.horizon_neg.observed_count = observed_neg;
        result.horizon_neg.censored_count = censored_neg;
        for (auto [horizon, c] : counts_neg)
            result.horizon_neg.histogram[horizon] = c / observed_neg;
        const auto [ks, critical] = horizon_ks(counts_pos, counts_neg);
        result.ks_gain_loss = ks;
        result.ks_critical = critical;
    }

    {  // pooled positive normalized returns: tail fit and Vuong's test
        for (const auto& t : per_trial)
            result.pooled_positive_returns.insert(
                result.pooled_positive_returns.end(),
                t.positive_normalized.begin(), t.positive_normalized.end());
        result.power_law = fit_powerlaw_tail(result.pooled_positive_returns);
        result.exponential_tail = fit_exponential_tail(
            result.pooled_positive_returns, result.power_law.x_min);
        std::vector<double> tail;
        for (double x : result.pooled_positive_returns)
            if (x >= result.power_law.x_min) tail.push_back(x);
        result.vuong = vuong_test(tail, result.power_law, result.exponential_tail);
    }

    // --- stylized-facts report, Table-2 style ---
    StylizedFactReport& report = result.report;
    auto add = [&report](FactEntry entry) { report.facts.push_back(std::move(entry)); };
    auto verdict = [](bool ok) { return ok ? FactStatus::pass : FactStatus::fail; };

    {
        FactEntry e;
        e.name = "volatility-clustering";
        const double rho1 = result.acf_abs_returns.correlations[1];
        e.measured = {{"rho_v_1", rho1}};
        e.thresholds = {{"band", result.acf_abs_returns.band_halfwidth}};
        e.status = verdict(rho1 > result.acf_abs_returns.band_halfwidth);
        add(e);
    }
    {
        FactEntry e;
        e.name = "intermittency";
        e.measured = {{"mean_excess_kurtosis", result.mean_return_kurtosis}};
        e.thresholds = {{"min_excess_kurtosis", 1.0}};
        e.status = verdict(result.mean_return_kurtosis > 1.0);
        add(e);
    }
    {
        FactEntry e;
        e.name = "heavy-tails";
        e.measured = {{"alpha", result.power_law.alpha},
                      {"x_min", result.power_law.x_min},
                      {"n_tail", static_cast<double>(result.power_law.n_tail)},
                      {"vuong_lr", result.vuong.lr},
                      {"vuong_p", result.vuong.p_value}};
        e.thresholds = {{"alpha_min", 2.0}, {"alpha_max", 5.0}, {"p_max", 0.1}};
        e.status = verdict(result.power_law.alpha >= 2.0 &&
                           result.power_law.alpha <= 5.0 &&
                           result.vuong.favored == FavoredModel::power_law);
        add(e);
    }
    {
        FactEntry e;
        e.name = "no-return-autocorrelation";
        const double band = result.acf_returns.band_halfwidth;
        int inside = 0, total = 0;
        for (int tau = 20; tau <= params.acf_max_lag; ++tau) {
            ++total;
            if (std::abs(result.acf_returns.correlations[tau]) < band) ++inside;
        }
        int decay_lag = params.acf_max_lag;
        for (int tau = 1; tau <= params.acf_max_lag; ++tau)
            if (std::abs(result.acf_returns.correlations[tau]) < band) {
                decay_lag = tau;
                break;
            }
        const double fraction = static_cast<double>(inside) / total;
        e.measured = {{"inside_band_fraction", fraction},
                      {"decay_lag", static_cast<double>(decay_lag)}};
        e.thresholds = {{"min_fraction", 0.9},
                        {"max_decay_lag", 24.0},
                        {"band", band}};
        e.status = verdict(fraction >= 0.9 && decay_lag <= 24);
        add(e);
    }
    {
        FactEntry e;
        e.name = "slow-volatility-decay";
        int positive = 0;
        for (int tau = 1; tau <= params.vol_acf_max_lag; ++tau)
            if (result.acf_abs_returns.correlations[tau] > 0.0) ++positive;
        const double positive_fraction =
            static_cast<double>(positive) / params.vol_acf_max_lag;
        e.measured = {{"decay_rate", result.vol_decay.rate},
                      {"amplitude", result.vol_decay.amplitude},
                      {"positive_fraction", positive_fraction}};
        e.thresholds = {{"rate_min", 3e-3},
                        {"rate_max", 1.2e-2},
                        {"min_positive_fraction", 0.9}};
        e.status = verdict(result.vol_decay.rate >= 3e-3 &&
                           result.vol_decay.rate <= 1.2e-2 &&
                           positive_fraction >= 0.9);
        add(e);
    }
    {
        FactEntry e;
        e.name = "volume-volatility-correlation";
        e.measured = {{"correlation_fine", result.volume_corr_fine},
                      {"correlation_coarse", result.volume_corr_coarse}};
        e.thresholds = {{"min_correlation", 0.6}};
        e.status = verdict(result.volume_corr_fine >= 0.6 &&
                           result.volume_corr_coarse >= result.volume_corr_fine);
        add(e);
    }
    {
        FactEntry e;
        e.name = "aggregational-gaussianity";
        // Compare the smallest, a middle, and the largest defined scales
        // (20, 80, 1280 under the baseline scale list).
        std::vector<std::pair<int, double>> defined;
        for (std::size_t s = 0; s < result.kurtosis.scales.size(); ++s)
            if (result.kurtosis.defined[s] && result.kurtosis.scales[s] >= 20)
                defined.emplace_back(result.kurtosis.scales[s],
                                     result.kurtosis.kurtoses[s]);
        if (defined.size() < 3) {
            e.status = FactStatus::not_applicable;
            e.note = "not enough defined aggregation scales";
        } else {
            std::size_t mid = defined.size() / 2;
            for (std::size_t s = 0; s < defined.size(); ++s)
                if (defined[s].first == 80) mid = s;
            const auto [s_lo, k_lo] = defined.front();
            const auto [s_mid, k_mid] = defined[mid];
            const auto [s_hi, k_hi] = defined.back();
            e.measured = {{"kurtosis_" + std::to_string(s_lo), k_lo},
                          {"kurtosis_" + std::to_string(s_mid), k_mid},
                          {"kurtosis_" + std::to_string(s_hi), k_hi}};
            e.status = verdict(k_hi < k_mid && k_mid < k_lo);
        }
        add(e);
    }
    {
        FactEntry e;
        e.name = "conditional-heavy-tails";
        e.measured = {{"residual_kurtosis", result.mean_residual_kurtosis},
                      {"return_kurtosis", result.mean_return_kurtosis}};
        if (params.garch) {
            e.status = verdict(result.mean_residual_kurtosis > 0.0 &&
                               result.mean_residual_kurtosis <
                                   result.mean_return_kurtosis);
        } else {
            e.status = FactStatus::not_applicable;
            e.note = "GARCH analysis disabled";
        }
        add(e);
    }
    {
        FactEntry e;
        e.name = "time-scale-asymmetry";
        const double band = result.lead_lag.band_halfwidth;
        bool negative_123 = true;
        for (int tau = 1; tau <= 3 && tau <= params.leadlag_max_lag; ++tau)
            negative_123 =
                negative_123 && result.lead_lag.asymmetry[tau - 1] < 0.0;
        const double asym1 = result.lead_lag.asymmetry[0];
        e.measured = {{"asymmetry_1", asym1},
                      {"asymmetry_2", result.lead_lag.asymmetry[1]},
                      {"asymmetry_3", result.lead_lag.asymmetry[2]}};
        e.thresholds = {{"band", band}};
        e.status = verdict(negative_123 && asym1 < -band);
        add(e);
    }
    {
        FactEntry e;
        e.name = "leverage-effect";
        const int center = params.leverage_max_lag;
        double min_positive = 0.0;
        for (int tau = 1; tau <= 10; ++tau)
            min_positive =
                std::min(min_positive, result.leverage_curve.values[center + tau]);
        double negative_side = 0.0;
        int count = 0;
        for (int tau = -50; tau <= -10; ++tau) {
            if (center + tau < 0) continue;
            negative_side += std::abs(result.leverage_curve.values[center + tau]);
            ++count;
        }
        negative_side /= std::max(count, 1);
        e.measured = {{"min_leverage", min_positive},
                      {"mean_abs_negative_side", negative_side}};
        e.thresholds = {{"max_min_leverage", -5.0}, {"negative_side_ratio", 0.25}};
        e.note = "negative-lag noise shrinks as 1/sqrt(trials); the curve "
                 "cleans up at around 100 trials";
        e.status = verdict(min_positive <= -5.0 &&
                           negative_side < 0.25 * std::abs(min_positive));
        add(e);
    }
    {
        FactEntry e;
        e.name = "gain-loss-asymmetry";
        e.measured = {{"ks_statistic", result.ks_gain_loss},
                      {"ks_critical_5pct", result.ks_critical}};
        e.note = "expected absent: gain and loss horizons are symmetric here";
        e.status = verdict(result.ks_gain_loss < result.ks_critical);
        add(e);
    }

    return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    ExperimentResult result;
    result.trials = run_trials(spec);
    result.analysis = analyze_trials(result.trials, spec.analysis);
    return result;
}

void write_trial_csvs(const std::vector<TrialResult>& trials,
                      const std::string& directory) {
    std::filesystem::create_directories(directory);
    for (std::size_t k = 0; k < trials.size(); ++k) {
        const TrialResult& trial = trials[k];
        CsvTable table;
        table.columns = {"t",     "p",      "dp",        "h",
                         "P",     "D",      "q_buy",     "q_sell",
                         "n_buyers", "n_sellers", "n_replaced"};
        table.rows.push_back(
            {0, trial.prices[0], 0, 0, 0, 0, 0, 0, 0, 0, 0});
        long long cognitive_price = 0;
        for (std::size_t t = 0; t < trial.records.size(); ++t) {
            const StepRecord& r = trial.records[t];
            cognitive_price += r.quantized_move;
            table.rows.push_back({static_cast<double>(t + 1),
                                  trial.prices[t + 1],
                                  r.price_change,
                                  static_cast<double>(r.quantized_move),
                                  static_cast<double>(cognitive_price),
                                  static_cast<double>(r.excess_demand),
                                  static_cast<double>(r.buy_volume),
                                  static_cast<double>(r.sell_volume),
                                  static_cast<double>(r.n_buyers),
                                  static_cast<double>(r.n_sellers),
                                  static_cast<double>(r.n_replaced)});
        }
        char name[32];
        std::snprintf(name, sizeof name, "trial_%03zu.csv", k);
        write_csv(directory + "/" + name, table);
    }
}

std::vector<TrialResult> read_trial_csvs(const std::string& directory) {
    std::vector<std::string> paths;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("trial_", 0) == 0 && name.ends_with(".csv"))
            paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty())
        throw std::runtime_error("no trial_*.csv files in " + directory);

    std::vector<TrialResult> trials;
    for (const auto& path : paths) {
        const CsvTable table = read_csv(path);
        if (table.columns.size() != 11)
            throw std::runtime_error("unexpected trial csv header in " + path);
        TrialResult trial;
        for (const auto& row : table.rows) {
            trial.prices.push_back(row[1]);
            if (row[0] == 0.0) continue;  // t = 0 carries only p(0)
            StepRecord r;
            r.price_change = row[2];
            r.quantized_move = static_cast<int>(row[3]);
            r.excess_demand = static_cast<long long>(row[5]);
            r.buy_volume = static_cast<long long>(row[6]);
            r.sell_volume = static_cast<long long>(row[7]);
            r.n_buyers = static_cast<int>(row[8]);
            r.n_sellers = static_cast<int>(row[9]);
            r.n_replaced = static_cast<int>(row[10]);
            trial.records.push_back(r);
        }
        trials.push_back(std::move(trial));
    }
    return trials;
}

void write_report(const StylizedFactReport& report, const std::string& path) {
    json doc;
    doc["facts"] = json::array();
    for (const FactEntry& fact : report.facts) {
        json entry;
        entry["name"] = fact.name;
        entry["status"] = status_name(fact.status);
        entry["measured"] = fact.measured;
        entry["thresholds"] = fact.thresholds;
        if (!fact.note.empty()) entry["note"] = fact.note;
        doc["facts"].push_back(entry);
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << doc.dump(2) << '\n';
}

void write_analysis_outputs(const AnalysisResult& analysis,
                            const std::string& directory) {
    std::filesystem::create_directories(directory);
    write_csv(directory + "/acf_returns.csv",
              curve_table(analysis.acf_returns.lags,
                          analysis.acf_returns.correlations,
                          analysis.acf_returns.band_halfwidth));
    write_csv(directory + "/acf_abs_returns.csv",
              curve_table(analysis.acf_abs_returns.lags,
                          analysis.acf_abs_returns.correlations,
                          analysis.acf_abs_returns.band_halfwidth));
    write_csv(directory + "/kurtosis.csv",
              curve_table(analysis.kurtosis.scales, analysis.kurtosis.kurtoses));
    write_csv(directory + "/leadlag_rho.csv",
              curve_table(analysis.lead_lag.lags, analysis.lead_lag.rho_cf,
                          analysis.lead_lag.band_halfwidth));
    {
        std::vector<int> lags;
        for (int tau = 1; tau <= static_cast<int>(analysis.lead_lag.asymmetry.size());
             ++tau)
            lags.push_back(tau);
        write_csv(directory + "/leadlag_asymmetry.csv",
                  curve_table(lags, analysis.lead_lag.asymmetry,
                              analysis.lead_lag.band_halfwidth));
    }
    write_csv(directory + "/leverage.csv",
              curve_table(analysis.leverage_curve.lags,
                          analysis.leverage_curve.values));
    for (const auto* horizon : {&analysis.horizon_pos, &analysis.horizon_neg}) {
        CsvTable table;
        table.columns = {"x", "y"};
        for (auto [t, p] : horizon->histogram)
            table.rows.push_back({static_cast<double>(t), p});
        write_csv(directory + (horizon->sign > 0 ? "/inverse_stats_pos.csv"
                                                 : "/inverse_stats_neg.csv"),
                  table);
    }
    {
        CsvTable table;
        table.columns = {"x", "y"};
        for (std::size_t i = 0; i < analysis.volume_scatter.mean_volume.size(); ++i)
            table.rows.push_back({analysis.volume_scatter.mean_volume[i],
                                  analysis.volume_scatter.mean_abs_return[i]});
        write_csv(directory + "/volume_volatility.csv", table);
    }
    write_report(analysis.report, directory + "/report.json");
}

void reproduce_figure(int figure, ExperimentSpec spec,
                      const std::string& directory) {
    if (figure < 2 || figure > 15)
        throw std::invalid_argument("unknown figure id: " + std::to_string(figure));
    std::filesystem::create_directories(directory);
    const std::string prefix = directory + "/fig" + std::to_string(figure);

    // Single-trajectory figures need one trial only.
    if (figure == 2 || figure == 14 || figure == 15) {
        if (figure == 15) spec.game.board_lot = 1;
        spec.trials = 1;
        const TrialResult trial = run_trials(spec)[0];
        if (figure == 2) {
            const ReturnSeries returns = log_returns(trial.prices, 1);
            std::vector<int> t(returns.values.size());
            for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<int>(i + 1);
            write_csv(prefix + "_returns.csv", curve_table(t, returns.values));
        } else if (figure == 14) {
            std::vector<int> t(trial.records.size());
            std::vector<double> buyers(trial.records.size()),
                sellers(trial.records.size());
            for (std::size_t i = 0; i < trial.records.size(); ++i) {
                t[i] = static_cast<int>(i + 1);
                buyers[i] = trial.records[i].n_buyers;
                sellers[i] = trial.records[i].n_sellers;
            }
            write_csv(prefix + "_buyers.csv", curve_table(t, buyers));
            write_csv(prefix + "_sellers.csv", curve_table(t, sellers));
        } else {
            std::vector<int> t(trial.records.size());
            std::vector<double> changes(trial.records.size());
            for (std::size_t i = 0; i < trial.records.size(); ++i) {
                t[i] = static_cast<int>(i + 1);
                changes[i] = trial.records[i].price_change;
            }
            write_csv(prefix + "_price_changes.csv", curve_table(t, changes));
        }
        return;
    }

    const ExperimentResult result = run_experiment(spec);
    const AnalysisResult& analysis = result.analysis;
    switch (figure) {
        case 3: {
            std::vector<double> pooled;
            for (const TrialResult& trial : result.trials) {
                const std::vector<double> normalized =
                    normalize(log_returns(trial.prices, 1).values);
                pooled.insert(pooled.end(), normalized.begin(), normalized.end());
            }
            write_csv(prefix + "_return_distribution.csv",
                      histogram_table(pooled, 100));
            break;
        }
        case 4: {
            std::vector<double> positive, negative;
            for (const TrialResult& trial : result.trials) {
                for (double r : normalize(log_returns(trial.prices, 1).values)) {
                    if (r > 0) positive.push_back(r);
                    if (r < 0) negative.push_back(-r);
                }
            }
            write_csv(prefix + "_ccdf_pos.csv", ccdf_table(positive));
            write_csv(prefix + "_ccdf_neg.csv", ccdf_table(negative));
            break;
        }
        case 5: {
            write_csv(prefix + "_ccdf_pos.csv",
                      ccdf_table(analysis.pooled_positive_returns));
            json fit;
            fit["power_law"] = {{"alpha", analysis.power_law.alpha},
                                {"x_min", analysis.power_law.x_min},
                                {"n_tail", analysis.power_law.n_tail},
                                {"ks_distance", analysis.power_law.ks_distance}};
            fit["exponential"] = {{"rate", analysis.exponential_tail.rate},
                                  {"x_min", analysis.exponential_tail.x_min}};
            fit["vuong"] = {{"lr", analysis.vuong.lr},
                            {"p_value", analysis.vuong.p_value}};
            std::ofstream out(prefix + "_fit.json");
            out << fit.dump(2) << '\n';
            break;
        }
        case 6:
            write_csv(prefix + "_acf_returns.csv",
                      curve_table(analysis.acf_returns.lags,
                                  analysis.acf_returns.correlations,
                                  analysis.acf_returns.band_halfwidth));
            break;
        case 7: {
            write_csv(prefix + "_acf_abs_returns.csv",
                      curve_table(analysis.acf_abs_returns.lags,
                                  analysis.acf_abs_returns.correlations,
                                  analysis.acf_abs_returns.band_halfwidth));
            json fit;
            fit["amplitude"] = analysis.vol_decay.amplitude;
            fit["rate"] = analysis.vol_decay.rate;
            std::ofstream out(prefix + "_fit.json");
            out << fit.dump(2) << '\n';
            break;
        }
        case 8: {
            CsvTable table;
            table.columns = {"x", "y"};
            for (std::size_t i = 0; i < analysis.volume_scatter.mean_volume.size();
                 ++i)
                table.rows.push_back({analysis.volume_scatter.mean_volume[i],
                                      analysis.volume_scatter.mean_abs_return[i]});
            write_csv(prefix + "_volume_volatility.csv", table);
            break;
        }
        case 9:
            write_csv(prefix + "_kurtosis.csv",
                      curve_table(analysis.kurtosis.scales,
                                  analysis.kurtosis.kurtoses));
            break;
        case 10: {
            const std::vector<double> normalized =
                normalize(log_returns(result.trials[0].prices, 1).values);
            const GarchFit fit = fit_garch11(normalized);
            write_csv(prefix + "_returns_hist.csv", histogram_table(normalized, 100));
            write_csv(prefix + "_residuals_hist.csv",
                      histogram_table(garch_residuals(normalized, fit), 100));
            break;
        }
        case 11: {
            write_csv(prefix + "_leadlag.csv",
                      curve_table(analysis.lead_lag.lags, analysis.lead_lag.rho_cf,
                                  analysis.lead_lag.band_halfwidth));
            std::vector<int> lags;
            for (int tau = 1;
                 tau <= static_cast<int>(analysis.lead_lag.asymmetry.size()); ++tau)
                lags.push_back(tau);
            write_csv(prefix + "_asymmetry.csv",
                      curve_table(lags, analysis.lead_lag.asymmetry,
                                  analysis.lead_lag.band_halfwidth));
            break;
        }
        case 12:
            write_csv(prefix + "_leverage.csv",
                      curve_table(analysis.leverage_curve.lags,
                                  analysis.leverage_curve.values));
            break;
        case 13:
            for (const auto* horizon :
                 {&analysis.horizon_pos, &analysis.horizon_neg}) {
                CsvTable table;
                table.columns = {"x", "y"};
                for (auto [t, p] : horizon->histogram)
                    table.rows.push_back({static_cast<double>(t), p});
                write_csv(prefix + (horizon->sign > 0 ? "_pos.csv" : "_neg.csv"),
                          table);
            }
            break;
        default:
            break;
    }
}

}  // namespace specgame
