#pragma once

#include <cstddef>
#include <map>
#include <vector>

namespace specgame {

// Log-returns at a fixed scale, in native time steps.
struct ReturnSeries {
    std::vector<double> values;
    int scale = 1;
};

struct AcfCurve {
    std::vector<int> lags;
    std::vector<double> correlations;
    double band_halfwidth = 0.0;  // 95% Gaussian random-walk band
};

struct KurtosisCurve {
    std::vector<int> scales;
    std::vector<double> kurtoses;          // excess kurtosis per scale
    std::vector<std::size_t> sample_sizes;
    std::vector<bool> defined;             // false where variance was zero
};

struct LeadLagResult {
    std::vector<int> lags;                 // signed, -max_lag..max_lag
    std::vector<double> rho_cf;
    std::vector<double> asymmetry;         // rho(tau) - rho(-tau), tau = 1..max_lag
    double band_halfwidth = 0.0;
    int sample_dt = 0;
    int sample_n = 0;
    int sample_stride = 0;
};

struct LeverageCurve {
    std::vector<int> lags;                 // signed
    std::vector<double> values;
};

// First-passage times of the log-return to a level +theta or -theta.
struct HorizonDistribution {
    double theta = 0.0;
    int sign = +1;
    std::map<int, double> histogram;       // waiting time -> probability
    std::size_t censored_count = 0;
    std::size_t observed_count = 0;
};

struct VolumeVolatility {
    std::vector<double> mean_volume;       // <V> per window, Eq-17 style max
    std::vector<double> mean_abs_return;   // <|r|> per window
    double correlation = 0.0;
};

// r(t, dt) = ln p(t) - ln p(t - dt), computed over maximal strictly
// positive price segments; non-positive prices split the series.
ReturnSeries log_returns(const std::vector<double>& prices, int scale);

std::vector<double> normalize(const std::vector<double>& series);

double mean(const std::vector<double>& series);
double population_variance(const std::vector<double>& series);
double excess_kurtosis(const std::vector<double>& series);
double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y);

AcfCurve autocorrelation(const std::vector<double>& series, int max_lag);

// Least-squares fit of ln rho(tau) = ln A - lambda tau over [lag_lo, lag_hi].
struct ExponentialDecayFit {
    double amplitude = 0.0;
    double rate = 0.0;
};
ExponentialDecayFit fit_exponential_decay(const AcfCurve& acf, int lag_lo,
                                          int lag_hi);

// Excess kurtosis of non-overlapping aggregates of unit returns.
KurtosisCurve kurtosis_curve(const std::vector<double>& unit_returns,
                             const std::vector<int>& scales);

VolumeVolatility volume_volatility(const std::vector<long long>& buy_volumes,
                                   const std::vector<long long>& sell_volumes,
                                   const std::vector<double>& abs_returns,
                                   int window);

struct CoarseFineSeries {
    std::vector<double> coarse;
    std::vector<double> fine;
};
CoarseFineSeries coarse_fine_volatility(const std::vector<double>& unit_returns,
                                        int dt, int n, int stride);

LeadLagResult lead_lag_asymmetry(const CoarseFineSeries& series, int max_lag);

// Raw-moment leverage function <r(t+tau)^2 r(t)> / <r^2>^2.
LeverageCurve leverage(const std::vector<double>& returns, int max_lag);

HorizonDistribution inverse_statistics(const std::vector<double>& prices,
                                       double theta, int sign);

}  // namespace specgame
