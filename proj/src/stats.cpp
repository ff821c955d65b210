#include "specgame/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace specgame {
namespace {

// Maximal runs of strictly positive prices.
std::vector<std::pair<std::size_t, std::size_t>> positive_segments(
    const std::vector<double>& prices) {
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    std::size_t begin = 0;
    bool open = false;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (prices[i] > 0.0) {
            if (!open) {
                begin = i;
                open = true;
            }
        } else if (open) {
            segments.emplace_back(begin, i);
            open = false;
        }
    }
    if (open) segments.emplace_back(begin, prices.size());
    return segments;
}

// Max segment tree supporting "first index in [from, end) with value >= x".
class FirstReachIndex {
public:
    explicit FirstReachIndex(const std::vector<double>& values) : n_(values.size()) {
        leaves_ = 1;
        while (leaves_ < n_) leaves_ *= 2;
        tree_.assign(2 * leaves_, -std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < n_; ++i) tree_[leaves_ + i] = values[i];
        for (std::size_t i = leaves_; i-- > 1;)
            tree_[i] = std::max(tree_[2 * i], tree_[2 * i + 1]);
    }

    // Smallest index >= from with value >= threshold, or n if none.
    std::size_t first_ge(std::size_t from, double threshold) const {
        const std::size_t hit = query(1, 0, leaves_, from, threshold);
        return hit < n_ ? hit : n_;
    }

private:
    std::size_t query(std::size_t node, std::size_t lo, std::size_t hi,
                      std::size_t from, double threshold) const {
        if (hi <= from || tree_[node] < threshold) return leaves_;
        if (hi - lo == 1) return lo;
        const std::size_t mid = lo + (hi - lo) / 2;
        std::size_t left = query(2 * node, lo, mid, from, threshold);
        if (left < leaves_) return left;
        return query(2 * node + 1, mid, hi, from, threshold);
    }

    std::size_t n_;
    std::size_t leaves_ = 1;
    std::vector<double> tree_;
};

}  // namespace

ReturnSeries log_returns(const std::vector<double>& prices, int scale) {
    if (scale < 1) throw std::invalid_argument("return scale must be >= 1");
    ReturnSeries series;
    series.scale = scale;
    for (auto [begin, end] : positive_segments(prices)) {
        for (std::size_t t = begin + scale; t < end; ++t)
            series.values.push_back(std::log(prices[t]) -
                                    std::log(prices[t - scale]));
    }
    return series;
}

double mean(const std::vector<double>& series) {
    double sum = 0.0;
    for (double v : series) sum += v;
    return sum / static_cast<double>(series.size());
}

double population_variance(const std::vector<double>& series) {
    const double m = mean(series);
    double sum = 0.0;
    for (double v : series) sum += (v - m) * (v - m);
    return sum / static_cast<double>(series.size());
}

std::vector<double> normalize(const std::vector<double>& series) {
    if (series.empty()) throw std::invalid_argument("empty series");
    const double m = mean(series);
    const double var = population_variance(series);
    if (var <= 0.0) throw std::invalid_argument("cannot normalize a constant series");
    const double inv_sd = 1.0 / std::sqrt(var);
    std::vector<double> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) out[i] = (series[i] - m) * inv_sd;
    return out;
}

double excess_kurtosis(const std::vector<double>& series) {
    const double m = mean(series);
    double m2 = 0.0, m4 = 0.0;
    for (double v : series) {
        const double d = v - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const double n = static_cast<double>(series.size());
    m2 /= n;
    m4 /= n;
    if (m2 <= 0.0) throw std::invalid_argument("kurtosis of a constant series");
    return m4 / (m2 * m2) - 3.0;
}

double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("correlation needs equal-length nonempty series");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0)
        throw std::invalid_argument("correlation undefined for a constant series");
    return sxy / std::sqrt(sxx * syy);
}

AcfCurve autocorrelation(const std::vector<double>& series, int max_lag) {
    const int n = static_cast<int>(series.size());
    if (n <= max_lag) throw std::invalid_argument("series shorter than max_lag");
    const double m = mean(series);
    double denom = 0.0;
    for (double v : series) denom += (v - m) * (v - m);
    if (denom <= 0.0)
        throw std::invalid_argument("autocorrelation of a constant series");

    AcfCurve curve;
    curve.lags.resize(max_lag + 1);
    curve.correlations.resize(max_lag + 1);
    curve.band_halfwidth = 1.96 / std::sqrt(static_cast<double>(n));
    // Biased estimator: lagged products over n, normalized by the sample
    // variance. Each lag is independent, so the loop parallelizes without
    // changing the result.
#pragma omp parallel for schedule(static)
    for (int tau = 0; tau <= max_lag; ++tau) {
        double sum = 0.0;
        for (int t = 0; t + tau < n; ++t)
            sum += (series[t] - m) * (series[t + tau] - m);
        curve.lags[tau] = tau;
        curve.correlations[tau] = sum / denom;
    }
    return curve;
}

ExponentialDecayFit fit_exponential_decay(const AcfCurve& acf, int lag_lo,
                                          int lag_hi) {
    if (lag_lo > lag_hi) throw std::invalid_argument("empty lag range");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (std::size_t k = 0; k < acf.lags.size(); ++k) {
        const int tau = acf.lags[k];
        if (tau < lag_lo || tau > lag_hi) continue;
        const double rho = acf.correlations[k];
        if (rho <= 0.0)
            throw std::invalid_argument("non-positive correlation at lag " +
                                        std::to_string(tau));
        const double x = static_cast<double>(tau), y = std::log(rho);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) throw std::invalid_argument("need at least two lags in range");
    const double n = static_cast<double>(count);
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    return {std::exp(intercept), -slope};
}

KurtosisCurve kurtosis_curve(const std::vector<double>& unit_returns,
                             const std::vector<int>& scales) {
    KurtosisCurve curve;
    for (int scale : scales) {
        if (scale < 1) throw std::invalid_argument("scale must be >= 1");
        const std::size_t count = unit_returns.size() / scale;
        std::vector<double> aggregated(count);
        for (std::size_t k = 0; k < count; ++k) {
            double sum = 0.0;
            for (int j = 0; j < scale; ++j)
                sum += unit_returns[k * scale + j];
            aggregated[k] = sum;
        }
        curve.scales.push_back(scale);
        curve.sample_sizes.push_back(count);
        if (count >= 4 && population_variance(aggregated) > 0.0) {
            curve.kurtoses.push_back(excess_kurtosis(aggregated));
            curve.defined.push_back(true);
        } else {
            curve.kurtoses.push_back(0.0);
            curve.defined.push_back(false);
        }
    }
    return curve;
}

VolumeVolatility volume_volatility(const std::vector<long long>& buy_volumes,
                                   const std::vector<long long>& sell_volumes,
                                   const std::vector<double>& abs_returns,
                                   int window) {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    const std::size_t len = std::min(
        {buy_volumes.size(), sell_volumes.size(), abs_returns.size()});
    const std::size_t count = len / window;
    VolumeVolatility result;
    result.mean_volume.resize(count);
    result.mean_abs_return.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        double buy = 0.0, sell = 0.0, vol = 0.0;
        for (int j = 0; j < window; ++j) {
            const std::size_t i = k * window + j;
            buy += static_cast<double>(buy_volumes[i]);
            sell += static_cast<double>(sell_volumes[i]);
            vol += abs_returns[i];
        }
        result.mean_volume[k] = std::max(buy, sell) / window;
        result.mean_abs_return[k] = vol / window;
    }
    result.correlation =
        pearson_correlation(result.mean_volume, result.mean_abs_return);
    return result;
}

CoarseFineSeries coarse_fine_volatility(const std::vector<double>& unit_returns,
                                        int dt, int n, int stride) {
    if (dt < 1 || n < 1) throw std::invalid_argument("dt and n must be >= 1");
    if (stride < n * dt)
        throw std::invalid_argument("stride must be >= n*dt for non-overlapping samples");
    const std::size_t len = unit_returns.size();
    std::vector<double> prefix(len + 1, 0.0);
    for (std::size_t i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + unit_returns[i];

    CoarseFineSeries out;
    const std::size_t block = static_cast<std::size_t>(n) * dt;
    for (std::size_t base = 0; base + block <= len;
         base += static_cast<std::size_t>(stride)) {
        double fine = 0.0;
        for (int j = 1; j <= n; ++j)
            fine += std::abs(prefix[base + static_cast<std::size_t>(j) * dt] -
                             prefix[base + static_cast<std::size_t>(j - 1) * dt]);
        out.coarse.push_back(std::abs(prefix[base + block] - prefix[base]));
        out.fine.push_back(fine / n);
    }
    if (out.coarse.empty())
        throw std::invalid_argument("series too short for coarse/fine sampling");
    return out;
}

LeadLagResult lead_lag_asymmetry(const CoarseFineSeries& series, int max_lag) {
    const int len = static_cast<int>(series.coarse.size());
    if (len <= max_lag) throw std::invalid_argument("series shorter than max_lag");
    LeadLagResult result;
    result.band_halfwidth = 1.96 / std::sqrt(static_cast<double>(len));
    for (int tau = -max_lag; tau <= max_lag; ++tau) {
        std::vector<double> shifted_coarse, fine;
        for (int i = 0; i < len; ++i) {
            const int j = i + tau;
            if (j < 0 || j >= len) continue;
            shifted_coarse.push_back(series.coarse[j]);
            fine.push_back(series.fine[i]);
        }
        result.lags.push_back(tau);
        result.rho_cf.push_back(pearson_correlation(shifted_coarse, fine));
    }
    for (int tau = 1; tau <= max_lag; ++tau)
        result.asymmetry.push_back(result.rho_cf[max_lag + tau] -
                                   result.rho_cf[max_lag - tau]);
    return result;
}

LeverageCurve leverage(const std::vector<double>& returns, int max_lag) {
    const int n = static_cast<int>(returns.size());
    if (n <= max_lag) throw std::invalid_argument("series shorter than max_lag");
    double second_moment = 0.0;
    for (double r : returns) second_moment += r * r;
    second_moment /= n;
    if (second_moment <= 0.0)
        throw std::invalid_argument("leverage undefined for an all-zero series");
    const double denom = second_moment * second_moment;

    LeverageCurve curve;
    curve.lags.resize(2 * max_lag + 1);
    curve.values.resize(2 * max_lag + 1);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < 2 * max_lag + 1; ++k) {
        const int tau = k - max_lag;
        double sum = 0.0;
        int count = 0;
        for (int t = 0; t < n; ++t) {
            const int u = t + tau;
            if (u < 0 || u >= n) continue;
            sum += returns[u] * returns[u] * returns[t];
            ++count;
        }
        curve.lags[k] = tau;
        curve.values[k] = sum / count / denom;
    }
    return curve;
}

HorizonDistribution inverse_statistics(const std::vector<double>& prices,
                                       double theta, int sign) {
    if (!(theta > 0.0)) throw std::invalid_argument("theta must be > 0");
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");

    HorizonDistribution dist;
    dist.theta = theta;
    dist.sign = sign;
    std::map<int, std::size_t> counts;

    for (auto [begin, end] : positive_segments(prices)) {
        const std::size_t len = end - begin;
        if (len < 2) continue;
        // Work on sign * ln p so both directions reduce to "first index
        // whose value exceeds the start by theta".
        std::vector<double> walk(len);
        for (std::size_t i = 0; i < len; ++i)
            walk[i] = sign * std::log(prices[begin + i]);
        FirstReachIndex reach(walk);
        for (std::size_t t = 0; t + 1 < len; ++t) {
            const std::size_t hit = reach.first_ge(t + 1, walk[t] + theta);
            if (hit < len) {
                ++counts[static_cast<int>(hit - t)];
                ++dist.observed_count;
            } else {
                ++dist.censored_count;
            }
        }
    }
    if (dist.observed_count > 0)
        for (auto [horizon, count] : counts)
            dist.histogram[horizon] =
                static_cast<double>(count) / static_cast<double>(dist.observed_count);
    return dist;
}

}  // namespace specgame
