#include "specgame/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace specgame {
namespace {

double population_variance(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

// Two-sided p-value from a standard normal statistic.
double two_sided_normal_p(double z) {
    return std::erfc(std::abs(z) / std::numbers::sqrt2);
}

}  // namespace

PowerLawFit fit_powerlaw_at(const std::vector<double>& sorted_tail, double x_min) {
    const std::size_t n = sorted_tail.size();
    if (n < 2) throw std::invalid_argument("tail needs at least two samples");
    double log_sum = 0.0;
    for (double x : sorted_tail) log_sum += std::log(x / x_min);
    if (log_sum <= 0.0)
        throw std::invalid_argument("degenerate tail: all samples at the cutoff");

    PowerLawFit fit;
    fit.x_min = x_min;
    fit.n_tail = n;
    fit.alpha = 1.0 + static_cast<double>(n) / log_sum;
    fit.log_likelihood = static_cast<double>(n) * std::log((fit.alpha - 1.0) / x_min) -
                         fit.alpha * log_sum;

    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double model =
            1.0 - std::pow(sorted_tail[i] / x_min, 1.0 - fit.alpha);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        ks = std::max({ks, std::abs(model - lo), std::abs(model - hi)});
    }
    fit.ks_distance = ks;
    return fit;
}

PowerLawFit fit_powerlaw_tail(std::vector<double> samples,
                              std::size_t max_candidates) {
    if (samples.size() < 50)
        throw std::invalid_argument("power-law fit needs at least 50 samples");
    for (double x : samples)
        if (!(x > 0.0)) throw std::invalid_argument("samples must be positive");
    std::sort(samples.begin(), samples.end());

    std::vector<double> unique_values;
    for (double x : samples)
        if (unique_values.empty() || x != unique_values.back())
            unique_values.push_back(x);
    if (unique_values.size() < 3)
        throw std::invalid_argument("too few distinct values for a cutoff scan");

    // Candidate cutoffs: unique values, rank-decimated to cap the scan cost.
    // Cutoffs leaving fewer than 10 tail points are skipped.
    std::vector<double> candidates;
    const std::size_t n_unique = unique_values.size();
    const std::size_t stride = std::max<std::size_t>(1, n_unique / max_candidates);
    for (std::size_t k = 0; k < n_unique; k += stride)
        candidates.push_back(unique_values[k]);

    const int n_candidates = static_cast<int>(candidates.size());
    std::vector<double> ks(n_candidates, std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < n_candidates; ++c) {
        const auto begin =
            std::lower_bound(samples.begin(), samples.end(), candidates[c]);
        const std::vector<double> tail(begin, samples.end());
        if (tail.size() < 10 || tail.front() == tail.back()) continue;
        ks[c] = fit_powerlaw_at(tail, candidates[c]).ks_distance;
    }

    int best = -1;
    for (int c = 0; c < n_candidates; ++c)
        if (best < 0 || ks[c] < ks[best]) best = c;
    if (best < 0 || !std::isfinite(ks[best]))
        throw std::invalid_argument("no admissible cutoff found");

    const auto begin =
        std::lower_bound(samples.begin(), samples.end(), candidates[best]);
    return fit_powerlaw_at(std::vector<double>(begin, samples.end()),
                           candidates[best]);
}

ExponentialTailFit fit_exponential_tail(const std::vector<double>& samples,
                                        double x_min) {
    std::vector<double> excess;
    for (double x : samples)
        if (x >= x_min) excess.push_back(x - x_min);
    if (excess.empty()) throw std::invalid_argument("empty tail above x_min");
    double sum = 0.0;
    for (double e : excess) sum += e;
    if (sum <= 0.0)
        throw std::invalid_argument("zero mean excess: exponential MLE undefined");

    ExponentialTailFit fit;
    fit.x_min = x_min;
    fit.n_tail = excess.size();
    fit.rate = static_cast<double>(excess.size()) / sum;
    fit.log_likelihood =
        static_cast<double>(excess.size()) * std::log(fit.rate) - fit.rate * sum;
    return fit;
}

VuongResult vuong_test(const std::vector<double>& tail_samples,
                       const PowerLawFit& power_law,
                       const ExponentialTailFit& exponential) {
    if (tail_samples.empty()) throw std::invalid_argument("empty tail sample");
    const std::size_t n = tail_samples.size();
    std::vector<double> diff(n);
    const double pl_const = std::log((power_law.alpha - 1.0) / power_law.x_min);
    const double exp_const = std::log(exponential.rate);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = tail_samples[i];
        const double log_pl =
            pl_const - power_law.alpha * std::log(x / power_law.x_min);
        const double log_exp = exp_const - exponential.rate * (x - exponential.x_min);
        diff[i] = log_pl - log_exp;
    }
    const double var = population_variance(diff);
    double mean_sq = 0.0;
    for (double d : diff) mean_sq += d * d;
    mean_sq /= static_cast<double>(n);
    VuongResult result;
    // var below numerical noise means pointwise-identical likelihood ratios
    if (var <= 1e-18 * mean_sq) {
        result.lr = 0.0;
        result.p_value = 1.0;
        result.favored = FavoredModel::inconclusive;
        return result;
    }
    double sum = 0.0;
    for (double d : diff) sum += d;
    result.lr = sum / std::sqrt(static_cast<double>(n) * var);
    result.p_value = two_sided_normal_p(result.lr);
    if (result.p_value < 0.1)
        result.favored =
            result.lr > 0 ? FavoredModel::power_law : FavoredModel::exponential;
    return result;
}

namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }
double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct GarchParams {
    double a0, a1, b1;
};

// Transformed coordinates keep the optimizer unconstrained: a0 = e^t0,
// a1 + b1 = sigmoid(t1) < 1, and a1 = (a1 + b1) * sigmoid(t2).
GarchParams decode(const std::array<double, 3>& theta) {
    const double a0 = std::exp(theta[0]);
    const double sum = sigmoid(theta[1]);
    const double split = sigmoid(theta[2]);
    return {a0, sum * split, sum * (1.0 - split)};
}

double garch_neg_log_likelihood(const std::vector<double>& returns,
                                const GarchParams& p, double init_var) {
    double sigma2 = init_var;
    double nll = 0.0;
    const double log_2pi = std::log(2.0 * std::numbers::pi);
    for (std::size_t t = 0; t < returns.size(); ++t) {
        if (t > 0)
            sigma2 = p.a0 + p.a1 * returns[t - 1] * returns[t - 1] + p.b1 * sigma2;
        nll += 0.5 * (log_2pi + std::log(sigma2) + returns[t] * returns[t] / sigma2);
    }
    return nll;
}

// Plain Nelder-Mead on R^3; deterministic from a fixed initial simplex.
struct SimplexResult {
    std::array<double, 3> point;
    double value;
    bool converged;
};

SimplexResult nelder_mead(const std::function<double(const std::array<double, 3>&)>& f,
                          std::array<double, 3> start, double step,
                          double tolerance, int max_iterations) {
    constexpr int dim = 3;
    std::array<std::array<double, 3>, dim + 1> simplex;
    std::array<double, dim + 1> values;
    simplex[0] = start;
    for (int i = 0; i < dim; ++i) {
        simplex[i + 1] = start;
        simplex[i + 1][i] += step;
    }
    for (int i = 0; i <= dim; ++i) values[i] = f(simplex[i]);

    auto order = [&] {
        for (int i = 0; i <= dim; ++i)
            for (int j = i + 1; j <= dim; ++j)
                if (values[j] < values[i]) {
                    std::swap(values[i], values[j]);
                    std::swap(simplex[i], simplex[j]);
                }
    };

    bool converged = false;
    for (int it = 0; it < max_iterations; ++it) {
        order();
        double spread = 0.0;
        for (int i = 1; i <= dim; ++i)
            for (int k = 0; k < dim; ++k)
                spread = std::max(spread, std::abs(simplex[i][k] - simplex[0][k]));
        if (spread < tolerance) {
            converged = true;
            break;
        }

        std::array<double, 3> centroid{};
        for (int i = 0; i < dim; ++i)
            for (int k = 0; k < dim; ++k) centroid[k] += simplex[i][k] / dim;

        auto blend = [&](double coef) {
            std::array<double, 3> p;
            for (int k = 0; k < dim; ++k)
                p[k] = centroid[k] + coef * (simplex[dim][k] - centroid[k]);
            return p;
        };

        const auto reflected = blend(-1.0);
        const double fr = f(reflected);
        if (fr < values[0]) {
            const auto expanded = blend(-2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                simplex[dim] = expanded;
                values[dim] = fe;
            } else {
                simplex[dim] = reflected;
                values[dim] = fr;
            }
        } else if (fr < values[dim - 1]) {
            simplex[dim] = reflected;
            values[dim] = fr;
        } else {
            const auto contracted = blend(fr < values[dim] ? -0.5 : 0.5);
            const double fc = f(contracted);
            if (fc < std::min(fr, values[dim])) {
                simplex[dim] = contracted;
                values[dim] = fc;
            } else {
                for (int i = 1; i <= dim; ++i) {
                    for (int k = 0; k < dim; ++k)
                        simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    order();
    return {simplex[0], values[0], converged};
}

}  // namespace

GarchFit fit_garch11(const std::vector<double>& returns) {
    if (returns.size() < 500)
        throw std::invalid_argument("GARCH fit needs at least 500 observations");
    const double var = population_variance(returns);
    if (var <= 0.0) throw std::invalid_argument("zero-variance return series");

    const double init_a1 = 0.05, init_b1 = 0.90;
    const std::array<double, 3> start = {
        std::log(var * (1.0 - init_a1 - init_b1)),
        logit(init_a1 + init_b1),
        logit(init_a1 / (init_a1 + init_b1)),
    };
    const auto objective = [&](const std::array<double, 3>& theta) {
        return garch_neg_log_likelihood(returns, decode(theta), var);
    };
    const SimplexResult best = nelder_mead(objective, start, 0.5, 1e-8, 20000);

    const GarchParams p = decode(best.point);
    GarchFit fit;
    fit.a0 = p.a0;
    fit.a1 = p.a1;
    fit.b1 = p.b1;
    fit.log_likelihood = -best.value;
    fit.converged = best.converged;
    return fit;
}

std::vector<double> garch_residuals(const std::vector<double>& returns,
                                    const GarchFit& fit) {
    if (!(fit.a0 > 0.0)) throw std::invalid_argument("invalid GARCH fit");
    std::vector<double> residuals(returns.size());
    double sigma2 = population_variance(returns);
    for (std::size_t t = 0; t < returns.size(); ++t) {
        if (t > 0)
            sigma2 = fit.a0 + fit.a1 * returns[t - 1] * returns[t - 1] +
                     fit.b1 * sigma2;
        if (!(sigma2 > 0.0)) throw std::runtime_error("non-positive GARCH variance");
        residuals[t] = returns[t] / std::sqrt(sigma2);
    }
    return residuals;
}

}  // namespace specgame
