#pragma once

#include <cstddef>
#include <vector>

namespace specgame {

struct PowerLawFit {
    double alpha = 0.0;      // tail exponent, > 1
    double x_min = 0.0;      // selected lower cutoff
    std::size_t n_tail = 0;  // samples at or above the cutoff
    double ks_distance = 0.0;
    double log_likelihood = 0.0;
};

struct ExponentialTailFit {
    double rate = 0.0;       // lambda of the shifted exponential
    double x_min = 0.0;
    std::size_t n_tail = 0;
    double log_likelihood = 0.0;
};

enum class FavoredModel { power_law, exponential, inconclusive };

struct VuongResult {
    double lr = 0.0;         // normalized log-likelihood ratio
    double p_value = 1.0;    // two-sided
    FavoredModel favored = FavoredModel::inconclusive;
};

// Continuous power-law MLE at a fixed cutoff: alpha = 1 + n / sum ln(x/x_min).
PowerLawFit fit_powerlaw_at(const std::vector<double>& sorted_tail, double x_min);

// Clauset-style cutoff selection: scan candidate cutoffs drawn from the
// sample values and keep the one minimizing the KS distance between the
// empirical tail and the fitted power law. max_candidates caps the scan by
// rank-spaced decimation of the unique values.
PowerLawFit fit_powerlaw_tail(std::vector<double> samples,
                              std::size_t max_candidates = 400);

ExponentialTailFit fit_exponential_tail(const std::vector<double>& samples,
                                        double x_min);

// Vuong's closeness test of power law vs shifted exponential on the same
// tail sample; significance level 0.1, two-sided p.
VuongResult vuong_test(const std::vector<double>& tail_samples,
                       const PowerLawFit& power_law,
                       const ExponentialTailFit& exponential);

struct GarchFit {
    double a0 = 0.0;
    double a1 = 0.0;
    double b1 = 0.0;
    double log_likelihood = 0.0;
    bool converged = false;
};

// Gaussian GARCH(1,1) maximum likelihood via Nelder-Mead on transformed
// parameters (log a0; logistic pair keeping a1 + b1 < 1). sigma_1^2 is
// initialized to the sample variance.
GarchFit fit_garch11(const std::vector<double>& returns);

// Standardized residuals r_t / sigma_t under the fitted recursion.
std::vector<double> garch_residuals(const std::vector<double>& returns,
                                    const GarchFit& fit);

}  // namespace specgame
