#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "specgame/rng.hpp"
#include "specgame/stats.hpp"

using namespace specgame;

namespace {

std::vector<double> gaussian_sample(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(n);
    while (out.size() < n) {
        const double u1 = rng.uniform_double();
        const double u2 = rng.uniform_double();
        const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
        out.push_back(radius * std::cos(2.0 * std::numbers::pi * u2));
        if (out.size() < n)
            out.push_back(radius * std::sin(2.0 * std::numbers::pi * u2));
    }
    return out;
}

std::vector<double> laplace_sample(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> out(n);
    for (double& v : out) {
        const double u = rng.uniform_double() - 0.5;
        v = (u < 0 ? 1.0 : -1.0) * std::log(1.0 - 2.0 * std::abs(u));
    }
    return out;
}

}  // namespace

TEST_CASE("log_returns basics and non-positive price handling") {
    CHECK(log_returns({100.0, 100.0}, 1).values == std::vector<double>{0.0});
    const ReturnSeries e = log_returns({100.0, 100.0 * std::numbers::e}, 1);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-14));

    // a non-positive price splits the series; no return spans it
    const ReturnSeries split = log_returns({1.0, 2.0, -1.0, 4.0, 8.0}, 1);
    CHECK(split.values.size() == 2);
    CHECK(split.values[0] == doctest::Approx(std::log(2.0)));
    CHECK(split.values[1] == doctest::Approx(std::log(2.0)));

    CHECK(log_returns({100.0}, 1).values.empty());
    CHECK_THROWS_AS(log_returns({1.0, 2.0}, 0), std::invalid_argument);
}

TEST_CASE("normalize gives zero mean, unit variance") {
    const std::vector<double> fixed = normalize({1, -1, 1, -1});
    CHECK(fixed == std::vector<double>{1, -1, 1, -1});
    CHECK_THROWS_AS(normalize({2, 2, 2}), std::invalid_argument);

    const std::vector<double> random = normalize(gaussian_sample(10000, 3));
    CHECK(std::abs(mean(random)) < 1e-12);
    CHECK(population_variance(random) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("autocorrelation: lag zero is one, iid noise stays in band") {
    const std::vector<double> noise = gaussian_sample(100000, 17);
    const AcfCurve acf = autocorrelation(noise, 100);
    CHECK(acf.correlations[0] == doctest::Approx(1.0));
    int inside = 0;
    for (int tau = 1; tau <= 100; ++tau) {
        CHECK(std::abs(acf.correlations[tau]) <= 1.0);
        if (std::abs(acf.correlations[tau]) < acf.band_halfwidth) ++inside;
    }
    CHECK(inside >= 93);
    CHECK_THROWS_AS(autocorrelation({1.0, 1.0, 1.0}, 1), std::invalid_argument);
}

TEST_CASE("fit_exponential_decay recovers exact parameters") {
    AcfCurve curve;
    for (int tau = 1; tau <= 100; ++tau) {
        curve.lags.push_back(tau);
        curve.correlations.push_back(0.2853 * std::exp(-0.006 * tau));
    }
    const ExponentialDecayFit fit = fit_exponential_decay(curve, 1, 100);
    CHECK(fit.amplitude == doctest::Approx(0.2853).epsilon(1e-9));
    CHECK(fit.rate == doctest::Approx(0.006).epsilon(1e-9));

    AcfCurve flat;
    for (int tau = 1; tau <= 10; ++tau) {
        flat.lags.push_back(tau);
        flat.correlations.push_back(0.5);
    }
    CHECK(fit_exponential_decay(flat, 1, 10).rate == doctest::Approx(0.0));

    flat.correlations[3] = -0.1;
    CHECK_THROWS_WITH_AS(fit_exponential_decay(flat, 1, 10),
                         "non-positive correlation at lag 4",
                         std::invalid_argument);
}

TEST_CASE("kurtosis: Gaussian near zero, Laplace near three") {
    CHECK(std::abs(excess_kurtosis(gaussian_sample(1000000, 5))) < 0.03);
    CHECK(excess_kurtosis(laplace_sample(1000000, 6)) ==
          doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("kurtosis is invariant under affine transforms") {
    const std::vector<double> x = laplace_sample(20000, 9);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = -2.5 * x[i] + 7.0;
    CHECK(excess_kurtosis(y) == doctest::Approx(excess_kurtosis(x)).epsilon(1e-9));
}

TEST_CASE("kurtosis_curve aggregates non-overlapping sums") {
    const std::vector<double> noise = gaussian_sample(40000, 12);
    const KurtosisCurve curve = kurtosis_curve(noise, {1, 4, 16});
    REQUIRE(curve.scales.size() == 3);
    CHECK(curve.sample_sizes[1] == 10000);
    for (std::size_t s = 0; s < 3; ++s) {
        CHECK(curve.defined[s]);
        CHECK(std::abs(curve.kurtoses[s]) < 0.3);  // Gaussian at every scale
    }
    const KurtosisCurve degenerate = kurtosis_curve({1, 1, 1, 1, 1, 1}, {2});
    CHECK_FALSE(degenerate.defined[0]);
}

TEST_CASE("volume_volatility windows and max rule") {
    // window means: buy (4,2), sell (1,5) -> V = (4,5)
    const VolumeVolatility v = volume_volatility({4, 4, 2, 2}, {1, 1, 5, 5},
                                                 {0.1, 0.1, 0.2, 0.2}, 2);
    REQUIRE(v.mean_volume.size() == 2);
    CHECK(v.mean_volume[0] == doctest::Approx(4.0));
    CHECK(v.mean_volume[1] == doctest::Approx(5.0));
    CHECK(v.correlation == doctest::Approx(1.0));

    CHECK_THROWS_AS(
        volume_volatility({0, 0, 0, 0}, {0, 0, 0, 0}, {0.1, 0.2, 0.3, 0.4}, 2),
        std::invalid_argument);
}

TEST_CASE("volume/volatility correlation invariant under volume rescaling") {
    Rng rng(21);
    std::vector<long long> buy(400), sell(400);
    std::vector<double> vol(400);
    for (std::size_t i = 0; i < 400; ++i) {
        buy[i] = static_cast<long long>(rng.uniform_int(50));
        sell[i] = static_cast<long long>(rng.uniform_int(50));
        vol[i] = rng.uniform_double();
    }
    std::vector<long long> buy3(400), sell3(400);
    for (std::size_t i = 0; i < 400; ++i) {
        buy3[i] = 3 * buy[i];
        sell3[i] = 3 * sell[i];
    }
    CHECK(volume_volatility(buy, sell, vol, 5).correlation ==
          doctest::Approx(volume_volatility(buy3, sell3, vol, 5).correlation)
              .epsilon(1e-12));
}

TEST_CASE("coarse_fine_volatility definitions") {
    // n = 1: coarse equals fine everywhere
    const std::vector<double> r = gaussian_sample(500, 8);
    const CoarseFineSeries single = coarse_fine_volatility(r, 3, 1, 5);
    for (std::size_t i = 0; i < single.coarse.size(); ++i)
        CHECK(single.coarse[i] == doctest::Approx(single.fine[i]));

    const CoarseFineSeries alt =
        coarse_fine_volatility({1, -1, 1, -1, 1}, 1, 5, 5);
    REQUIRE(alt.coarse.size() == 1);
    CHECK(alt.coarse[0] == doctest::Approx(1.0));
    CHECK(alt.fine[0] == doctest::Approx(1.0));

    // triangle inequality: v^c <= n * v^f
    const CoarseFineSeries cf = coarse_fine_volatility(r, 2, 4, 10);
    for (std::size_t i = 0; i < cf.coarse.size(); ++i)
        CHECK(cf.coarse[i] <= 4.0 * cf.fine[i] + 1e-12);

    CHECK_THROWS_AS(coarse_fine_volatility(r, 2, 4, 7), std::invalid_argument);
}

TEST_CASE("lead_lag_asymmetry symmetry properties") {
    CoarseFineSeries same;
    same.coarse = gaussian_sample(800, 30);
    for (double& v : same.coarse) v = std::abs(v);
    same.fine = same.coarse;
    const LeadLagResult self = lead_lag_asymmetry(same, 5);
    for (double a : self.asymmetry) CHECK(a == doctest::Approx(0.0).epsilon(1e-12));
    for (double rho : self.rho_cf) CHECK(std::abs(rho) <= 1.0 + 1e-12);

    CoarseFineSeries cf;
    cf.coarse = gaussian_sample(600, 31);
    cf.fine = gaussian_sample(600, 32);
    CoarseFineSeries reversed = cf;
    std::reverse(reversed.coarse.begin(), reversed.coarse.end());
    std::reverse(reversed.fine.begin(), reversed.fine.end());
    const LeadLagResult fwd = lead_lag_asymmetry(cf, 4);
    const LeadLagResult rev = lead_lag_asymmetry(reversed, 4);
    for (std::size_t k = 0; k < fwd.asymmetry.size(); ++k)
        CHECK(rev.asymmetry[k] == doctest::Approx(-fwd.asymmetry[k]).epsilon(1e-9));
}

TEST_CASE("leverage: sign antisymmetry and scaling") {
    const std::vector<double> r = gaussian_sample(20000, 40);
    const LeverageCurve base = leverage(r, 10);

    // iid symmetric returns: odd moment vanishes
    for (std::size_t k = 0; k < base.lags.size(); ++k)
        if (base.lags[k] != 0) CHECK(std::abs(base.values[k]) < 0.2);

    std::vector<double> negated(r.size()), scaled(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        negated[i] = -r[i];
        scaled[i] = 2.0 * r[i];
    }
    const LeverageCurve neg = leverage(negated, 10);
    const LeverageCurve two = leverage(scaled, 10);
    for (std::size_t k = 0; k < base.values.size(); ++k) {
        CHECK(neg.values[k] == doctest::Approx(-base.values[k]).epsilon(1e-9));
        CHECK(two.values[k] == doctest::Approx(base.values[k] / 2.0).epsilon(1e-9));
    }
}

TEST_CASE("inverse_statistics on a deterministic exponential climb") {
    std::vector<double> prices(200);
    for (std::size_t t = 0; t < prices.size(); ++t)
        prices[t] = 100.0 * std::exp(0.01 * static_cast<double>(t));

    const HorizonDistribution up = inverse_statistics(prices, 0.01, +1);
    CHECK(up.censored_count == 0);
    REQUIRE(up.histogram.size() == 1);
    CHECK(up.histogram.at(1) == doctest::Approx(1.0));
    CHECK(up.observed_count == prices.size() - 1);

    const HorizonDistribution down = inverse_statistics(prices, 0.01, -1);
    CHECK(down.observed_count == 0);
    CHECK(down.censored_count == prices.size() - 1);

    CHECK_THROWS_AS(inverse_statistics(prices, 0.0, +1), std::invalid_argument);
}

TEST_CASE("inverse_statistics matches a brute-force oracle on random walks") {
    Rng rng(55);
    std::vector<double> prices(400);
    prices[0] = 100.0;
    for (std::size_t t = 1; t < prices.size(); ++t)
        prices[t] = prices[t - 1] * std::exp(0.02 * (rng.uniform_double() - 0.5));

    for (int sign : {+1, -1}) {
        const double theta = 0.015;
        const HorizonDistribution fast = inverse_statistics(prices, theta, sign);

        // brute force: scan every start forward
        std::map<int, std::size_t> counts;
        std::size_t censored = 0;
        for (std::size_t t = 0; t + 1 < prices.size(); ++t) {
            bool found = false;
            for (std::size_t u = t + 1; u < prices.size(); ++u) {
                const double r = std::log(prices[u]) - std::log(prices[t]);
                if ((sign > 0 && r >= theta) || (sign < 0 && r <= -theta)) {
                    ++counts[static_cast<int>(u - t)];
                    found = true;
                    break;
                }
            }
            if (!found) ++censored;
        }
        std::size_t observed = 0;
        for (auto [horizon, c] : counts) observed += c;

        CHECK(fast.censored_count == censored);
        CHECK(fast.observed_count == observed);
        CHECK(fast.observed_count + fast.censored_count == prices.size() - 1);
        REQUIRE(fast.histogram.size() == counts.size());
        for (auto [horizon, c] : counts)
            CHECK(fast.histogram.at(horizon) ==
                  doctest::Approx(static_cast<double>(c) / observed));
    }
}
