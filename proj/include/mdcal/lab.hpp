#pragma once

// Desk-scale checks of marginal-likelihood asymptotics on the conjugate
// Gaussian mean model: the BIC gap and a simulation check that the centered
// log marginal-likelihood ratio is asymptotically half a chi-square.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "normal.hpp"
#include "rng.hpp"

namespace mdcal {

/// log m(x) - [loglik at the MLE - (d/2) log n]. Bounded in n whenever the
/// Laplace expansion of the marginal holds.
inline double bic_gap(double loglik_mle, std::int64_t d, std::int64_t n,
                      double log_marginal_exact) {
    if (n < 1) throw std::domain_error("bic_gap: n must be >= 1");
    return log_marginal_exact -
           (loglik_mle - 0.5 * static_cast<double>(d) * std::log(static_cast<double>(n)));
}

struct BicGapPoint {
    std::int64_t n = 0;
    double gap = 0.0;
};

/// One simulated dataset per n from N(0,1), scored under the conjugate
/// N(0, tau^2) prior where both the exact log marginal and the maximized
/// log likelihood are available in closed form.
inline std::vector<BicGapPoint> bic_gap_conjugate_experiment(
    const std::vector<std::int64_t>& n_grid, std::uint64_t seed, double prior_tau = 1.0) {
    if (!(prior_tau > 0.0)) throw std::domain_error("bic_gap experiment: tau must be positive");
    std::vector<BicGapPoint> out;
    out.reserve(n_grid.size());
    for (size_t g = 0; g < n_grid.size(); ++g) {
        const std::int64_t n = n_grid[g];
        if (n < 2) throw std::domain_error("bic_gap experiment: n must be >= 2");
        const CounterRng rng{derive_seed(seed, g)};
        double sum = 0.0, sumsq = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            const double x = rng.normal(static_cast<std::uint64_t>(i));
            sum += x;
            sumsq += x * x;
        }
        const double nd = static_cast<double>(n);
        const double xbar = sum / nd;
        const double loglik_mle = -0.5 * nd * log_2pi - 0.5 * (sumsq - nd * xbar * xbar);
        const double A = nd + 1.0 / (prior_tau * prior_tau);
        const double log_marginal = -0.5 * nd * log_2pi - std::log(prior_tau) -
                                    0.5 * std::log(A) - 0.5 * (sumsq - sum * sum / A);
        out.push_back({n, bic_gap(loglik_mle, 1, n, log_marginal)});
    }
    return out;
}

struct LabReport {
    std::vector<double> statistic_samples;
    std::string reference;
    double ks_stat = 0.0;
    double ks_p = 0.0;
    bool pass = false;
    double level = 0.01;
    bool reps_warning = false;
};

/// One-sample Kolmogorov-Smirnov distance against a continuous CDF.
template <class Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
    if (samples.empty()) throw std::domain_error("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double m = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        d = std::max(d, std::abs((i + 1) / m - F));
        d = std::max(d, std::abs(F - i / m));
    }
    return d;
}

/// Asymptotic Kolmogorov p-value with Stephens' small-sample correction.
inline double ks_pvalue(double d, std::int64_t m) {
    const double rm = std::sqrt(static_cast<double>(m));
    const double lambda = (rm + 0.12 + 0.11 / rm) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) *
                            std::exp(-2.0 * k * k * lambda * lambda);
        p += term;
        if (std::abs(term) < 1e-16) break;
    }
    return std::clamp(p, 0.0, 1.0);
}

/// Simulation check of the correct-specification marginal-likelihood
/// expansion for the Gaussian mean model (d = 1, true mean 0, prior
/// N(0, tau^2)): per replicate,
///   D = log(p_n/q_n) + (d/2) log(n/(2 pi)) - log[ p(0) / sqrt(I(0)) ]
/// where p_n is the exact conjugate marginal and q_n the true-parameter
/// likelihood. 2D is KS-compared against chi-square(1) at level 0.01.
inline LabReport dawid_check(std::int64_t n, std::int64_t reps, std::uint64_t seed,
                             double prior_tau) {
    if (n < 2) throw std::domain_error("dawid_check: n must be >= 2");
    if (reps < 2) throw std::domain_error("dawid_check: reps must be >= 2");
    if (!(prior_tau >= 0.1)) throw std::domain_error("dawid_check: requires tau >= 0.1");
    LabReport report;
    report.reference = "chi2_1";
    report.level = 0.01;
    report.reps_warning = reps < 500;
    report.statistic_samples.reserve(static_cast<size_t>(reps));

    const double nd = static_cast<double>(n);
    const double A = nd + 1.0 / (prior_tau * prior_tau);
    const double log_theta_fn = -std::log(prior_tau) - 0.5 * log_2pi;  // log[p(0)/sqrt(I)], I = 1
    for (std::int64_t r = 0; r < reps; ++r) {
        const CounterRng rng{derive_seed(seed, static_cast<std::uint64_t>(r))};
        double sum = 0.0;
        for (std::int64_t i = 0; i < n; ++i)
            sum += rng.normal(static_cast<std::uint64_t>(i));
        // log p_n - log q_n; the -0.5*sum(x^2) pieces cancel exactly
        const double log_ratio = -std::log(prior_tau) - 0.5 * std::log(A) +
                                 sum * sum / (2.0 * A);
        const double D = log_ratio + 0.5 * (std::log(nd) - log_2pi) - log_theta_fn;
        report.statistic_samples.push_back(2.0 * D);
    }
    report.ks_stat = ks_statistic(report.statistic_samples,
                                  [](double x) { return chisq1_cdf(x); });
    report.ks_p = ks_pvalue(report.ks_stat, reps);
    report.pass = report.ks_p > report.level;
    return report;
}

} // namespace mdcal
