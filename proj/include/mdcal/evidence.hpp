#pragma once

// Marginal likelihoods, Bayes factors and posterior null probabilities for
// the known-sigma Gaussian testing problem, plus the leading-order closed
// forms used by the threshold calculus.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "normal.hpp"
#include "priors.hpp"
#include "quadrature.hpp"

namespace mdcal {

struct TestProblem {
    double theta0 = 0.0;
    double sigma = 1.0;        // known sampling standard deviation of one observation
    PriorSpec prior;
    double pi0 = 0.5, pia = 0.5;
    double L0 = 1.0, L1 = 1.0;

    void validate() const {
        if (!(sigma > 0.0)) throw std::domain_error("TestProblem: sigma must be positive");
        if (!(pi0 > 0.0 && pi0 < 1.0 && pia > 0.0 && pia < 1.0) ||
            std::abs(pi0 + pia - 1.0) > 1e-12)
            throw std::domain_error("TestProblem: pi0, pia must lie in (0,1) and sum to 1");
        if (!(L0 > 0.0 && L1 > 0.0))
            throw std::domain_error("TestProblem: loss weights must be positive");
    }

    // Bayes-rule cutoff for BF01: reject H0 when BF01 < odds_cutoff().
    double odds_cutoff() const { return (pia * L1) / (pi0 * L0); }
};

struct EvidenceResult {
    double bf01 = 0.0;       // f0 / m_a
    double log_bf01 = 0.0;   // nats
    double m_a = 0.0;        // marginal likelihood of xbar under H_a
    double f0 = 0.0;         // null density of xbar
    double post_h0 = 0.0;
};

/// Leading term of the Bayes factor expansion for the Gaussian mean test:
/// sqrt(n) / (sigma sqrt(2 pi) c_pi) * exp(-t^2/2), t the standardized mean.
inline double bf_gaussian_leading(std::int64_t n, double t, double sigma, double c_pi) {
    if (n < 1 || !(sigma > 0.0) || !(c_pi > 0.0))
        throw std::domain_error("bf_gaussian_leading: n >= 1, sigma > 0, c_pi > 0 required");
    return std::sqrt(static_cast<double>(n)) / (sigma * sqrt_2pi * c_pi) *
           std::exp(-0.5 * t * t);
}

/// Exponential-family analogue with the Fisher information in place of
/// 1/sigma^2; S is the standardized score statistic.
inline double bf_expfam_leading(std::int64_t n, double S, double fisher, double c_pi) {
    if (n < 1 || !(fisher > 0.0) || !(c_pi > 0.0))
        throw std::domain_error("bf_expfam_leading: n >= 1, fisher > 0, c_pi > 0 required");
    return std::sqrt(static_cast<double>(n) * fisher) / (sqrt_2pi * c_pi) *
           std::exp(-0.5 * S * S);
}

namespace detail {

// u-band for the substituted marginal integrand exp(-u^2/2) pi(xbar + s u).
// The core |u| <= 12 window holds everything above the e^{-72} floor; it is
// widened (up to the double-precision cap |u| <= 38) when the prior's own
// mass sits outside that window.
inline std::pair<double, double> marginal_band(const PriorSpec& prior, double xbar,
                                               double scale_over_sqrt_n) {
    double lo = -12.0, hi = 12.0;
    const double u_loc = (prior.location() - xbar) / scale_over_sqrt_n;
    const double u_spread = 10.0 * prior.scale() / scale_over_sqrt_n;
    lo = std::min(lo, u_loc - u_spread);
    hi = std::max(hi, u_loc + u_spread);
    lo = std::max(lo, -38.0);
    hi = std::min(hi, 38.0);
    return {lo, hi};
}

} // namespace detail

/// Marginal likelihood m_a(xbar) = integral of N(xbar; theta, sigma^2/n)
/// pi(theta) dtheta, computed after substituting u = sqrt(n)(theta - xbar)/sigma.
/// Relative error target 1e-9.
inline double marginal_quadrature(const TestProblem& problem, double xbar, std::int64_t n) {
    problem.validate();
    if (n < 1) throw std::domain_error("marginal_quadrature: n must be >= 1");
    if (!problem.prior.is_proper())
        throw std::domain_error("marginal_quadrature: prior must be proper (improper kinds carry only c_pi)");
    const double s = problem.sigma / std::sqrt(static_cast<double>(n));
    const auto [lo, hi] = detail::marginal_band(problem.prior, xbar, s);
    const auto f = [&](double u) {
        return inv_sqrt_2pi * std::exp(-0.5 * u * u) * problem.prior.density(xbar + s * u);
    };
    const auto q = integrate_adaptive(f, lo, hi, 1e-9, 0.0, 4000, 16);
    if (!q.converged)
        throw std::runtime_error("marginal_quadrature: tolerance not reached, error estimate "
                                 + std::to_string(q.error / std::max(q.value, 1e-300)));
    return q.value;
}

/// Second-order Laplace correction sigma^2 pi''(xbar) / (2n) to the local
/// approximation m_a(xbar) ~ pi(xbar). Diagnostic only; not folded into the
/// leading-order Bayes factor.
inline double marginal_laplace_correction(const TestProblem& problem, double xbar,
                                          std::int64_t n) {
    const auto t = taylor_at(problem.prior, xbar);
    return problem.sigma * problem.sigma * t.d2 / (2.0 * static_cast<double>(n));
}

inline EvidenceResult evidence(const TestProblem& problem, double xbar, std::int64_t n) {
    EvidenceResult out;
    out.m_a = marginal_quadrature(problem, xbar, n);
    const double rootn = std::sqrt(static_cast<double>(n));
    out.f0 = norm_pdf(xbar, problem.theta0, problem.sigma / rootn);
    out.bf01 = out.f0 / out.m_a;
    out.log_bf01 = std::log(out.f0) - std::log(out.m_a);
    const double odds = (problem.pia / problem.pi0) / out.bf01;
    out.post_h0 = 1.0 / (1.0 + odds);
    return out;
}

} // namespace mdcal
