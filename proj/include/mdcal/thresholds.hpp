#pragma once

// Risk-optimal rejection thresholds: closed-form asymptotic expansions for
// the Gaussian and exponential-family tests, the exact finite-n boundary by
// root-solving the Bayes factor, and the horseshoe / Rubin-Sethuraman
// variants.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "evidence.hpp"
#include "roots.hpp"

namespace mdcal {

enum class ThresholdMethod { asymptotic_thm1, asymptotic_thm2, numeric_root, horseshoe, rs };

inline const char* to_string(ThresholdMethod m) {
    switch (m) {
        case ThresholdMethod::asymptotic_thm1: return "asymptotic_thm1";
        case ThresholdMethod::asymptotic_thm2: return "asymptotic_thm2";
        case ThresholdMethod::numeric_root:    return "numeric_root";
        case ThresholdMethod::horseshoe:       return "horseshoe";
        case ThresholdMethod::rs:              return "rs";
    }
    return "?";
}

struct ThresholdTerms {
    double log_n = 0.0;
    double prior_term = 0.0;   // log(c_pi^{-2}), or the horseshoe -2 log log n
    double info_term = 0.0;    // -log(2 pi sigma^2) or log I(theta0) - log(2 pi)
    double odds_term = 0.0;    // 2 log(pi0/pia)
};

struct ThresholdResult {
    double t_crit_sq = 0.0;
    double t_crit = std::numeric_limits<double>::quiet_NaN();  // NaN when t_crit_sq < 0
    ThresholdTerms terms;
    ThresholdMethod method = ThresholdMethod::asymptotic_thm1;
    bool t_defined() const { return t_crit_sq >= 0.0; }
};

namespace detail {

inline ThresholdResult assemble(ThresholdTerms terms, ThresholdMethod method) {
    ThresholdResult out;
    out.terms = terms;
    out.method = method;
    out.t_crit_sq = terms.log_n + terms.prior_term + terms.info_term + terms.odds_term;
    if (out.t_crit_sq >= 0.0) out.t_crit = std::sqrt(out.t_crit_sq);
    return out;
}

inline void check_odds(double pi0, double pia) {
    if (!(pi0 > 0.0 && pia > 0.0 && std::abs(pi0 + pia - 1.0) <= 1e-12))
        throw std::domain_error("threshold: pi0, pia must be positive and sum to 1");
}

} // namespace detail

/// Exponential-family threshold: t^2 = log n + log(c_pi^{-2}) + log I(theta0)
/// - log(2 pi) + 2 log(pi0/pia). A negative t^2 (possible at very small n
/// with a large local prior density) is reported as-is with t_crit
/// undefined, never clamped.
inline ThresholdResult threshold_thm2(std::int64_t n, double fisher, double c_pi,
                                      double pi0, double pia) {
    if (n < 2) throw std::domain_error("threshold_thm2: n must be >= 2");
    if (!(fisher > 0.0) || !(c_pi > 0.0))
        throw std::domain_error("threshold_thm2: fisher and c_pi must be positive");
    detail::check_odds(pi0, pia);
    ThresholdTerms terms;
    terms.log_n = std::log(static_cast<double>(n));
    terms.prior_term = -2.0 * std::log(c_pi);
    terms.info_term = std::log(fisher) - log_2pi;
    terms.odds_term = 2.0 * std::log(pi0 / pia);
    return detail::assemble(terms, ThresholdMethod::asymptotic_thm2);
}

/// Known-sigma Gaussian threshold: the information term reduces to
/// -log(2 pi sigma^2), i.e. threshold_thm2 at fisher = 1/sigma^2.
inline ThresholdResult threshold_thm1(std::int64_t n, double sigma, double c_pi,
                                      double pi0, double pia) {
    if (!(sigma > 0.0)) throw std::domain_error("threshold_thm1: sigma must be positive");
    auto out = threshold_thm2(n, 1.0 / (sigma * sigma), c_pi, pi0, pia);
    out.method = ThresholdMethod::asymptotic_thm1;
    return out;
}

/// Exact finite-n Bayes decision boundary: the root of
/// BF01(t; n) = (pia L1)/(pi0 L0) in t, located by bisection on
/// (0, sqrt(4 log n)) with the quadrature marginal. |dt| <= 1e-10.
inline ThresholdResult threshold_numeric(const TestProblem& problem, std::int64_t n) {
    problem.validate();
    if (n < 2) throw std::domain_error("threshold_numeric: n must be >= 2");
    const double cutoff = std::log(problem.odds_cutoff());
    const auto g = [&](double t) {
        const double xbar = problem.theta0 +
                            t * problem.sigma / std::sqrt(static_cast<double>(n));
        return evidence(problem, xbar, n).log_bf01 - cutoff;
    };
    const double hi = std::sqrt(4.0 * std::log(static_cast<double>(n)));
    const double lo = 1e-6;
    if (!(g(lo) > 0.0 && g(hi) < 0.0))
        throw std::runtime_error("threshold_numeric: Bayes factor does not cross the odds "
                                 "cutoff on (0, sqrt(4 log n))");
    const auto root = bisect(g, lo, hi, 1e-10);
    if (!root.converged)
        throw std::runtime_error("threshold_numeric: bisection did not converge");
    ThresholdResult out;
    out.method = ThresholdMethod::numeric_root;
    out.t_crit = root.x;
    out.t_crit_sq = root.x * root.x;
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    out.terms = {std::log(static_cast<double>(n)), nan, nan, nan};
    return out;
}

/// Horseshoe-local prior variant: t^2 = log n - 2 log log n, with the
/// unstated O(1) constant set to zero (recorded in the method tag).
inline ThresholdResult threshold_horseshoe(std::int64_t n) {
    if (n < 16) throw std::domain_error("threshold_horseshoe: requires n >= 16 (log log n > 1)");
    ThresholdTerms terms;
    terms.log_n = std::log(static_cast<double>(n));
    terms.prior_term = -2.0 * std::log(terms.log_n);
    return detail::assemble(terms, ThresholdMethod::horseshoe);
}

/// Rubin-Sethuraman parameter-scale threshold sqrt((log n)/n) sqrt(lambda + k)
/// with the o(1) term c_n set to zero. k is the dimension of the parameter of
/// interest and lambda the polynomial weight exponent; the nuisance dimension
/// does not enter.
inline double threshold_rs(std::int64_t n, int k, double lambda_exp) {
    if (n < 2) throw std::domain_error("threshold_rs: n must be >= 2");
    if (!(lambda_exp > -static_cast<double>(k)))
        throw std::domain_error("threshold_rs: requires lambda > -k");
    const double logn = std::log(static_cast<double>(n));
    return std::sqrt(logn / static_cast<double>(n)) * std::sqrt(lambda_exp + k);
}

} // namespace mdcal
