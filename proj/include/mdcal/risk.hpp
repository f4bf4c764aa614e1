#pragma once

// Integrated Bayes risk of two-sided threshold rules, the brute-force
// risk-optimal boundary, Chernoff information with the Efron-Truax
// prefactor, and the bivariate-normal scoring risk.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "evidence.hpp"
#include "model.hpp"
#include "normal.hpp"
#include "quadrature.hpp"
#include "roots.hpp"

namespace mdcal {

// ---------------------------------------------------------------------------
// Risk curves
// ---------------------------------------------------------------------------

struct RiskCurve {
    std::int64_t n = 0;
    std::vector<double> grid;    // ascending thresholds c
    std::vector<double> alpha;   // type I error, exact
    std::vector<double> beta;    // prior-integrated type II error
    std::vector<double> total;   // pi0 L0 alpha + pia L1 beta
    double c_star = 0.0;
    double r_star = 0.0;
};

/// Prior-integrated type II error of the rule "reject when |t| > c":
/// beta_n(c) = integral of [Phi(c - v) - Phi(-c - v)] over the prior of
/// v = sqrt(n)(theta - theta0)/sigma. The weight factor dies off beyond
/// |v| ~ c + 12, which bounds the truncation error below e^{-72}.
inline double integrated_type2(const TestProblem& problem, std::int64_t n, double c) {
    const double s = problem.sigma / std::sqrt(static_cast<double>(n));
    const double V = c + 14.0;
    const auto f = [&](double v) {
        const double w = norm_cdf(c - v) - norm_cdf(-c - v);
        return w * problem.prior.density(problem.theta0 + s * v) * s;
    };
    const auto q = integrate_adaptive(f, -V, V, 1e-8, 1e-300, 4000, 16);
    if (!q.converged)
        throw std::runtime_error("integrated_type2: quadrature tolerance not reached");
    return q.value;
}

inline double bayes_risk(const TestProblem& problem, std::int64_t n, double c) {
    const double alpha = norm_two_sided_tail(c);
    return problem.pi0 * problem.L0 * alpha +
           problem.pia * problem.L1 * integrated_type2(problem, n, c);
}

/// Evaluate the risk decomposition on a threshold grid and refine the grid
/// minimum by golden section to |dc| <= 1e-6.
inline RiskCurve risk_curve(const TestProblem& problem, std::int64_t n,
                            std::vector<double> grid) {
    problem.validate();
    if (!problem.prior.is_proper())
        throw std::domain_error("risk_curve: prior must be proper");
    if (grid.size() < 2) throw std::domain_error("risk_curve: grid needs >= 2 points");
    const double c_max = std::sqrt(6.0 * std::log(static_cast<double>(n)));
    for (size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] < c_max))
            throw std::domain_error("risk_curve: grid must lie in [0, sqrt(6 log n))");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw std::domain_error("risk_curve: grid must be strictly ascending");
    }
    RiskCurve out;
    out.n = n;
    out.grid = std::move(grid);
    out.alpha.reserve(out.grid.size());
    out.beta.reserve(out.grid.size());
    out.total.reserve(out.grid.size());
    size_t imin = 0;
    for (size_t i = 0; i < out.grid.size(); ++i) {
        const double c = out.grid[i];
        const double a = norm_two_sided_tail(c);
        const double b = integrated_type2(problem, n, c);
        out.alpha.push_back(a);
        out.beta.push_back(b);
        out.total.push_back(problem.pi0 * problem.L0 * a + problem.pia * problem.L1 * b);
        if (out.total[i] < out.total[imin]) imin = i;
    }
    const double lo = out.grid[imin == 0 ? 0 : imin - 1];
    const double hi = out.grid[std::min(imin + 1, out.grid.size() - 1)];
    const auto m = golden_section_min(
        [&](double c) { return bayes_risk(problem, n, c); }, lo, hi, 1e-6);
    out.c_star = m.x;
    out.r_star = m.fx;
    return out;
}

inline std::vector<double> default_risk_grid(std::int64_t n, int points = 72) {
    const double hi = std::sqrt(5.9 * std::log(static_cast<double>(n)));
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = 0.25 + (hi - 0.25) * i / (points - 1);
    return g;
}

/// Brute-force minimizer of the integrated risk for each n.
inline std::vector<std::pair<std::int64_t, double>>
risk_optimal_boundary(const TestProblem& problem, const std::vector<std::int64_t>& n_grid) {
    std::vector<std::pair<std::int64_t, double>> out;
    out.reserve(n_grid.size());
    for (const auto n : n_grid) {
        const auto curve = risk_curve(problem, n, default_risk_grid(n));
        out.emplace_back(n, curve.c_star);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chernoff information and error exponents
// ---------------------------------------------------------------------------

struct ChernoffResult {
    double d_c = 0.0;     // Chernoff information, nats
    double s_star = 0.5;  // minimizing exponent in [0,1]
    std::optional<double> prefactor_error;  // Efron-Truax approximation
    std::optional<double> exact_error;      // exact error, when available
};

namespace detail {

// log integral of f0^{1-s} f1^s over the common support.
template <class D0, class D1>
double log_hellinger_integral(const D0& f0, const D1& f1, Support support,
                              double lo, double hi, double s) {
    if (support == Support::lattice_01) {
        double sum = 0.0;
        for (double x : {0.0, 1.0})
            sum += std::pow(f0(x), 1.0 - s) * std::pow(f1(x), s);
        return std::log(sum);
    }
    const auto f = [&](double x) {
        const double a = f0(x), b = f1(x);
        if (a <= 0.0 || b <= 0.0) return 0.0;
        return std::exp((1.0 - s) * std::log(a) + s * std::log(b));
    };
    const auto q = integrate_adaptive(f, lo, hi, 1e-12, 1e-300, 4000, 24);
    if (!q.converged || !(q.value > 0.0))
        throw std::domain_error("chernoff_information: tilted integral not finite");
    return std::log(q.value);
}

} // namespace detail

/// D_C = -min_{0<=s<=1} log int f0^{1-s} f1^s, minimized by golden section;
/// the inner integral is an exact two-point sum for lattice families and
/// adaptive quadrature for continuous ones. Only the exponent is reported
/// here; prefactors require the sample size (see efron_truax_error).
inline ChernoffResult chernoff_information(const ModelFamily& f0, const ModelFamily& f1) {
    if (f0.support != f1.support)
        throw std::domain_error("chernoff_information: families must share a support");
    double lo = 0.0, hi = 1.0;
    if (f0.support == Support::continuous_real) {
        const double s0 = std::sqrt(f0.sigma2), s1 = std::sqrt(f1.sigma2);
        lo = std::min(f0.theta0 - 14.0 * s0, f1.theta0 - 14.0 * s1);
        hi = std::max(f0.theta0 + 14.0 * s0, f1.theta0 + 14.0 * s1);
    }
    const auto g = [&](double s) {
        return detail::log_hellinger_integral(f0.obs_density, f1.obs_density,
                                              f0.support, lo, hi, s);
    };
    const auto m = golden_section_min(g, 0.0, 1.0, 1e-8);
    ChernoffResult out;
    out.d_c = -m.fx;
    out.s_star = m.x;
    return out;
}

/// Error of the midpoint Bayes rule for the one-sided Gaussian pair
/// mu0 = 0 vs mu1 = delta: the Efron-Truax refinement
/// (2 sigma / (delta sqrt(2 pi n))) exp(-n delta^2 / (8 sigma^2)) next to
/// the exact 1 - Phi(sqrt(n) delta / (2 sigma)).
inline ChernoffResult efron_truax_error(std::int64_t n, double delta, double sigma) {
    if (n < 1 || !(delta > 0.0) || !(sigma > 0.0))
        throw std::domain_error("efron_truax_error: n >= 1, delta > 0, sigma > 0 required");
    const double nd = static_cast<double>(n);
    ChernoffResult out;
    out.d_c = delta * delta / (8.0 * sigma * sigma);
    out.s_star = 0.5;
    out.prefactor_error = 2.0 * sigma / (delta * std::sqrt(2.0 * M_PI * nd)) *
                          std::exp(-nd * out.d_c);
    out.exact_error = norm_tail(std::sqrt(nd) * delta / (2.0 * sigma));
    return out;
}

// ---------------------------------------------------------------------------
// Bivariate-normal scoring risk
// ---------------------------------------------------------------------------

/// P{U > a, V < b} for (U,V) standard bivariate normal with correlation rho,
/// by integrating Phi((b - rho u)/sqrt(1-rho^2)) phi(u) over u > a.
/// Absolute error <= 1e-10.
inline double orthant_gt_lt(double a, double b, double rho) {
    if (std::abs(rho) >= 1.0 - 1e-12)
        throw std::domain_error("orthant_gt_lt: correlation too close to +-1");
    const double denom = std::sqrt(1.0 - rho * rho);
    const double lo = std::max(a, -40.0);
    const double hi = std::max(lo + 1.0, 40.0);
    const auto f = [&](double u) {
        return norm_pdf(u) * norm_cdf((b - rho * u) / denom);
    };
    const auto q = integrate_adaptive(f, lo, hi, 1e-13, 1e-12, 4000, 16);
    return std::clamp(q.value, 0.0, 1.0);
}

/// P{U < a, V > b} via the complement inside u < a.
inline double orthant_lt_gt(double a, double b, double rho) {
    if (std::abs(rho) >= 1.0 - 1e-12)
        throw std::domain_error("orthant_lt_gt: correlation too close to +-1");
    const double denom = std::sqrt(1.0 - rho * rho);
    const double hi = std::min(a, 40.0);
    const double lo = std::min(hi - 1.0, -40.0);
    const auto f = [&](double u) {
        return norm_pdf(u) * norm_tail((b - rho * u) / denom);
    };
    const auto q = integrate_adaptive(f, lo, hi, 1e-13, 1e-12, 4000, 16);
    return std::clamp(q.value, 0.0, 1.0);
}

/// Frequentist risk of the posterior-mean acceptance rule under a scoring
/// prior N(mu_s, tau_s^2), reduced to two bivariate-normal orthant
/// probabilities with rho = (1 + sigma^2/(n tau_s^2))^{-1/2},
/// a = (theta0 - mu_s)/tau_s, b = rho (cutoff - mu_s)/tau_s. The training
/// prior (mu_t, tau_t) enters only through the supplied cutoff.
inline double scoring_risk(std::int64_t n, double sigma, double tau_t, double mu_t,
                           double tau_s, double mu_s, double theta0,
                           double L0, double L1, double cutoff) {
    (void)mu_t;  // the training-prior mean is absorbed into the cutoff
    if (n < 1 || !(sigma > 0.0) || !(tau_t > 0.0) || !(tau_s > 0.0))
        throw std::domain_error("scoring_risk: scales must be positive, n >= 1");
    const double rho = 1.0 / std::sqrt(1.0 + sigma * sigma /
                                       (static_cast<double>(n) * tau_s * tau_s));
    if (std::abs(rho) >= 1.0 - 1e-12)
        throw std::domain_error("scoring_risk: degenerate correlation");
    const double a = (theta0 - mu_s) / tau_s;
    const double b = rho * (cutoff - mu_s) / tau_s;
    return L0 * orthant_gt_lt(a, b, rho) + L1 * orthant_lt_gt(a, b, rho);
}

} // namespace mdcal
