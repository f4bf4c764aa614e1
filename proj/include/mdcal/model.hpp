#pragma once

// One-parameter sampling models described through the cumulant generating
// function of a single observation: psi(t) = log E[exp(t X_1)] under the
// null parameter. Legendre transforms, saddlepoint densities and Chernoff
// bounds are computed from psi and its derivatives.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include "normal.hpp"
#include "roots.hpp"

namespace mdcal {

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double x) const { return x > lo && x < hi; }
};

enum class FamilyKind { gaussian, bernoulli, custom };
enum class Support { continuous_real, lattice_01 };

struct ModelFamily {
    std::string name;
    FamilyKind kind = FamilyKind::custom;
    std::function<double(double)> psi;    // log-MGF of X_1, psi(0) = 0
    std::function<double(double)> psi1;
    std::function<double(double)> psi2;   // > 0 on mgf_domain
    std::function<double(double)> psi3;
    double theta0 = 0.0;                  // null parameter (= null mean here)
    Interval mgf_domain;
    Interval mean_range;                  // interior of psi1(mgf_domain)
    double sigma2 = 1.0;                  // psi''(0) = Var(X_1) under the null
    double fisher = 1.0;                  // I(theta0) in the mean parametrization
    Support support = Support::continuous_real;
    std::function<double(double)> obs_density;              // density/pmf of X_1
    std::function<double(double)> quantile;                 // inverse CDF, for sampling
    std::function<double(std::int64_t, double)> exact_tail; // (n, lambda) -> P(|mean - theta0| > lambda); may be empty
};

// P(X >= k) for X ~ Binomial(n, p), by direct summation of log-space terms.
inline double binomial_tail_ge(std::int64_t n, double p, std::int64_t k) {
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    const double lp = std::log(p), lq = std::log1p(-p);
    const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    double sum = 0.0;
    for (std::int64_t j = n; j >= k; --j) {  // smallest terms first
        const double lt = lgn - std::lgamma(static_cast<double>(j) + 1.0)
                              - std::lgamma(static_cast<double>(n - j) + 1.0)
                        + j * lp + (n - j) * lq;
        sum += std::exp(lt);
    }
    return std::min(sum, 1.0);
}

// P(|X/n - p0| > lambda) for X ~ Binomial(n, p0), strict inequality.
inline double binomial_mean_two_sided_tail(std::int64_t n, double p0, double lambda) {
    const double hi = n * (p0 + lambda);
    const double lo = n * (p0 - lambda);
    // X/n > p0 + lambda  <=>  X >= floor(hi) + 1
    const auto k_hi = static_cast<std::int64_t>(std::floor(hi)) + 1;
    // X/n < p0 - lambda  <=>  X <= ceil(lo) - 1
    const auto k_lo = static_cast<std::int64_t>(std::ceil(lo)) - 1;
    double p = binomial_tail_ge(n, p0, k_hi);
    if (k_lo >= 0) p += 1.0 - binomial_tail_ge(n, p0, k_lo + 1);
    return std::min(p, 1.0);
}

inline ModelFamily gaussian_family(double theta0, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("gaussian_family: sigma must be positive");
    ModelFamily m;
    m.name = "gaussian";
    m.kind = FamilyKind::gaussian;
    const double s2 = sigma * sigma;
    m.psi  = [theta0, s2](double t) { return theta0 * t + 0.5 * s2 * t * t; };
    m.psi1 = [theta0, s2](double t) { return theta0 + s2 * t; };
    m.psi2 = [s2](double) { return s2; };
    m.psi3 = [](double) { return 0.0; };
    m.theta0 = theta0;
    m.mgf_domain = {};  // all reals
    m.mean_range = {};
    m.sigma2 = s2;
    m.fisher = 1.0 / s2;
    m.support = Support::continuous_real;
    m.obs_density = [theta0, sigma](double x) { return norm_pdf(x, theta0, sigma); };
    m.quantile = [theta0, sigma](double u) { return theta0 + sigma * norm_ppf(u); };
    m.exact_tail = [sigma](std::int64_t n, double lambda) {
        return norm_two_sided_tail(std::sqrt(static_cast<double>(n)) * lambda / sigma);
    };
    return m;
}

inline ModelFamily bernoulli_family(double p0) {
    if (!(p0 > 0.0 && p0 < 1.0)) throw std::domain_error("bernoulli_family: p0 must lie in (0,1)");
    ModelFamily m;
    m.name = "bernoulli";
    m.kind = FamilyKind::bernoulli;
    m.psi  = [p0](double t) {
        // log(1 - p0 + p0 e^t), written to stay finite for large |t|
        if (t > 0.0) return t + std::log(p0 + (1.0 - p0) * std::exp(-t));
        return std::log1p(p0 * std::expm1(t));
    };
    m.psi1 = [p0](double t) {
        return 1.0 / (1.0 + ((1.0 - p0) / p0) * std::exp(-t));
    };
    m.psi2 = [m1 = m.psi1](double t) {
        const double mu = m1(t);
        return mu * (1.0 - mu);
    };
    m.psi3 = [m1 = m.psi1](double t) {
        const double mu = m1(t);
        return mu * (1.0 - mu) * (1.0 - 2.0 * mu);
    };
    m.theta0 = p0;
    m.mgf_domain = {};        // finite everywhere
    m.mean_range = {0.0, 1.0};
    m.sigma2 = p0 * (1.0 - p0);
    m.fisher = 1.0 / (p0 * (1.0 - p0));
    m.support = Support::lattice_01;
    m.obs_density = [p0](double x) {
        if (x == 1.0) return p0;
        if (x == 0.0) return 1.0 - p0;
        return 0.0;
    };
    m.quantile = [p0](double u) { return u < p0 ? 1.0 : 0.0; };
    m.exact_tail = [p0](std::int64_t n, double lambda) {
        return binomial_mean_two_sided_tail(n, p0, lambda);
    };
    return m;
}

struct RateFunctionResult {
    double value = 0.0;       // I(lambda), nats
    double argmax_t = 0.0;    // tilt t* with psi'(t*) = lambda
    bool converged = false;
};

namespace detail {

// Expand a bracket for psi'(t) = lambda outward from 0, staying inside the
// MGF domain. psi' is increasing (psi strictly convex).
inline std::pair<double, double> bracket_tilt(const ModelFamily& fam, double lambda) {
    const double cap = 700.0;  // beyond this exp() saturates anyway
    double lo = std::max(fam.mgf_domain.lo, -1.0);
    double hi = std::min(fam.mgf_domain.hi, 1.0);
    if (fam.mgf_domain.lo > -1.0) lo = 0.5 * (fam.mgf_domain.lo);
    if (fam.mgf_domain.hi < 1.0) hi = 0.5 * (fam.mgf_domain.hi);
    int guard = 0;
    while (fam.psi1(lo) > lambda && ++guard < 80) {
        if (std::isinf(fam.mgf_domain.lo)) lo = std::max(-cap, 2.0 * lo);
        else lo = 0.5 * (lo + fam.mgf_domain.lo);
        if (lo <= -cap) break;
    }
    guard = 0;
    while (fam.psi1(hi) < lambda && ++guard < 80) {
        if (std::isinf(fam.mgf_domain.hi)) hi = std::min(cap, 2.0 * hi);
        else hi = 0.5 * (hi + fam.mgf_domain.hi);
        if (hi >= cap) break;
    }
    return {lo, hi};
}

} // namespace detail

/// Cramer rate function I(lambda) = sup_t { t*lambda - psi(t) }, computed by
/// solving psi'(t*) = lambda with bracketed bisection refined by Newton
/// steps (residual tolerance 1e-12).
inline RateFunctionResult rate_function(const ModelFamily& fam, double lambda) {
    if (!fam.mean_range.contains(lambda))
        throw std::domain_error("rate_function: lambda outside the open mean range");
    auto [lo, hi] = detail::bracket_tilt(fam, lambda);
    const auto root = newton_bisect(
        [&](double t) { return fam.psi1(t) - lambda; },
        [&](double t) { return fam.psi2(t); },
        lo, hi, 1e-12);
    if (!root.converged)
        throw std::runtime_error("rate_function: tilt solver did not converge, residual "
                                 + std::to_string(root.residual));
    RateFunctionResult out;
    out.argmax_t = root.x;
    out.value = std::max(0.0, root.x * lambda - fam.psi(root.x));
    out.converged = true;
    return out;
}

/// Saddlepoint approximation to the density of the sample mean at theta_hat:
/// sqrt(n / (2 pi psi''(t*))) * exp(n [psi(t*) - t* theta_hat]). The exponent
/// equals -n I(theta_hat); exact for the Gaussian family.
inline double saddlepoint_density(const ModelFamily& fam, std::int64_t n, double theta_hat) {
    if (n < 1) throw std::domain_error("saddlepoint_density: n must be >= 1");
    const auto rate = rate_function(fam, theta_hat);
    const double curv = fam.psi2(rate.argmax_t);
    return std::sqrt(static_cast<double>(n) / (2.0 * M_PI * curv)) *
           std::exp(-static_cast<double>(n) * rate.value);
}

struct ChernoffBound {
    double value = 1.0;
    bool vacuous = false;  // c/n <= p0: the bound carries no information
};

/// inf_{t>=0} exp(-t c) ((1-p0) + p0 e^t)^n for P(X >= c), X ~ Bin(n, p0).
/// For c/n > p0 this equals exp(-n I(c/n)) with I the Bernoulli rate function.
inline ChernoffBound chernoff_bound_binomial(std::int64_t n, double p0, double c) {
    if (!(p0 > 0.0 && p0 < 1.0)) throw std::domain_error("chernoff_bound_binomial: p0 in (0,1)");
    if (!(c >= 0.0 && c <= static_cast<double>(n)))
        throw std::domain_error("chernoff_bound_binomial: c must lie in [0, n]");
    const double a = c / static_cast<double>(n);
    if (a <= p0) return {1.0, true};
    if (a >= 1.0 - 1e-12) {
        // the infimum is approached as t -> infinity: p0^n
        return {std::exp(static_cast<double>(n) * std::log(p0)), false};
    }
    const auto h = [&](double t) {
        return -t * c + static_cast<double>(n) * std::log1p(p0 * std::expm1(t));
    };
    // minimizer in closed form is log(a(1-p0)/((1-a)p0)); give golden section room
    const double t_star = std::log(a * (1.0 - p0) / ((1.0 - a) * p0));
    const auto m = golden_section_min(h, 0.0, 2.0 * t_star + 1.0, 1e-12);
    return {std::exp(m.fx), false};
}

} // namespace mdcal
