#pragma once

// Deviation-regime classification, the moderate deviation tail
// approximation and its exact and Monte Carlo oracles, and the decaying
// significance level implied by a log n rejection boundary.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "model.hpp"
#include "normal.hpp"
#include "rng.hpp"

namespace mdcal {

enum class Regime { CLT, MODERATE, LARGE };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::CLT: return "CLT";
        case Regime::MODERATE: return "MODERATE";
        case Regime::LARGE: return "LARGE";
    }
    return "?";
}

struct RegimeLabel {
    Regime label = Regime::CLT;
    double z = 0.0;  // implied standardized deviation sqrt(n) lambda / sigma
};

struct ScaleRule {
    enum class Kind { c_over_sqrt_n, rs_boundary, fixed } kind;
    double value;  // c, a, or the fixed lambda respectively

    static ScaleRule c_over_sqrt_n(double c) { return {Kind::c_over_sqrt_n, c}; }
    static ScaleRule rs_boundary(double a) { return {Kind::rs_boundary, a}; }
    static ScaleRule fixed(double c) { return {Kind::fixed, c}; }
};

/// lambda_n = c/sqrt(n) is the CLT scale, lambda_n = a sqrt((log n)/n) the
/// moderate (Rubin-Sethuraman) scale, fixed lambda the large deviation scale.
inline RegimeLabel classify_regime(const ScaleRule& rule, std::int64_t n, double sigma = 1.0) {
    if (n < 3) throw std::domain_error("classify_regime: n must be >= 3");
    if (!(sigma > 0.0)) throw std::domain_error("classify_regime: sigma must be positive");
    const double nd = static_cast<double>(n);
    switch (rule.kind) {
        case ScaleRule::Kind::c_over_sqrt_n:
            return {Regime::CLT, rule.value / sigma};
        case ScaleRule::Kind::rs_boundary:
            return {Regime::MODERATE, (rule.value / sigma) * std::sqrt(std::log(nd))};
        case ScaleRule::Kind::fixed:
            return {Regime::LARGE, std::sqrt(nd) * rule.value / sigma};
    }
    throw std::domain_error("classify_regime: bad rule");
}

enum class TailMethod { lemma1, exact_gaussian, monte_carlo };

inline const char* to_string(TailMethod m) {
    switch (m) {
        case TailMethod::lemma1: return "lemma1";
        case TailMethod::exact_gaussian: return "exact_gaussian";
        case TailMethod::monte_carlo: return "monte_carlo";
    }
    return "?";
}

struct TailEstimate {
    double value = 0.0;
    double se = 0.0;  // 0 for analytic methods
    TailMethod method = TailMethod::lemma1;
};

/// Moderate deviation approximation to P(|mean - theta0| > a sqrt((log n)/n)):
/// (sqrt(2) sigma / (a sqrt(pi log n))) n^{-a^2/(2 sigma^2)}. Leading term
/// only; no higher-order Cramer correction is applied.
inline TailEstimate tail_lemma1(std::int64_t n, double a, double sigma) {
    if (n < 3) throw std::domain_error("tail_lemma1: n must be >= 3");
    if (!(a > 0.0) || !(sigma > 0.0))
        throw std::domain_error("tail_lemma1: a and sigma must be positive");
    const double logn = std::log(static_cast<double>(n));
    const double value = sqrt_2 * sigma / (a * std::sqrt(M_PI * logn)) *
                         std::exp(-(a * a) / (2.0 * sigma * sigma) * logn);
    return {value, 0.0, TailMethod::lemma1};
}

/// Exact two-sided tail under Gaussian sampling: 2(1 - Phi(sqrt(n) lambda / sigma)).
inline TailEstimate tail_exact_gaussian(std::int64_t n, double lambda, double sigma) {
    if (n < 1 || !(lambda >= 0.0) || !(sigma > 0.0))
        throw std::domain_error("tail_exact_gaussian: bad arguments");
    const double z = std::sqrt(static_cast<double>(n)) * lambda / sigma;
    return {norm_two_sided_tail(z), 0.0, TailMethod::exact_gaussian};
}

/// Monte Carlo tail estimate: the fraction of `reps` simulated samples of
/// size n whose mean deviates from theta0 by more than lambda. Draw j of
/// replicate r uses counter r*n + j, so the result is bitwise reproducible
/// for a given seed under any work partition. With zero hits, `se` carries
/// the one-sided 95% Clopper-Pearson upper bound instead.
inline TailEstimate mc_tail(const ModelFamily& fam, std::int64_t n, double lambda,
                            std::int64_t reps, std::uint64_t seed) {
    if (n < 1) throw std::domain_error("mc_tail: n must be >= 1");
    if (reps < 10000) throw std::domain_error("mc_tail: reps must be >= 1e4");
    if (!fam.quantile) throw std::domain_error("mc_tail: family does not support sampling");
    const CounterRng rng{seed};
    std::int64_t hits = 0;
    const double inv_n = 1.0 / static_cast<double>(n);

    if (fam.kind == FamilyKind::bernoulli) {
        const double p0 = fam.theta0;
        // classify on integer counts with the same cuts as the exact tail
        // sum, so boundary atoms are never lost to rounding of c/n
        const auto k_hi = static_cast<std::int64_t>(std::floor(n * (p0 + lambda))) + 1;
        const auto k_lo = static_cast<std::int64_t>(std::ceil(n * (p0 - lambda))) - 1;
        for (std::int64_t r = 0; r < reps; ++r) {
            const std::uint64_t base = static_cast<std::uint64_t>(r) * n;
            std::int64_t c = 0;
            for (std::int64_t j = 0; j < n; ++j)
                c += rng.u01(base + j) < p0;
            if (c >= k_hi || c <= k_lo) ++hits;
        }
    } else if (fam.kind == FamilyKind::gaussian) {
        const double sd = std::sqrt(fam.sigma2);
        for (std::int64_t r = 0; r < reps; ++r) {
            const std::uint64_t base = static_cast<std::uint64_t>(r) * n;
            double sum = 0.0;  // of standardized draws; the mean shift cancels
            for (std::int64_t j = 0; j < n; ++j)
                sum += norm_ppf(rng.u01(base + j));
            if (std::abs(sd * sum * inv_n) > lambda) ++hits;
        }
    } else {
        for (std::int64_t r = 0; r < reps; ++r) {
            const std::uint64_t base = static_cast<std::uint64_t>(r) * n;
            double sum = 0.0;
            for (std::int64_t j = 0; j < n; ++j)
                sum += fam.quantile(rng.u01(base + j));
            if (std::abs(sum * inv_n - fam.theta0) > lambda) ++hits;
        }
    }
    TailEstimate out;
    out.method = TailMethod::monte_carlo;
    out.value = static_cast<double>(hits) / static_cast<double>(reps);
    if (hits == 0)
        out.se = 1.0 - std::pow(0.05, 1.0 / static_cast<double>(reps));
    else
        out.se = std::sqrt(out.value * (1.0 - out.value) / static_cast<double>(reps));
    return out;
}

/// Significance level of the boundary Z^2 < A + log n, by the Mills-ratio
/// asymptotic: sqrt(2/pi) e^{-A/2} / sqrt(n log n).
inline double lindley_alpha(std::int64_t n, double A) {
    if (n < 3) throw std::domain_error("lindley_alpha: n must be >= 3");
    const double nd = static_cast<double>(n);
    return std::sqrt(2.0 / M_PI) * std::exp(-0.5 * A) / std::sqrt(nd * std::log(nd));
}

} // namespace mdcal
