#pragma once

// Standard-normal density, CDF, tails and quantile at double precision.
// The CDF goes through std::erfc so the far tail keeps full relative
// accuracy; the quantile is Acklam's rational approximation polished by
// one Halley step against the erfc-based CDF.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdcal {

inline constexpr double sqrt_2pi = 2.5066282746310005024;
inline constexpr double inv_sqrt_2pi = 0.3989422804014326779;
inline constexpr double sqrt_2 = 1.4142135623730950488;
inline constexpr double log_2pi = 1.8378770664093454836;

inline double norm_pdf(double x) {
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double norm_pdf(double x, double mu, double sd) {
    const double z = (x - mu) / sd;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z) / sd;
}

inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / sqrt_2);
}

// Upper tail 1 - Phi(x), accurate for large x.
inline double norm_tail(double x) {
    return 0.5 * std::erfc(x / sqrt_2);
}

// Two-sided tail P(|Z| > z) = 2(1 - Phi(z)) = erfc(z/sqrt(2)).
inline double norm_two_sided_tail(double z) {
    return std::erfc(z / sqrt_2);
}

namespace detail {

// Acklam's rational approximation to the normal quantile (~1e-9).
inline double acklam_ppf(double p) {
    static constexpr double a[6] = {
        -3.969683028665376e+01,  2.209460984245205e+02, -2.759285104469687e+02,
         1.383577518672690e+02, -3.066479806614716e+01,  2.506628277459239e+00};
    static constexpr double b[5] = {
        -5.447609879822406e+01,  1.615858368580409e+02, -1.556989798598866e+02,
         6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr double c[6] = {
        -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
        -2.549732539343734e+00,  4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {
         7.784695709041462e-03,  3.224671290700398e-01,  2.445134137142996e+00,
         3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0]*q + c[1])*q + c[2])*q + c[3])*q + c[4])*q + c[5]) /
               ((((d[0]*q + d[1])*q + d[2])*q + d[3])*q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0]*q + c[1])*q + c[2])*q + c[3])*q + c[4])*q + c[5]) /
                ((((d[0]*q + d[1])*q + d[2])*q + d[3])*q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0]*r + a[1])*r + a[2])*r + a[3])*r + a[4])*r + a[5]) * q /
           (((((b[0]*r + b[1])*r + b[2])*r + b[3])*r + b[4])*r + 1.0);
}

} // namespace detail

inline double norm_ppf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("norm_ppf: p must lie in (0,1)");
    double x = detail::acklam_ppf(p);
    // One Halley step; the error term is evaluated with the full-precision CDF.
    for (int i = 0; i < 2; ++i) {
        const double e = norm_cdf(x) - p;
        if (e == 0.0) break;
        const double u = e * sqrt_2pi * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

// Chi-square(1) CDF without a gamma-function dependency: F(x) = 2 Phi(sqrt(x)) - 1.
inline double chisq1_cdf(double x) {
    if (x <= 0.0) return 0.0;
    return std::erf(std::sqrt(0.5 * x));
}

} // namespace mdcal
