#pragma once

// One-dimensional solvers: a safeguarded Newton/bisection hybrid for root
// finding inside a bracket, plain bisection, and golden-section minimization.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace mdcal {

struct RootResult {
    double x = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Root of f inside [lo, hi] where f(lo) and f(hi) have opposite signs.
// Newton steps (using df) are taken while they stay inside the current
// bracket; otherwise the step falls back to bisection. Terminates on
// |f(x)| <= residual_tol.
template <class F, class DF>
RootResult newton_bisect(F&& f, DF&& df, double lo, double hi,
                         double residual_tol, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return {lo, 0.0, 0, true};
    if (fhi == 0.0) return {hi, 0.0, 0, true};
    if (std::signbit(flo) == std::signbit(fhi))
        throw std::domain_error("newton_bisect: no sign change on bracket");

    double x = 0.5 * (lo + hi);
    double fx = f(x);
    RootResult out;
    for (int it = 1; it <= max_iter; ++it) {
        out.iterations = it;
        if (std::abs(fx) <= residual_tol) {
            out.x = x; out.residual = fx; out.converged = true;
            return out;
        }
        if (std::signbit(fx) == std::signbit(flo)) { lo = x; flo = fx; }
        else                                       { hi = x; fhi = fx; }

        const double d = df(x);
        double xn = (d != 0.0) ? x - fx / d : lo;  // force bisection on flat slope
        if (!(xn > lo && xn < hi))
            xn = 0.5 * (lo + hi);
        if (xn == x) {  // bracket exhausted at machine resolution
            out.x = x; out.residual = fx; out.converged = std::abs(fx) <= residual_tol;
            return out;
        }
        x = xn;
        fx = f(x);
    }
    out.x = x; out.residual = fx; out.converged = false;
    return out;
}

// Bisection to an x-tolerance; f(lo) and f(hi) must differ in sign.
template <class F>
RootResult bisect(F&& f, double lo, double hi, double xtol, int max_iter = 400) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return {lo, 0.0, 0, true};
    if (fhi == 0.0) return {hi, 0.0, 0, true};
    if (std::signbit(flo) == std::signbit(fhi))
        throw std::domain_error("bisect: no sign change on bracket");
    RootResult out;
    for (int it = 1; it <= max_iter; ++it) {
        out.iterations = it;
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::signbit(fm) == std::signbit(flo)) { lo = mid; flo = fm; }
        else                                       { hi = mid; fhi = fm; }
        if (hi - lo <= xtol) {
            out.x = 0.5 * (lo + hi); out.residual = fm; out.converged = true;
            return out;
        }
    }
    out.x = 0.5 * (lo + hi);
    out.converged = false;
    return out;
}

struct MinResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
};

// Golden-section minimization of a unimodal f on [a, b] to an x-tolerance.
template <class F>
MinResult golden_section_min(F&& f, double a, double b, double xtol,
                             int max_iter = 400) {
    constexpr double invphi  = 0.6180339887498948482;   // 1/phi
    constexpr double invphi2 = 0.3819660112501051518;   // 1/phi^2
    double x1 = a + invphi2 * (b - a);
    double x2 = a + invphi  * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    int it = 0;
    while (b - a > xtol && it < max_iter) {
        ++it;
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = a + invphi2 * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm), it};
}

} // namespace mdcal
