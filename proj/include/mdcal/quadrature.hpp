#pragma once

// Adaptive Gauss-Kronrod (G7/K15) quadrature on a finite interval.
// The interval with the largest error estimate is split until the summed
// estimate meets the tolerance or the segment budget runs out.

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace mdcal {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;    // summed |K15 - G7| over segments
    int segments = 0;
    bool converged = false;
};

namespace detail {

// QUADPACK dqk15 nodes and weights (positive half; node 7 is the midpoint).
inline constexpr double gk_xk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double gk_wk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double gk_wg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

template <class F>
void gk15(F&& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double dx = h * gk_xk[j];
        const double fsum = (j == 7) ? f(c) : f(c - dx) + f(c + dx);
        resk += gk_wk[j] * fsum;
        if (j % 2 == 1) resg += gk_wg[j / 2] * fsum;
        else if (j == 7) resg += gk_wg[3] * fsum;
    }
    kronrod = resk * h;
    err = std::abs((resk - resg) * h);
}

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

} // namespace detail

// Integrate f over [a, b]. Stops when the summed error estimate is below
// max(abs_tol, rel_tol * |integral|). `initial_splits` seeds the heap with
// a uniform partition so narrow features are not missed by a single pass.
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b,
                              double rel_tol = 1e-10, double abs_tol = 0.0,
                              int max_segments = 4000, int initial_splits = 8) {
    if (!(b > a)) throw std::domain_error("integrate_adaptive: empty interval");
    std::priority_queue<detail::Segment> heap;
    double total = 0.0, total_err = 0.0;
    const double w = (b - a) / initial_splits;
    for (int i = 0; i < initial_splits; ++i) {
        detail::Segment s{a + i * w, a + (i + 1) * w, 0.0, 0.0};
        detail::gk15(f, s.a, s.b, s.value, s.error);
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }
    int n_seg = initial_splits;
    while (n_seg < max_segments) {
        const double tol = std::max(abs_tol, rel_tol * std::abs(total));
        if (total_err <= tol) break;
        detail::Segment worst = heap.top();
        heap.pop();
        total -= worst.value;
        total_err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        detail::Segment left{worst.a, mid, 0.0, 0.0};
        detail::Segment right{mid, worst.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        total += left.value + right.value;
        total_err += left.error + right.error;
        heap.push(left);
        heap.push(right);
        ++n_seg;
    }
    QuadResult out;
    out.value = total;
    out.error = total_err;
    out.segments = n_seg;
    out.converged = total_err <= std::max(abs_tol, rel_tol * std::abs(total));
    return out;
}

} // namespace mdcal
