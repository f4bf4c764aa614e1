// Infrastructure checks: normal CDF/quantile, quadrature, solvers, RNG.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "mdcal/normal.hpp"
#include "mdcal/quadrature.hpp"
#include "mdcal/rng.hpp"
#include "mdcal/roots.hpp"

using namespace mdcal;
using Catch::Approx;

TEST_CASE("normal cdf basics") {
    REQUIRE(norm_cdf(0.0) == Approx(0.5).margin(1e-16));
    REQUIRE(norm_cdf(1.959963984540054) == Approx(0.975).margin(1e-12));
    REQUIRE(norm_cdf(-3.0) + norm_cdf(3.0) == Approx(1.0).margin(1e-15));
    // far tail keeps relative accuracy (reference: asymptotic phi(z)/z series)
    const double z = 20.0;
    const double mills = norm_pdf(z) / z * (1.0 - 1.0 / (z * z) + 3.0 / std::pow(z, 4));
    REQUIRE(norm_tail(z) == Approx(mills).epsilon(1e-4));
    REQUIRE(norm_two_sided_tail(2.0) == Approx(2.0 * norm_tail(2.0)).epsilon(1e-15));
}

TEST_CASE("normal quantile round trips and reference values") {
    REQUIRE(norm_ppf(0.975) == Approx(1.959963984540054).margin(1e-12));
    REQUIRE(norm_ppf(0.5) == Approx(0.0).margin(1e-15));
    for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-10}) {
        const double x = norm_ppf(p);
        REQUIRE(norm_cdf(x) == Approx(p).epsilon(1e-12));
    }
    REQUIRE_THROWS_AS(norm_ppf(0.0), std::domain_error);
    REQUIRE_THROWS_AS(norm_ppf(1.0), std::domain_error);
}

TEST_CASE("chi-square(1) cdf via the normal cdf") {
    REQUIRE(chisq1_cdf(0.0) == 0.0);
    REQUIRE(chisq1_cdf(1.0) == Approx(2.0 * norm_cdf(1.0) - 1.0).epsilon(1e-15));
    REQUIRE(chisq1_cdf(3.841458820694124) == Approx(0.95).margin(1e-12));
}

TEST_CASE("adaptive quadrature on smooth and spiked integrands") {
    auto q = integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0);
    REQUIRE(q.value == Approx(1.0 / 3.0).epsilon(1e-14));
    REQUIRE(q.converged);

    q = integrate_adaptive([](double x) { return norm_pdf(x); }, -8.0, 8.0, 1e-12);
    REQUIRE(q.value == Approx(1.0).epsilon(1e-12));

    // narrow spike: N(0.5, 1e-3) on [0,1] must not be missed
    q = integrate_adaptive([](double x) { return norm_pdf(x, 0.5, 1e-3); },
                           0.0, 1.0, 1e-9, 0.0, 4000, 16);
    REQUIRE(q.converged);
    REQUIRE(q.value == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("golden section locates a quadratic minimum") {
    const auto m = golden_section_min([](double x) { return (x - 1.234) * (x - 1.234); },
                                      -4.0, 7.0, 1e-8);
    REQUIRE(m.x == Approx(1.234).margin(1e-7));
}

TEST_CASE("newton_bisect and bisect solve bracketed roots") {
    const auto r = newton_bisect([](double x) { return x * x * x - 2.0; },
                                 [](double x) { return 3.0 * x * x; }, 0.0, 2.0, 1e-13);
    REQUIRE(r.converged);
    REQUIRE(r.x == Approx(std::cbrt(2.0)).margin(1e-12));

    const auto b = bisect([](double x) { return std::erf(x) - 0.5; }, 0.0, 2.0, 1e-12);
    REQUIRE(b.converged);
    REQUIRE(std::erf(b.x) == Approx(0.5).margin(1e-11));

    REQUIRE_THROWS_AS(newton_bisect([](double x) { return x * x + 1.0; },
                                    [](double x) { return 2.0 * x; }, -1.0, 1.0, 1e-12),
                      std::domain_error);
}

TEST_CASE("counter rng is reproducible and has sane moments") {
    const CounterRng a{12345}, b{12345}, c{54321};
    REQUIRE(a.word(7) == b.word(7));
    REQUIRE(a.word(7) != c.word(7));

    const int n = 200000;
    double mean = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = a.normal(static_cast<std::uint64_t>(i));
        mean += z;
        m2 += z * z;
    }
    mean /= n;
    m2 /= n;
    REQUIRE(mean == Approx(0.0).margin(0.01));
    REQUIRE(m2 == Approx(1.0).margin(0.02));

    for (int i = 0; i < 1000; ++i) {
        const double u = a.u01(static_cast<std::uint64_t>(i));
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
}
