#pragma once

// Alternative-hypothesis priors. Each prior evaluates its density anywhere;
// what the threshold formulas need from it is the local value pi(theta0)
// and, for the Laplace correction, two local derivatives.

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "normal.hpp"

namespace mdcal {

enum class PriorKind { gaussian, cauchy, student_t, flat_local, horseshoe_local };

struct PriorSpec {
    PriorKind kind = PriorKind::flat_local;
    // gaussian: p1=mu, p2=tau; cauchy: p1=loc, p2=scale;
    // student_t: p1=loc, p2=scale, p3=df; flat_local: p1=c_pi;
    // horseshoe_local: p1=scale
    double p1 = 0.0, p2 = 1.0, p3 = 1.0;

    double density(double theta) const {
        switch (kind) {
            case PriorKind::gaussian:
                return norm_pdf(theta, p1, p2);
            case PriorKind::cauchy: {
                const double u = (theta - p1) / p2;
                return 1.0 / (M_PI * p2 * (1.0 + u * u));
            }
            case PriorKind::student_t: {
                const double u = (theta - p1) / p2;
                const double df = p3;
                const double lognorm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df)
                                     - 0.5 * std::log(df * M_PI) - std::log(p2);
                return std::exp(lognorm - 0.5 * (df + 1.0) * std::log1p(u * u / df));
            }
            case PriorKind::flat_local:
                return p1;
            case PriorKind::horseshoe_local: {
                // pi(theta) ~ log(1 + 1/u^2), unnormalized; unbounded at 0
                const double u = theta / p1;
                if (u == 0.0) return std::numeric_limits<double>::infinity();
                return std::log1p(1.0 / (u * u));
            }
        }
        return 0.0;
    }

    bool is_regular() const { return kind != PriorKind::horseshoe_local; }
    bool is_proper() const {
        return kind == PriorKind::gaussian || kind == PriorKind::cauchy ||
               kind == PriorKind::student_t;
    }
    double location() const {
        return (kind == PriorKind::flat_local || kind == PriorKind::horseshoe_local)
                   ? 0.0 : p1;
    }
    double scale() const {
        switch (kind) {
            case PriorKind::gaussian:
            case PriorKind::cauchy:
            case PriorKind::student_t: return p2;
            case PriorKind::horseshoe_local: return p1;
            case PriorKind::flat_local: return 1.0;
        }
        return 1.0;
    }
    std::string describe() const;
};

inline PriorSpec gaussian_prior(double mu, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("gaussian prior: tau must be positive");
    return {PriorKind::gaussian, mu, tau, 0.0};
}
inline PriorSpec cauchy_prior(double loc, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("cauchy prior: scale must be positive");
    return {PriorKind::cauchy, loc, scale, 0.0};
}
inline PriorSpec student_t_prior(double loc, double scale, double df) {
    if (!(scale > 0.0) || !(df > 0.0))
        throw std::invalid_argument("student_t prior: scale and df must be positive");
    return {PriorKind::student_t, loc, scale, df};
}
inline PriorSpec flat_local_prior(double c_pi) {
    if (!(c_pi > 0.0)) throw std::invalid_argument("flat prior: c_pi must be positive");
    return {PriorKind::flat_local, c_pi, 0.0, 0.0};
}
inline PriorSpec horseshoe_local_prior(double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("horseshoe prior: scale must be positive");
    return {PriorKind::horseshoe_local, scale, 0.0, 0.0};
}

/// Local prior density c_pi = pi(theta0). The horseshoe local form is
/// unbounded at the null and has no finite c_pi; callers must take the
/// dedicated horseshoe threshold path instead.
inline double local_density(const PriorSpec& prior, double theta0) {
    if (!prior.is_regular())
        throw std::domain_error("local_density: horseshoe prior has unbounded local density");
    return prior.density(theta0);
}

struct PriorTaylor {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Density with first and second derivative at x. Analytic for the gaussian
/// and cauchy kinds, exact zeros for flat_local, central finite differences
/// (h = 1e-5 * max(1, |x|)) otherwise.
inline PriorTaylor taylor_at(const PriorSpec& prior, double x) {
    if (!prior.is_regular())
        throw std::domain_error("taylor_at: horseshoe prior is not regular at the null");
    PriorTaylor out;
    switch (prior.kind) {
        case PriorKind::gaussian: {
            const double tau2 = prior.p2 * prior.p2;
            const double d = (x - prior.p1);
            out.value = prior.density(x);
            out.d1 = -d / tau2 * out.value;
            out.d2 = (d * d - tau2) / (tau2 * tau2) * out.value;
            return out;
        }
        case PriorKind::cauchy: {
            const double s = prior.p2;
            const double u = (x - prior.p1) / s;
            const double den = 1.0 + u * u;
            out.value = 1.0 / (M_PI * s * den);
            out.d1 = -2.0 * u / (M_PI * s * s * den * den);
            out.d2 = (6.0 * u * u - 2.0) / (M_PI * s * s * s * den * den * den);
            return out;
        }
        case PriorKind::flat_local:
            out.value = prior.p1;
            return out;
        default: {
            const double h = 1e-5 * std::max(1.0, std::abs(x));
            const double fm = prior.density(x - h);
            const double f0 = prior.density(x);
            const double fp = prior.density(x + h);
            out.value = f0;
            out.d1 = (fp - fm) / (2.0 * h);
            out.d2 = (fp - 2.0 * f0 + fm) / (h * h);
            return out;
        }
    }
}

/// Parse the prior grammar used by the CLI and config files:
///   cauchy:loc,scale | gaussian:mu,tau | student_t:loc,scale,df
///   | flat:c_pi | horseshoe:scale
inline PriorSpec parse_prior(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("prior: expected kind:params, got '" + std::string(text) + "'");
    const std::string kind(text.substr(0, colon));
    std::vector<double> args;
    {
        std::string rest(text.substr(colon + 1));
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            size_t pos = 0;
            double v = std::stod(tok, &pos);
            if (pos != tok.size())
                throw std::invalid_argument("prior: bad number '" + tok + "'");
            args.push_back(v);
        }
    }
    const auto need = [&](size_t k) {
        if (args.size() != k)
            throw std::invalid_argument("prior '" + kind + "': expected " +
                                        std::to_string(k) + " parameters");
    };
    if (kind == "cauchy")    { need(2); return cauchy_prior(args[0], args[1]); }
    if (kind == "gaussian")  { need(2); return gaussian_prior(args[0], args[1]); }
    if (kind == "student_t") { need(3); return student_t_prior(args[0], args[1], args[2]); }
    if (kind == "flat")      { need(1); return flat_local_prior(args[0]); }
    if (kind == "horseshoe") { need(1); return horseshoe_local_prior(args[0]); }
    throw std::invalid_argument("prior: unknown kind '" + kind + "'");
}

inline std::string PriorSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case PriorKind::gaussian:  os << "gaussian:" << p1 << "," << p2; break;
        case PriorKind::cauchy:    os << "cauchy:" << p1 << "," << p2; break;
        case PriorKind::student_t: os << "student_t:" << p1 << "," << p2 << "," << p3; break;
        case PriorKind::flat_local: os << "flat:" << p1; break;
        case PriorKind::horseshoe_local: os << "horseshoe:" << p1; break;
    }
    return os.str();
}

} // namespace mdcal
