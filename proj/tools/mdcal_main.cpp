// mdcal: risk-calibrated rejection thresholds for point-null testing.
//
// Subcommands: threshold, table, risk-curve, tails, chernoff, lindley, lab.
// Data goes to stdout (CSV or JSON); diagnostics go to stderr.
// Exit codes: 0 success, 2 usage error, 3 numeric failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdcal/mdcal.hpp"

using json = nlohmann::ordered_json;
using namespace mdcal;

namespace {

struct Odds {
    double pi0 = 0.5;
    double pia = 0.5;
};

Odds parse_odds(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("odds: expected 'p0:pa', got '" + text + "'");
    const double w0 = std::stod(text.substr(0, colon));
    const double wa = std::stod(text.substr(colon + 1));
    if (!(w0 > 0.0) || !(wa > 0.0))
        throw std::invalid_argument("odds: both weights must be positive");
    return {w0 / (w0 + wa), wa / (w0 + wa)};
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
    if (out.empty()) throw std::invalid_argument("expected a comma-separated list of counts");
    return out;
}

// "lo:hi:count" -> uniform grid
std::vector<double> parse_grid(const std::string& text) {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(text);
    if (!(ss >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 2)
        throw std::invalid_argument("grid: expected 'lo:hi:count' with count >= 2");
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
    return g;
}

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_fixed(double v, int digits) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

json threshold_to_json(const ThresholdResult& r, std::int64_t n) {
    json terms = {{"log_n", r.terms.log_n},
                  {"prior_term", r.terms.prior_term},
                  {"info_term", r.terms.info_term},
                  {"odds_term", r.terms.odds_term}};
    return json{{"method", to_string(r.method)},
                {"n", n},
                {"t_crit_sq", r.t_crit_sq},
                {"t_crit", r.t_defined() ? json(r.t_crit) : json()},
                {"terms", terms}};
}

void emit(const json& j, const std::string& format, std::ostream& os) {
    if (format == "json") {
        os << j.dump(2) << "\n";
        return;
    }
    // Flat CSV: arrays of objects become rows, one object becomes one row.
    const auto rows = j.is_array() ? j : json::array({j});
    if (rows.empty()) return;
    std::vector<std::string> keys;
    for (auto it = rows[0].begin(); it != rows[0].end(); ++it)
        if (!it.value().is_structured()) keys.push_back(it.key());
    for (size_t i = 0; i < keys.size(); ++i)
        os << keys[i] << (i + 1 < keys.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (size_t i = 0; i < keys.size(); ++i) {
            const auto& v = row.at(keys[i]);
            if (v.is_number_float()) os << fmt_full(v.get<double>());
            else if (v.is_string()) os << v.get<std::string>();
            else if (v.is_null()) os << "nan";
            else os << v.dump();
            os << (i + 1 < keys.size() ? "," : "\n");
        }
    }
}

struct CommonArgs {
    std::string format;   // "", "csv" or "json"
    std::uint64_t seed = 20260810ull;
    std::string out_path;

    std::string format_or(const char* dflt) const { return format.empty() ? dflt : format; }
    std::ostream& stream(std::ofstream& file) const {
        if (out_path.empty()) return std::cout;
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot open output file '" + out_path + "'");
        return file;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Risk-calibrated rejection thresholds on the moderate deviation scale"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Config file (key=value, flags override)");

    CommonArgs common;
    app.add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", common.seed, "RNG seed for stochastic commands")
        ->envname("MDCAL_SEED");
    app.add_option("--out", common.out_path, "Write data to a file instead of stdout");

    // --- threshold ---
    auto* cmd_threshold = app.add_subcommand("threshold", "Rejection threshold for one n");
    std::int64_t th_n = 0;
    std::string th_prior = "cauchy:0,1";
    double th_sigma = 1.0;
    std::optional<double> th_fisher;
    std::string th_odds = "1:1";
    std::string th_method = "thm1";
    int th_k = 1, th_m = 0;
    double th_lambda = 0.0;
    cmd_threshold->add_option("--n", th_n, "Sample size")->required();
    cmd_threshold->add_option("--prior", th_prior, "Prior (kind:params)");
    cmd_threshold->add_option("--sigma", th_sigma, "Known sampling sd");
    cmd_threshold->add_option("--fisher", th_fisher, "Fisher information (thm2)");
    cmd_threshold->add_option("--odds", th_odds, "Prior model odds p0:pa");
    cmd_threshold->add_option("--method", th_method, "thm1|thm2|numeric|horseshoe|rs")
        ->check(CLI::IsMember({"thm1", "thm2", "numeric", "horseshoe", "rs"}));
    cmd_threshold->add_option("--k", th_k, "RS: dimension of the parameter of interest");
    cmd_threshold->add_option("--lambda-exp", th_lambda, "RS: polynomial weight exponent");
    cmd_threshold->add_option("--m", th_m, "RS: nuisance dimension (accepted, unused)");

    // --- table ---
    auto* cmd_table = app.add_subcommand("table", "Calibration comparison over sample sizes");
    std::string tb_nlist = "5,10,100,1000,100000";
    std::string tb_prior = "cauchy:0,1";
    double tb_sigma = 1.0, tb_alpha = 0.05;
    std::string tb_odds = "1:1";
    bool tb_parity = false;
    cmd_table->add_option("--n-list", tb_nlist, "Comma-separated sample sizes");
    cmd_table->add_option("--prior", tb_prior, "Prior (kind:params)");
    cmd_table->add_option("--sigma", tb_sigma, "Known sampling sd");
    cmd_table->add_option("--odds", tb_odds, "Prior model odds p0:pa");
    cmd_table->add_option("--alpha", tb_alpha, "Level for the fixed-alpha and e-value columns");
    cmd_table->add_flag("--paper-parity", tb_parity, "Round display to table precision");

    // --- risk-curve ---
    auto* cmd_risk = app.add_subcommand("risk-curve", "Integrated Bayes risk over a threshold grid");
    std::int64_t rk_n = 0;
    std::string rk_prior = "cauchy:0,1";
    double rk_sigma = 1.0, rk_L0 = 1.0, rk_L1 = 1.0;
    std::string rk_odds = "1:1", rk_grid;
    cmd_risk->add_option("--n", rk_n, "Sample size")->required();
    cmd_risk->add_option("--prior", rk_prior, "Prior (kind:params)");
    cmd_risk->add_option("--sigma", rk_sigma, "Known sampling sd");
    cmd_risk->add_option("--odds", rk_odds, "Prior model odds p0:pa");
    cmd_risk->add_option("--L0", rk_L0, "Type I loss weight");
    cmd_risk->add_option("--L1", rk_L1, "Type II loss weight");
    cmd_risk->add_option("--grid", rk_grid, "Threshold grid lo:hi:count (default auto)");

    // --- tails ---
    auto* cmd_tails = app.add_subcommand("tails", "Tail approximations and oracles");
    std::string tl_method = "lemma1";
    std::int64_t tl_n = 0, tl_reps = 100000;
    double tl_a = 1.0, tl_sigma = 1.0, tl_A = 0.0;
    std::optional<double> tl_lambda;
    std::string tl_family = "gaussian", tl_rule;
    double tl_p0 = 0.5;
    cmd_tails->add_option("--method", tl_method, "lemma1|exact|mc|lindley|classify")
        ->check(CLI::IsMember({"lemma1", "exact", "mc", "lindley", "classify"}));
    cmd_tails->add_option("--n", tl_n, "Sample size")->required();
    cmd_tails->add_option("--a", tl_a, "Moderate-deviation coefficient");
    cmd_tails->add_option("--sigma", tl_sigma, "Sampling sd");
    cmd_tails->add_option("--lambda", tl_lambda, "Deviation (default a sqrt(log n / n))");
    cmd_tails->add_option("--reps", tl_reps, "Monte Carlo replications");
    cmd_tails->add_option("--A-const", tl_A, "Boundary constant A");
    cmd_tails->add_option("--family", tl_family, "gaussian|bernoulli (mc)")
        ->check(CLI::IsMember({"gaussian", "bernoulli"}));
    cmd_tails->add_option("--p0", tl_p0, "Bernoulli null probability");
    cmd_tails->add_option("--rule", tl_rule, "classify: clt:c | rs:a | fixed:c");

    // --- chernoff ---
    auto* cmd_chernoff = app.add_subcommand("chernoff", "Error exponents for simple-vs-simple tests");
    std::string ch_pair = "gaussian";
    double ch_delta = 1.0, ch_sigma = 1.0, ch_p0 = 0.2, ch_p1 = 0.8;
    std::int64_t ch_n = 0;
    cmd_chernoff->add_option("--pair", ch_pair, "gaussian|bernoulli")
        ->check(CLI::IsMember({"gaussian", "bernoulli"}));
    cmd_chernoff->add_option("--delta", ch_delta, "Gaussian mean separation");
    cmd_chernoff->add_option("--sigma", ch_sigma, "Gaussian sd");
    cmd_chernoff->add_option("--p0", ch_p0, "Bernoulli null probability");
    cmd_chernoff->add_option("--p1", ch_p1, "Bernoulli alternative probability");
    cmd_chernoff->add_option("--n", ch_n, "Sample size for the error prefactor (Gaussian pair)");

    // --- lindley ---
    auto* cmd_lindley = app.add_subcommand("lindley", "Evidence at an observed statistic vs the boundary");
    std::int64_t ld_n = 0;
    double ld_t = 0.0, ld_sigma = 1.0;
    std::string ld_prior = "cauchy:0,1", ld_odds = "1:1";
    cmd_lindley->add_option("--n", ld_n, "Sample size")->required();
    cmd_lindley->add_option("--t", ld_t, "Observed standardized statistic")->required();
    cmd_lindley->add_option("--prior", ld_prior, "Prior (kind:params)");
    cmd_lindley->add_option("--sigma", ld_sigma, "Known sampling sd");
    cmd_lindley->add_option("--odds", ld_odds, "Prior model odds p0:pa");

    // --- lab ---
    auto* cmd_lab = app.add_subcommand("lab", "Marginal-likelihood asymptotics checks");
    std::string lb_check = "dawid";
    std::string lb_nlist = "100,1000,10000,100000,1000000";
    std::int64_t lb_n = 10000, lb_reps = 2000;
    double lb_tau = 1.0;
    cmd_lab->add_option("--check", lb_check, "bic|dawid")
        ->check(CLI::IsMember({"bic", "dawid"}));
    cmd_lab->add_option("--n", lb_n, "Sample size per replication (dawid)");
    cmd_lab->add_option("--reps", lb_reps, "Replications (dawid)");
    cmd_lab->add_option("--tau", lb_tau, "Prior sd");
    cmd_lab->add_option("--n-list", lb_nlist, "Sample sizes (bic)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\nRun with --help for usage.\n";
        return 2;
    }

    std::ofstream out_file;
    try {
        std::ostream& os = common.stream(out_file);

        if (*cmd_threshold) {
            const auto odds = parse_odds(th_odds);
            const auto prior = parse_prior(th_prior);
            json j;
            if (th_method == "thm1") {
                const double c_pi = local_density(prior, 0.0);
                j = threshold_to_json(threshold_thm1(th_n, th_sigma, c_pi, odds.pi0, odds.pia), th_n);
            } else if (th_method == "thm2") {
                if (!th_fisher) throw std::invalid_argument("--method thm2 requires --fisher");
                const double c_pi = local_density(prior, 0.0);
                j = threshold_to_json(threshold_thm2(th_n, *th_fisher, c_pi, odds.pi0, odds.pia), th_n);
            } else if (th_method == "numeric") {
                TestProblem tp{0.0, th_sigma, prior, odds.pi0, odds.pia, 1.0, 1.0};
                j = threshold_to_json(threshold_numeric(tp, th_n), th_n);
            } else if (th_method == "horseshoe") {
                j = threshold_to_json(threshold_horseshoe(th_n), th_n);
            } else {  // rs
                if (th_m != 0)
                    std::cerr << "note: the nuisance dimension m does not enter the RS "
                                 "threshold formula; --m is ignored\n";
                const double lam = threshold_rs(th_n, th_k, th_lambda);
                const double t = std::sqrt(static_cast<double>(th_n)) * lam / th_sigma;
                j = json{{"method", "rs"}, {"n", th_n}, {"k", th_k},
                         {"lambda_exp", th_lambda}, {"threshold_param_scale", lam},
                         {"t_crit", t}, {"t_crit_sq", t * t}};
            }
            emit(j, common.format_or("json"), os);
        }

        if (*cmd_table) {
            const auto odds = parse_odds(tb_odds);
            const auto prior = parse_prior(tb_prior);
            const double c_pi = local_density(prior, 0.0);
            const double t_np = norm_ppf(1.0 - tb_alpha / 2.0);
            const double t_ev = std::sqrt(2.0 * std::log(1.0 / tb_alpha));
            json rows = json::array();
            for (const auto n : parse_int_list(tb_nlist)) {
                const auto th = threshold_thm1(n, tb_sigma, c_pi, odds.pi0, odds.pia);
                const double t_rs = th.t_crit;
                const double p_rs = norm_two_sided_tail(t_rs);
                rows.push_back({{"n", n}, {"t_rs", t_rs}, {"t_np", t_np},
                                {"t_ev", t_ev}, {"p_at_rs", p_rs}});
            }
            if (tb_parity) {
                os << "n,t_rs,t_np,t_ev,p_at_rs\n";
                for (const auto& r : rows) {
                    const double p = r["p_at_rs"].get<double>();
                    os << r["n"].get<std::int64_t>() << ","
                       << fmt_fixed(r["t_rs"].get<double>(), 2) << ","
                       << fmt_fixed(r["t_np"].get<double>(), 2) << ","
                       << fmt_fixed(r["t_ev"].get<double>(), 2) << ","
                       << fmt_fixed(p, p < 0.001 ? 4 : 3) << "\n";
                }
            } else {
                emit(rows, common.format_or("csv"), os);
            }
        }

        if (*cmd_risk) {
            const auto odds = parse_odds(rk_odds);
            TestProblem tp{0.0, rk_sigma, parse_prior(rk_prior), odds.pi0, odds.pia, rk_L0, rk_L1};
            const auto grid = rk_grid.empty() ? default_risk_grid(rk_n) : parse_grid(rk_grid);
            const auto curve = risk_curve(tp, rk_n, grid);
            if (common.format_or("csv") == "json") {
                json rows = json::array();
                for (size_t i = 0; i < curve.grid.size(); ++i)
                    rows.push_back({{"c", curve.grid[i]}, {"alpha", curve.alpha[i]},
                                    {"beta", curve.beta[i]}, {"total", curve.total[i]}});
                emit(json{{"n", curve.n}, {"rows", rows},
                          {"c_star", curve.c_star}, {"r_star", curve.r_star}},
                     "json", os);
            } else {
                os << "c,alpha,beta,total\n";
                for (size_t i = 0; i < curve.grid.size(); ++i)
                    os << fmt_full(curve.grid[i]) << "," << fmt_full(curve.alpha[i]) << ","
                       << fmt_full(curve.beta[i]) << "," << fmt_full(curve.total[i]) << "\n";
                os << "# c_star=" << fmt_full(curve.c_star)
                   << ",r_star=" << fmt_full(curve.r_star) << "\n";
            }
        }

        if (*cmd_tails) {
            json j;
            if (tl_method == "classify") {
                if (tl_rule.empty()) throw std::invalid_argument("classify needs --rule");
                const auto colon = tl_rule.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("rule: expected kind:value");
                const std::string kind = tl_rule.substr(0, colon);
                const double val = std::stod(tl_rule.substr(colon + 1));
                ScaleRule rule = kind == "clt"   ? ScaleRule::c_over_sqrt_n(val)
                               : kind == "rs"    ? ScaleRule::rs_boundary(val)
                               : kind == "fixed" ? ScaleRule::fixed(val)
                               : throw std::invalid_argument("rule kind must be clt|rs|fixed");
                const auto lab = classify_regime(rule, tl_n, tl_sigma);
                j = json{{"method", "classify"}, {"n", tl_n},
                         {"label", to_string(lab.label)}, {"z", lab.z}};
            } else if (tl_method == "lindley") {
                j = json{{"method", "lindley_alpha"}, {"n", tl_n}, {"A", tl_A},
                         {"value", lindley_alpha(tl_n, tl_A)}};
            } else {
                const double lambda = tl_lambda
                    ? *tl_lambda
                    : tl_a * std::sqrt(std::log(static_cast<double>(tl_n)) / tl_n);
                TailEstimate est;
                if (tl_method == "lemma1") est = tail_lemma1(tl_n, tl_a, tl_sigma);
                else if (tl_method == "exact") est = tail_exact_gaussian(tl_n, lambda, tl_sigma);
                else {
                    const auto fam = tl_family == "bernoulli"
                                         ? bernoulli_family(tl_p0)
                                         : gaussian_family(0.0, tl_sigma);
                    est = mc_tail(fam, tl_n, lambda, tl_reps, common.seed);
                }
                j = json{{"method", to_string(est.method)}, {"n", tl_n},
                         {"lambda", lambda}, {"value", est.value}, {"se", est.se}};
            }
            emit(j, common.format_or("json"), os);
        }

        if (*cmd_chernoff) {
            json j;
            if (ch_pair == "gaussian") {
                const auto ci = chernoff_information(gaussian_family(0.0, ch_sigma),
                                                     gaussian_family(ch_delta, ch_sigma));
                j = json{{"pair", "gaussian"}, {"delta", ch_delta}, {"sigma", ch_sigma},
                         {"d_c", ci.d_c}, {"s_star", ci.s_star}};
                if (ch_n > 0) {
                    const auto et = efron_truax_error(ch_n, ch_delta, ch_sigma);
                    j["n"] = ch_n;
                    j["prefactor_error"] = *et.prefactor_error;
                    j["exact_error"] = *et.exact_error;
                    j["ratio"] = *et.prefactor_error / *et.exact_error;
                }
            } else {
                const auto ci = chernoff_information(bernoulli_family(ch_p0),
                                                     bernoulli_family(ch_p1));
                // exponent only: no prefactor claim for non-Gaussian pairs
                j = json{{"pair", "bernoulli"}, {"p0", ch_p0}, {"p1", ch_p1},
                         {"d_c", ci.d_c}, {"s_star", ci.s_star}};
            }
            emit(j, common.format_or("json"), os);
        }

        if (*cmd_lindley) {
            const auto odds = parse_odds(ld_odds);
            TestProblem tp{0.0, ld_sigma, parse_prior(ld_prior), odds.pi0, odds.pia, 1.0, 1.0};
            const double xbar = ld_t * ld_sigma / std::sqrt(static_cast<double>(ld_n));
            const auto ev = evidence(tp, xbar, ld_n);
            const double c_pi = local_density(tp.prior, tp.theta0);
            const auto th = threshold_thm1(ld_n, ld_sigma, c_pi, odds.pi0, odds.pia);
            const bool below = std::abs(ld_t) < th.t_crit;
            emit(json{{"n", ld_n}, {"t", ld_t}, {"bf01", ev.bf01},
                      {"post_h0", ev.post_h0}, {"t_crit", th.t_crit},
                      {"verdict", below ? "below boundary" : "above boundary"}},
                 common.format_or("json"), os);
        }

        if (*cmd_lab) {
            if (lb_check == "bic") {
                const auto pts = bic_gap_conjugate_experiment(parse_int_list(lb_nlist),
                                                              common.seed, lb_tau);
                json rows = json::array();
                double lo = pts.front().gap, hi = pts.front().gap;
                for (const auto& p : pts) {
                    rows.push_back({{"n", p.n}, {"gap", p.gap}});
                    lo = std::min(lo, p.gap);
                    hi = std::max(hi, p.gap);
                }
                emit(json{{"check", "bic"}, {"tau", lb_tau}, {"seed", common.seed},
                          {"rows", rows}, {"band_width", hi - lo}},
                     common.format_or("json"), os);
            } else {
                const auto rep = dawid_check(lb_n, lb_reps, common.seed, lb_tau);
                emit(json{{"check", "dawid"}, {"n", lb_n}, {"reps", lb_reps},
                          {"tau", lb_tau}, {"seed", common.seed},
                          {"reference", rep.reference}, {"ks_stat", rep.ks_stat},
                          {"ks_p", rep.ks_p}, {"level", rep.level}, {"pass", rep.pass},
                          {"reps_warning", rep.reps_warning},
                          {"statistic_samples", rep.statistic_samples}},
                     common.format_or("json"), os);
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
