#pragma once

// Runtime self-check suite behind `gfscma verify`: every module's cheap
// invariants with per-check tolerance and measured value, reported as text
// and JSON. Heavier statistical validation lives in the test suite.

#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "gfscma/analytic.hpp"
#include "gfscma/config.hpp"
#include "gfscma/montecarlo.hpp"
#include "gfscma/netmodel.hpp"
#include "gfscma/scma.hpp"
#include "gfscma/specfun.hpp"

namespace gfscma::verify {

struct CheckResult {
    std::string name;
    double tolerance = 0.0;
    double measured = 0.0;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::vector<CheckResult> checks;
    uint64_t seed = 0;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["seed"] = seed;
        j["pass"] = all_pass();
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : checks) {
            nlohmann::ordered_json e;
            e["name"] = c.name;
            e["tolerance"] = c.tolerance;
            e["measured"] = c.measured;
            e["pass"] = c.pass;
            if (!c.detail.empty()) e["detail"] = c.detail;
            j["checks"].push_back(e);
        }
        return j;
    }

    std::string to_text() const {
        std::string s;
        for (const auto& c : checks) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "[%s] %-46s measured %.3e tol %.1e\n",
                          c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                          c.tolerance);
            s += buf;
        }
        s += all_pass() ? "verify: all checks passed\n"
                        : "verify: FAILURES present\n";
        return s;
    }
};

namespace detail {

inline CheckResult check(const std::string& name, double measured, double tol,
                         const std::string& detail = "") {
    return {name, tol, measured, measured <= tol, detail};
}

} // namespace detail

/// Unit-power / support / distinctness check used both here and by tests.
inline CheckResult check_codebook(const scma::Codebook& cb,
                                  const std::string& label) {
    double worst = 0.0;
    std::string why;
    try {
        scma::detail::check_invariants(cb);
        for (const auto& cw : cb.codewords) {
            double pw = 0.0;
            for (const auto& c : cw) pw += std::norm(c);
            worst = std::max(worst, std::abs(pw - 1.0));
        }
    } catch (const InvariantError& e) {
        return {"scma.codebook." + label, 1e-9, 1.0, false, e.what()};
    }
    return detail::check("scma.codebook." + label, worst, 1e-9, why);
}

inline Report run_verify(uint64_t seed) {
    Report rep;
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    auto uni = [&](double a, double b) {
        return a + (b - a) * std::uniform_real_distribution<double>()(rng);
    };
    using Complex = std::complex<double>;

    // specfun: Kummer reflection on random stable-domain points
    {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            double a = uni(-3.0, 3.0);
            double b = uni(0.2, 5.0);
            Complex z(uni(-20.0, 20.0), uni(-20.0, 20.0));
            Complex lhs = specfun::hyp1f1(a, b, z);
            Complex rhs = std::exp(z) * specfun::hyp1f1(b - a, b, -z);
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
        }
        rep.checks.push_back(detail::check("specfun.kummer_reflection", worst, 1e-8));
    }
    // specfun: Pfaff consistency for |z| <= 0.5
    {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            double a = uni(-2.0, 2.0), b = uni(0.5, 4.0), c = uni(0.3, 4.0);
            Complex z = std::polar(uni(0.05, 0.5), uni(0.0, 2 * std::numbers::pi));
            Complex direct = specfun::detail::hyp2f1_series(a, b, c, z, 4000);
            Complex w = z / (z - 1.0);
            Complex pfaff = std::pow(1.0 - z, -a) *
                            specfun::detail::hyp2f1_series(a, c - b, c, w, 4000);
            worst = std::max(worst, std::abs(direct - pfaff) / std::abs(direct));
        }
        rep.checks.push_back(detail::check("specfun.pfaff_consistency", worst, 1e-9));
    }
    // specfun: terminating polynomial exactness for a = -n
    {
        double worst = 0.0;
        for (int n = 1; n <= 8; ++n) {
            double b = uni(0.5, 3.0);
            Complex z(uni(-30.0, 30.0), uni(-30.0, 30.0));
            Complex got = specfun::hyp1f1(-double(n), b, z);
            Complex want(0.0, 0.0);
            Complex term(1.0, 0.0);
            want += term;
            for (int k = 0; k < n; ++k) {
                term *= (-double(n) + k) * z / ((b + k) * (k + 1.0));
                want += term;
            }
            worst = std::max(worst, std::abs(got - want) /
                                        std::max(1.0, std::abs(want)));
        }
        rep.checks.push_back(
            detail::check("specfun.terminating_polynomial", worst, 1e-13));
    }
    // specfun: gamma identities
    {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            double x = uni(0.01, 30.0);
            worst = std::max(worst, std::abs(specfun::lower_incomplete_gamma(
                                                 1.0, x) -
                                             (1.0 - std::exp(-x))));
            double lg = specfun::ln_gamma(x + 1.0) -
                        (specfun::ln_gamma(x) + std::log(x));
            worst = std::max(worst, std::abs(lg));
        }
        rep.checks.push_back(detail::check("specfun.gamma_identities", worst, 1e-12));
    }
    // gil-pelaez: Gamma(d,1) CDFs and the standard-normal median
    {
        double worst = 0.0;
        for (int d : {1, 2, 4})
            for (double x : {0.1, 1.0, 5.0}) {
                analytic::CharacteristicFunction cf{
                    [d](double w) {
                        return std::pow(Complex(1.0, -w), -double(d));
                    },
                    "gamma"};
                double got = analytic::gil_pelaez_cdf(cf, x);
                worst = std::max(worst,
                                 std::abs(got - specfun::gamma_p(d, x)));
            }
        rep.checks.push_back(detail::check("analytic.gil_pelaez_gamma", worst, 1e-6));
        analytic::CharacteristicFunction ncf{
            [](double w) { return Complex(std::exp(-0.5 * w * w), 0.0); },
            "normal"};
        double med = analytic::gil_pelaez_cdf(ncf, 0.0);
        rep.checks.push_back(detail::check("analytic.gil_pelaez_normal_median",
                                           std::abs(med - 0.5), 1e-8));
    }
    // netmodel: occupancy generating-function identity
    {
        netmodel::NetworkParams p;
        p = p.with_lambda_u(6e-5);
        auto t = netmodel::occupancy_table(p);
        double beta = netmodel::occupancy_beta(p);
        double worst = 0.0;
        for (double x = 0.1; x < 0.95; x += 0.1) {
            double sum = 0.0, xp = 1.0;
            for (double pu : t.p) {
                sum += pu * xp;
                xp *= x;
            }
            double closed =
                std::pow(1.0 + beta * (1.0 - x), -(p.c_voronoi + 1.0));
            worst = std::max(worst, std::abs(sum - closed) / closed);
        }
        rep.checks.push_back(detail::check("netmodel.occupancy_gf_identity", worst, 1e-8));
        double u1 = netmodel::mean_served(p);
        rep.checks.push_back(detail::check(
            "netmodel.mean_served_bounds",
            (u1 >= 1.0 && u1 <= p.J) ? 0.0 : 1.0, 0.5,
            "mean " + std::to_string(u1)));
    }
    // scma: built-in codebooks and the dense>sparse ordering
    {
        for (const char* k : {"sparse4", "dense4", "sparse8", "dense8"})
            rep.checks.push_back(check_codebook(scma::builtin_codebook(k), k));
        auto s4 = scma::distance_spectrum(scma::builtin_codebook("sparse4"));
        auto d4 = scma::distance_spectrum(scma::builtin_codebook("dense4"));
        rep.checks.push_back(detail::check(
            "scma.dense4_beats_sparse4",
            d4.delta_min_sq > s4.delta_min_sq ? 0.0 : 1.0, 0.5,
            "dense " + std::to_string(d4.delta_min_sq) + " vs sparse " +
                std::to_string(s4.delta_min_sq)));
    }
    // analytic: CF limits at omega -> 0+ and magnitude bound
    {
        netmodel::NetworkParams p;
        p = p.with_lambda_u(6e-5);
        auto tab = netmodel::occupancy_table(p);
        double worst_lim = 0.0, worst_mag = 0.0;
        for (int k = 3; k <= 6; ++k) {
            double w = std::pow(10.0, -k) / p.rho;
            worst_lim = std::max({worst_lim,
                                  std::abs(analytic::cf_inter(w, p) - 1.0),
                                  std::abs(analytic::cf_intra(w, p, tab) - 1.0),
                                  std::abs(analytic::signal_term(w, p, tab) - 1.0)});
        }
        for (double t : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            double w = t / p.rho;
            worst_mag = std::max(
                {worst_mag, std::abs(analytic::cf_inter(w, p)) - 1.0,
                 std::abs(analytic::cf_intra(w, p, tab)) - 1.0,
                 std::abs(analytic::signal_term(w, p, tab)) - 1.0,
                 std::abs(analytic::cf_cell(w, p, tab)) - 1.0});
        }
        rep.checks.push_back(detail::check("analytic.cf_zero_limit", worst_lim, 1e-6));
        rep.checks.push_back(detail::check("analytic.cf_magnitude_bound",
                                           worst_mag, 1e-9));
    }
    // analytic: C -> 1 as rho_max -> infinity
    {
        double c_inf = analytic::pep_constant(
            std::numeric_limits<double>::infinity());
        double c_big = analytic::pep_constant(200.0);
        rep.checks.push_back(detail::check(
            "analytic.pep_constant_limit",
            std::max(std::abs(c_inf - 1.0), std::abs(c_big - 1.0)), 1e-9));
    }
    // montecarlo: determinism across thread counts
    {
        netmodel::NetworkParams p;
        p = p.with_lambda_u(6e-5);
        montecarlo::SimOptions one, many;
        one.threads = 1;
        many.threads = 4;
        auto a = montecarlo::simulate_success(p, 400, seed, one);
        auto b = montecarlo::simulate_success(p, 400, seed, many);
        rep.checks.push_back(detail::check(
            "montecarlo.thread_determinism",
            a.value == b.value && a.ci_halfwidth == b.ci_halfwidth ? 0.0 : 1.0,
            0.5));
    }
    // montecarlo: HPPP law of large numbers
    {
        montecarlo::RngStream rng(seed, 12345);
        double mean = 0.0;
        const int reps = 300;
        for (int i = 0; i < reps; ++i)
            mean += static_cast<double>(
                montecarlo::sample_hppp(1e-5, 5000.0, rng).size());
        mean /= reps;
        double expect = 1e-5 * 5000.0 * 5000.0;
        rep.checks.push_back(detail::check("montecarlo.hppp_mean",
                                           std::abs(mean / expect - 1.0),
                                           0.05));
    }
    // config: parse -> serialize -> parse identity
    {
        cli::RunConfig c;
        c.sweep = cli::SweepSpec{"gamma_th_db", -10.0, 10.0, 0.5};
        auto text = cli::serialize_config(c).dump(2);
        auto c2 = cli::parse_config_text(text);
        auto text2 = cli::serialize_config(c2).dump(2);
        rep.checks.push_back(detail::check(
            "config.roundtrip_identity", (c == c2 && text == text2) ? 0.0 : 1.0,
            0.5));
    }
    return rep;
}

} // namespace gfscma::verify
