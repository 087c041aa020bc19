#pragma once

// Sweep drivers behind the CLI: analytic / simulated success probability and
// ASE tables, ASEP tables, CSV emission with a reproducibility header.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gfscma/analytic.hpp"
#include "gfscma/config.hpp"
#include "gfscma/montecarlo.hpp"
#include "gfscma/scma.hpp"

#ifndef GFSCMA_GIT_REV
#define GFSCMA_GIT_REV "unknown"
#endif

namespace gfscma::cli {

struct Table {
    std::vector<std::string> meta; // '#'-prefixed header lines, sans prefix
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const {
        std::ostringstream out;
        for (const auto& m : meta) out << "# " << m << "\n";
        for (size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << columns[i];
        out << "\n";
        for (const auto& r : rows) {
            for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
            out << "\n";
        }
        return out.str();
    }
};

namespace detail {

inline std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::vector<std::string> meta_lines(const RunConfig& cfg,
                                           const std::string& what) {
    return {
        "gfscma " + what,
        "config = " + serialize_config(cfg).dump(),
        "seed = " + std::to_string(cfg.seed),
        "revision = " GFSCMA_GIT_REV,
    };
}

inline scma::Codebook resolve_codebook(const RunConfig& cfg) {
    for (const char* k : {"sparse4", "dense4", "sparse8", "dense8"})
        if (cfg.codebook == k) return scma::builtin_codebook(k);
    return scma::load_codebook(cfg.codebook);
}

// Applies one sweep value to a copy of the base parameters.
inline netmodel::NetworkParams apply_sweep(const RunConfig& cfg,
                                           const std::string& var, double v) {
    RunConfig c = cfg;
    if (var == "gamma_th_db") {
        c.gamma_th_db = v;
    } else if (var == "lambda_u") {
        c.lambda_as_pilot = true;
        c.lambda_value = v;
    } else if (var == "rho_max_dbm") {
        c.rho_max_infinite = false;
        c.rho_max_dbm = v;
    } else if (var == "t_over_k") {
        double t = v * cfg.K;
        if (std::abs(t - std::round(t)) > 1e-9)
            throw InvariantError("config.sweep",
                                 "t_over_k value does not give integer T");
        c.T = static_cast<int>(std::llround(t));
    } else {
        throw InvariantError("config.sweep",
                             "variable '" + var + "' not valid here");
    }
    return c.params();
}

} // namespace detail

/// Success-probability (and ASE) sweep. Columns: sweep variable,
/// p_suc_analytic, p_suc_sim, ci_halfwidth, ase_analytic; simulated columns
/// stay empty in analytic mode, analytic ones in simulate mode.
inline Table run_psuc(const RunConfig& cfg) {
    std::string var = cfg.sweep ? cfg.sweep->variable : "gamma_th_db";
    std::vector<double> values =
        cfg.sweep ? cfg.sweep->values() : std::vector<double>{cfg.gamma_th_db};
    if (var == "snr_db")
        throw InvariantError("config.sweep",
                             "snr_db sweeps belong to the asep command");

    Table t;
    t.meta = detail::meta_lines(cfg, "psuc sweep");
    t.columns = {var, "p_suc_analytic", "p_suc_sim", "ci_halfwidth",
                 "ase_analytic"};

    bool want_ana = cfg.mode != RunMode::Simulate;
    bool want_sim = cfg.mode != RunMode::Analytic;
    montecarlo::SimOptions so;
    so.window_side = cfg.window_side_m;

    // gamma sweeps share one set of realizations across thresholds
    std::vector<montecarlo::MetricEstimate> shared_sim;
    if (want_sim && var == "gamma_th_db") {
        std::vector<double> gammas;
        for (double v : values) gammas.push_back(db_to_linear(v));
        shared_sim = montecarlo::simulate_success_multi(
            cfg.params(), gammas, cfg.n_real, cfg.seed, so);
    }

    for (size_t i = 0; i < values.size(); ++i) {
        netmodel::NetworkParams p = detail::apply_sweep(cfg, var, values[i]);
        std::string ana, sim, ci, asev;
        if (want_ana) {
            auto r = analytic::success_probability(p);
            ana = detail::fmt(r.p_suc);
            asev = detail::fmt(netmodel::pilot_intensity(p) *
                               netmodel::mean_served(p) * r.p_suc *
                               std::log2(1.0 + p.gamma_th));
        }
        if (want_sim) {
            montecarlo::MetricEstimate e;
            if (var == "gamma_th_db") {
                e = shared_sim[i];
            } else {
                e = montecarlo::simulate_success(
                    p, cfg.n_real, montecarlo::splitmix64(cfg.seed + i), so);
            }
            sim = detail::fmt(e.value);
            ci = detail::fmt(e.ci_halfwidth);
        }
        t.rows.push_back({detail::fmt(values[i]), ana, sim, ci, asev});
    }
    return t;
}

/// ASEP sweep (snr_db or rho_max_dbm axis). Columns: sweep variable,
/// asep_analytic, asep_sim, ci_halfwidth.
inline Table run_asep(const RunConfig& cfg) {
    std::string var = cfg.sweep ? cfg.sweep->variable : "snr_db";
    if (var != "snr_db" && var != "rho_max_dbm")
        throw InvariantError("config.sweep",
                             "asep sweeps vary snr_db or rho_max_dbm");
    std::vector<double> values =
        cfg.sweep ? cfg.sweep->values()
                  : std::vector<double>{cfg.rho_dbm - cfg.sigma_sq_dbm};

    scma::Codebook cb = detail::resolve_codebook(cfg);
    scma::DistanceSpectrum spec = scma::distance_spectrum(cb);

    Table t;
    t.meta = detail::meta_lines(cfg, "asep sweep");
    t.columns = {var, "asep_analytic", "asep_sim", "ci_halfwidth"};

    bool want_ana = cfg.mode != RunMode::Simulate;
    bool want_sim = cfg.mode != RunMode::Analytic;
    montecarlo::SimOptions so;
    so.window_side = cfg.window_side_m;

    for (size_t i = 0; i < values.size(); ++i) {
        RunConfig c = cfg;
        double snr;
        if (var == "snr_db") {
            snr = db_to_linear(values[i]);
        } else {
            c.rho_max_infinite = false;
            c.rho_max_dbm = values[i];
            snr = db_to_linear(cfg.rho_dbm - cfg.sigma_sq_dbm);
        }
        netmodel::NetworkParams p = c.params();
        if (p.M != cb.M || p.d_s != cb.d_s)
            throw InvariantError("config.codebook",
                                 "codebook (M, d_s) disagrees with params");
        std::string ana, sim, ci;
        if (want_ana)
            ana = detail::fmt(
                analytic::asep(spec, p, snr, cfg.full_union_bound));
        if (want_sim) {
            auto e = montecarlo::simulate_asep(
                p, cb, snr, cfg.n_real, montecarlo::splitmix64(cfg.seed + i),
                so);
            sim = detail::fmt(e.value);
            ci = detail::fmt(e.ci_halfwidth);
        }
        t.rows.push_back({detail::fmt(values[i]), ana, sim, ci});
    }
    return t;
}

inline void write_table(const Table& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << t.to_csv();
}

} // namespace gfscma::cli
