#pragma once

// Run configuration: JSON in, canonical JSON out. All dB / dBm quantities
// are converted to linear SI exactly once, here; everything downstream is
// watts and linear ratios.

#include <cmath>
#include <optional>
#include <string>

#include <json.hpp>

#include "gfscma/errors.hpp"
#include "gfscma/netmodel.hpp"

namespace gfscma::cli {

using Json = nlohmann::ordered_json;

inline double dbm_to_watt(double dbm) {
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

enum class RunMode { Analytic, Simulate, Both };

struct SweepSpec {
    std::string variable; // gamma_th_db | lambda_u | snr_db | rho_max_dbm | t_over_k
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    bool operator==(const SweepSpec&) const = default;

    std::vector<double> values() const {
        std::vector<double> v;
        for (double x = start; x <= stop + 1e-12 * std::abs(step); x += step)
            v.push_back(x);
        return v;
    }
};

struct RunConfig {
    // raw dB-domain fields, kept verbatim for lossless round-trips
    double lambda_b = 1e-5;
    bool lambda_as_pilot = true; // lambda_u given (else lambda_ue)
    double lambda_value = 6e-5;
    double p_a = 0.1;
    double rho_dbm = -100.0;
    double rho_max_dbm = 30.0; // 1 W
    bool rho_max_infinite = false;
    double sigma_sq_dbm = -90.0;
    double eta = 4.0;
    double gamma_th_db = -5.0;
    int K = 4, L = 6, T = 4, M = 4, d_s = 2;
    std::string thinning = "complement";

    std::optional<SweepSpec> sweep;
    RunMode mode = RunMode::Both;
    std::string codebook = "sparse4";
    long n_real = 10000;
    uint64_t seed = 1;
    std::string output;
    double window_side_m = 10000.0;
    bool full_union_bound = false;

    bool operator==(const RunConfig&) const = default;

    netmodel::NetworkParams params() const {
        netmodel::NetworkParams p;
        p.lambda_b = lambda_b;
        p.p_a = p_a;
        p.rho = dbm_to_watt(rho_dbm);
        p.rho_max = rho_max_infinite
                        ? std::numeric_limits<double>::infinity()
                        : dbm_to_watt(rho_max_dbm);
        p.sigma_sq = dbm_to_watt(sigma_sq_dbm);
        p.eta = eta;
        p.gamma_th = db_to_linear(gamma_th_db);
        p.K = K;
        p.L = L;
        p.T = T;
        p.M = M;
        p.d_s = d_s;
        if (static_cast<long>(L) * T % K != 0)
            throw InvariantError("config.T", "K must divide L*T");
        p.J = static_cast<int>(static_cast<long>(L) * T / K);
        p.thinning = thinning == "as_paper"
                         ? netmodel::InterfererThinning::AsPaper
                         : netmodel::InterfererThinning::Complement;
        if (lambda_as_pilot)
            p.lambda_ue = lambda_value * p.J * p.L / p.p_a;
        else
            p.lambda_ue = lambda_value;
        p.validate();
        return p;
    }
};

namespace detail {

template <class T>
T get_field(const Json& j, const std::string& key, const char* where) {
    if (!j.contains(key))
        throw InvariantError(std::string("config.") + where,
                             "missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvariantError(std::string("config.") + where,
                             "field '" + key + "' has the wrong type");
    }
}

template <class T>
T get_or(const Json& j, const std::string& key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

} // namespace detail

inline RunConfig parse_config(const Json& j) {
    RunConfig c;
    const Json& par = j.contains("params") ? j.at("params") : Json::object();
    c.lambda_b = detail::get_field<double>(par, "lambda_b", "lambda_b");
    if (par.contains("lambda_u") && par.contains("lambda_ue"))
        throw InvariantError("config.lambda",
                             "give exactly one of lambda_u / lambda_ue");
    if (par.contains("lambda_u")) {
        c.lambda_as_pilot = true;
        c.lambda_value = par.at("lambda_u").get<double>();
    } else if (par.contains("lambda_ue")) {
        c.lambda_as_pilot = false;
        c.lambda_value = par.at("lambda_ue").get<double>();
    } else {
        throw InvariantError("config.lambda",
                             "one of lambda_u / lambda_ue is required");
    }
    c.p_a = detail::get_field<double>(par, "p_a", "p_a");
    c.rho_dbm = detail::get_field<double>(par, "rho_dbm", "rho_dbm");
    if (par.contains("rho_max_dbm") && par.at("rho_max_dbm").is_string()) {
        if (par.at("rho_max_dbm").get<std::string>() != "inf")
            throw InvariantError("config.rho_max_dbm",
                                 "string value must be 'inf'");
        c.rho_max_infinite = true;
    } else {
        c.rho_max_dbm =
            detail::get_field<double>(par, "rho_max_dbm", "rho_max_dbm");
    }
    c.sigma_sq_dbm =
        detail::get_field<double>(par, "sigma_sq_dbm", "sigma_sq_dbm");
    c.eta = detail::get_field<double>(par, "eta", "eta");
    c.gamma_th_db = detail::get_field<double>(par, "gamma_th_db", "gamma_th_db");
    c.K = detail::get_field<int>(par, "K", "K");
    c.L = detail::get_field<int>(par, "L", "L");
    c.T = detail::get_field<int>(par, "T", "T");
    c.M = detail::get_field<int>(par, "M", "M");
    c.d_s = detail::get_field<int>(par, "d_s", "d_s");
    c.thinning = detail::get_or<std::string>(par, "interferer_thinning",
                                             "complement");
    if (c.thinning != "complement" && c.thinning != "as_paper")
        throw InvariantError("config.interferer_thinning",
                             "must be 'complement' or 'as_paper'");

    if (j.contains("sweep") && !j.at("sweep").is_null()) {
        const Json& sw = j.at("sweep");
        SweepSpec s;
        s.variable = detail::get_field<std::string>(sw, "variable", "sweep");
        s.start = detail::get_field<double>(sw, "start", "sweep");
        s.stop = detail::get_field<double>(sw, "stop", "sweep");
        s.step = detail::get_field<double>(sw, "step", "sweep");
        static const char* allowed[] = {"gamma_th_db", "lambda_u", "snr_db",
                                        "rho_max_dbm", "t_over_k"};
        bool ok = false;
        for (const char* a : allowed) ok = ok || s.variable == a;
        if (!ok)
            throw InvariantError("config.sweep.variable",
                                 "unknown sweep variable '" + s.variable + "'");
        if (!(s.step > 0))
            throw InvariantError("config.sweep.step", "step must be > 0");
        if (s.stop < s.start)
            throw InvariantError("config.sweep.stop",
                                 "stop must be >= start");
        c.sweep = s;
    }

    std::string mode = detail::get_or<std::string>(j, "mode", "both");
    if (mode == "analytic")
        c.mode = RunMode::Analytic;
    else if (mode == "simulate")
        c.mode = RunMode::Simulate;
    else if (mode == "both")
        c.mode = RunMode::Both;
    else
        throw InvariantError("config.mode",
                             "must be analytic | simulate | both");
    c.codebook = detail::get_or<std::string>(j, "codebook", "sparse4");
    c.n_real = detail::get_or<long>(j, "n_real", 10000L);
    if (c.n_real < 1)
        throw InvariantError("config.n_real", "must be >= 1");
    c.seed = detail::get_or<uint64_t>(j, "seed", 1ull);
    c.output = detail::get_or<std::string>(j, "output", "");
    c.window_side_m = detail::get_or<double>(j, "window_side_m", 10000.0);
    if (!(c.window_side_m > 0))
        throw InvariantError("config.window_side_m", "must be > 0");
    c.full_union_bound = detail::get_or<bool>(j, "full_union_bound", false);
    c.params(); // surface parameter invariant violations at parse time
    return c;
}

inline RunConfig parse_config_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvariantError("config.json", e.what());
    }
    return parse_config(j);
}

inline Json serialize_config(const RunConfig& c) {
    Json par = Json::object();
    par["lambda_b"] = c.lambda_b;
    if (c.lambda_as_pilot)
        par["lambda_u"] = c.lambda_value;
    else
        par["lambda_ue"] = c.lambda_value;
    par["p_a"] = c.p_a;
    par["rho_dbm"] = c.rho_dbm;
    if (c.rho_max_infinite)
        par["rho_max_dbm"] = "inf";
    else
        par["rho_max_dbm"] = c.rho_max_dbm;
    par["sigma_sq_dbm"] = c.sigma_sq_dbm;
    par["eta"] = c.eta;
    par["gamma_th_db"] = c.gamma_th_db;
    par["K"] = c.K;
    par["L"] = c.L;
    par["T"] = c.T;
    par["M"] = c.M;
    par["d_s"] = c.d_s;
    par["interferer_thinning"] = c.thinning;

    Json j = Json::object();
    j["params"] = par;
    if (c.sweep) {
        Json sw = Json::object();
        sw["variable"] = c.sweep->variable;
        sw["start"] = c.sweep->start;
        sw["stop"] = c.sweep->stop;
        sw["step"] = c.sweep->step;
        j["sweep"] = sw;
    }
    j["mode"] = c.mode == RunMode::Analytic
                    ? "analytic"
                    : (c.mode == RunMode::Simulate ? "simulate" : "both");
    j["codebook"] = c.codebook;
    j["n_real"] = c.n_real;
    j["seed"] = c.seed;
    j["output"] = c.output;
    j["window_side_m"] = c.window_side_m;
    j["full_union_bound"] = c.full_union_bound;
    return j;
}

} // namespace gfscma::cli
