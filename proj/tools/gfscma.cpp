// Batch front-end: analytic / simulated sweeps of the grant-free SCMA
// network model, plus the self-verification suite.
//
//   gfscma psuc     --config cfg.json [--out out.csv] [--seed N] ...
//   gfscma ase      alias of psuc (ASE column is always emitted)
//   gfscma asep     SNR / rho_max sweeps of the symbol error probability
//   gfscma simulate psuc with mode forced to simulate
//   gfscma verify   [--seed N] [--out report.json]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gfscma/runner.hpp"
#include "gfscma/verify.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string mode;
    long n_real = -1;
    uint64_t seed = 0;
    bool seed_set = false;
};

gfscma::cli::RunConfig load_config(const CommonArgs& a) {
    std::ifstream in(a.config_path);
    if (!in)
        throw std::runtime_error("cannot open config file " + a.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    gfscma::cli::RunConfig cfg = gfscma::cli::parse_config_text(ss.str());
    if (!a.mode.empty()) {
        if (a.mode == "analytic")
            cfg.mode = gfscma::cli::RunMode::Analytic;
        else if (a.mode == "simulate")
            cfg.mode = gfscma::cli::RunMode::Simulate;
        else if (a.mode == "both")
            cfg.mode = gfscma::cli::RunMode::Both;
        else
            throw std::runtime_error("--mode must be analytic|simulate|both");
    }
    if (a.n_real > 0) cfg.n_real = a.n_real;
    if (a.seed_set) cfg.seed = a.seed;
    if (!a.out_path.empty()) cfg.output = a.out_path;
    return cfg;
}

void emit(const gfscma::cli::Table& t, const std::string& path) {
    if (path.empty())
        std::cout << t.to_csv();
    else
        gfscma::cli::write_table(t, path);
}

void add_common(CLI::App* cmd, CommonArgs& a, bool need_config = true) {
    auto* c = cmd->add_option("--config", a.config_path, "JSON run config");
    if (need_config) c->required();
    cmd->add_option("--out", a.out_path, "output path (stdout if omitted)");
    cmd->add_option("--mode", a.mode, "analytic | simulate | both");
    cmd->add_option("--n-real", a.n_real, "realizations / trials per point");
    cmd->add_option("--seed", a.seed, "master RNG seed")
        ->each([&a](const std::string&) { a.seed_set = true; });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"grant-free SCMA network analysis and simulation"};
    app.require_subcommand(1);

    CommonArgs psuc_args, ase_args, asep_args, sim_args;
    CLI::App* psuc = app.add_subcommand("psuc", "success-probability sweep");
    add_common(psuc, psuc_args);
    CLI::App* ase = app.add_subcommand("ase", "ASE sweep (alias of psuc)");
    add_common(ase, ase_args);
    CLI::App* asep = app.add_subcommand("asep", "symbol-error-rate sweep");
    add_common(asep, asep_args);
    CLI::App* sim =
        app.add_subcommand("simulate", "simulation-only success sweep");
    add_common(sim, sim_args);

    uint64_t verify_seed = 1;
    std::string verify_out;
    CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
    verify->add_option("--seed", verify_seed, "probe RNG seed");
    verify->add_option("--out", verify_out, "JSON report path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (psuc->parsed() || ase->parsed()) {
            auto& a = psuc->parsed() ? psuc_args : ase_args;
            emit(gfscma::cli::run_psuc(load_config(a)), a.out_path);
        } else if (sim->parsed()) {
            auto cfg = load_config(sim_args);
            cfg.mode = gfscma::cli::RunMode::Simulate;
            emit(gfscma::cli::run_psuc(cfg), sim_args.out_path);
        } else if (asep->parsed()) {
            emit(gfscma::cli::run_asep(load_config(asep_args)),
                 asep_args.out_path);
        } else if (verify->parsed()) {
            auto rep = gfscma::verify::run_verify(verify_seed);
            std::cout << rep.to_text();
            if (!verify_out.empty()) {
                std::ofstream out(verify_out);
                out << rep.to_json().dump(2) << "\n";
            }
            return rep.all_pass() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
