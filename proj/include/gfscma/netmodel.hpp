#pragma once

// Canonical parameter set plus the closed-form scalars shared by the
// analytical and Monte Carlo paths: power control, truncation outage and the
// Voronoi occupancy PMF of the typical cell.

#include <cmath>
#include <optional>
#include <vector>

#include "gfscma/errors.hpp"
#include "gfscma/specfun.hpp"

namespace gfscma::netmodel {

// How the interferer intensity is thinned by truncation outage. `AsPaper`
// scales by the outage probability O_p itself, `Complement` by (1 - O_p),
// i.e. by the fraction of UEs that actually transmit.
enum class InterfererThinning { AsPaper, Complement };

struct NetworkParams {
    double lambda_b = 1e-5;   // BS intensity, 1/m^2
    double lambda_ue = 2.16e-2; // UE intensity, 1/m^2
    double p_a = 0.1;         // activation probability
    double rho = 1e-13;       // target receive power, W
    double rho_max = 1.0;     // transmit power cap, W (may be +inf)
    double eta = 4.0;         // path-loss exponent, > 2
    double sigma_sq = 1e-12;  // noise power, W
    double gamma_th = 0.316227766016838; // SINR threshold, linear
    int K = 4;                // resource blocks
    int L = 6;                // layers
    int T = 4;                // OFDMA tones
    int M = 4;                // codebook cardinality
    int d_s = 2;              // sparse degree
    int J = 6;                // codebooks per cell, J = L T / K
    double c_voronoi = 3.575; // Voronoi cell-size constant
    InterfererThinning thinning = InterfererThinning::Complement;

    double b() const { return eta / 2.0; }

    void validate() const {
        if (!(lambda_b > 0) || !(lambda_ue > 0))
            throw InvariantError("params.intensity", "intensities must be > 0");
        if (!(p_a >= 0.0 && p_a <= 1.0))
            throw InvariantError("params.p_a", "activation must lie in [0,1]");
        if (!(rho > 0) || !(rho_max > 0) || !(sigma_sq > 0))
            throw InvariantError("params.power", "powers must be > 0");
        if (!(eta > 2.0))
            throw InvariantError("params.eta", "path-loss exponent must be > 2");
        if (!(gamma_th > 0))
            throw InvariantError("params.gamma_th", "threshold must be > 0");
        if (K < 1 || L < 1 || T < 1 || M < 2)
            throw InvariantError("params.dims", "SCMA dimensions out of range");
        if (d_s <= 1 || d_s > K)
            throw InvariantError("params.d_s", "requires 1 < d_s <= K");
        if (static_cast<long>(L) * T % K != 0 ||
            J != static_cast<long>(L) * T / K)
            throw InvariantError("params.J", "J = L*T/K must hold exactly");
    }

    NetworkParams with_lambda_u(double lambda_u) const {
        NetworkParams q = *this;
        q.lambda_ue = lambda_u * J * L / p_a;
        return q;
    }
    NetworkParams with_gamma_th(double g) const {
        NetworkParams q = *this;
        q.gamma_th = g;
        return q;
    }
};

/// Intensity of UEs sharing one pilot: lambda_u = p_a lambda_ue / (J L).
inline double pilot_intensity(const NetworkParams& p) {
    return p.p_a * p.lambda_ue / (static_cast<double>(p.J) * p.L);
}

/// Radius beyond which channel inversion would exceed rho_max.
inline double truncation_radius(const NetworkParams& p) {
    return std::pow(p.rho_max / p.rho, 1.0 / p.eta);
}

/// alpha = pi lambda_b (rho_max / rho)^{1/b}.
inline double alpha_of(const NetworkParams& p) {
    return std::numbers::pi * p.lambda_b *
           std::pow(p.rho_max / p.rho, 1.0 / p.b());
}

/// Truncation outage probability O_p = exp(-alpha).
inline double truncation_outage(const NetworkParams& p) {
    return std::exp(-alpha_of(p));
}

/// Uplink transmit power at serving distance R, or nullopt when truncated
/// (P_bound = 0: the UE stays silent).
inline std::optional<double> tx_power(double R, const NetworkParams& p) {
    if (!(R >= 0.0)) throw std::domain_error("tx_power: R must be >= 0");
    double pw = p.rho * std::pow(R, p.eta);
    if (pw <= p.rho_max) return pw;
    return std::nullopt;
}

/// Pilot intensity after outage thinning, per the configured convention.
inline double effective_interferer_intensity(const NetworkParams& p) {
    double op = truncation_outage(p);
    double f = p.thinning == InterfererThinning::AsPaper ? op : 1.0 - op;
    return f * pilot_intensity(p);
}

/// beta = O_eff lambda_u / (c lambda_b), the occupancy PMF's odds parameter.
inline double occupancy_beta(const NetworkParams& p) {
    return effective_interferer_intensity(p) / (p.c_voronoi * p.lambda_b);
}

/// P{ |U_in| = u }: negative-binomial family with shape c+1, the unique PMF
/// satisfying sum_u P(u) x^u = [1 + beta (1-x)]^{-c-1}.
inline double occupancy_pmf(int u, const NetworkParams& p) {
    if (u < 0) throw std::domain_error("occupancy_pmf: u must be >= 0");
    double beta = occupancy_beta(p);
    double c = p.c_voronoi;
    if (beta == 0.0) return u == 0 ? 1.0 : 0.0;
    if (u == 0) return std::exp(-(c + 1.0) * std::log1p(beta));
    double lp = specfun::ln_gamma(u + c + 1.0) - specfun::ln_gamma(c + 1.0) -
                specfun::ln_gamma(u + 1.0) + u * std::log(beta) -
                (u + c + 1.0) * std::log1p(beta);
    return std::exp(lp);
}

// PMF table truncated once cumulative mass exceeds 1 - 1e-12; keeps every
// downstream sum a bounded loop.
struct OccupancyTable {
    std::vector<double> p; // p[u]
    double tail_mass = 0.0;

    double head(int j_minus_1) const {
        double s = 0.0;
        int n = std::min<int>(j_minus_1 + 1, static_cast<int>(p.size()));
        for (int u = 0; u < n; ++u) s += p[u];
        return s;
    }
};

inline OccupancyTable occupancy_table(const NetworkParams& p,
                                      double mass_tol = 1e-12,
                                      int u_cap = 200000) {
    OccupancyTable t;
    double cum = 0.0;
    for (int u = 0; u <= u_cap; ++u) {
        double v = occupancy_pmf(u, p);
        t.p.push_back(v);
        cum += v;
        if (1.0 - cum < mass_tol && u >= p.J) break;
    }
    t.tail_mass = std::max(0.0, 1.0 - cum);
    return t;
}

/// Mean number of served UEs: 1 + E[min(|U_in|, J-1)].
inline double mean_served(const NetworkParams& p) {
    OccupancyTable t = occupancy_table(p);
    double head = 0.0, mean = 0.0;
    for (int u = 1; u < p.J && u < static_cast<int>(t.p.size()); ++u)
        mean += t.p[u] * u;
    for (int u = 0; u < p.J && u < static_cast<int>(t.p.size()); ++u)
        head += t.p[u];
    // saturated branch uses the exact complement, no tail truncation needed
    mean += (1.0 - head) * (p.J - 1.0);
    return 1.0 + mean;
}

} // namespace gfscma::netmodel
