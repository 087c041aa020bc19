#pragma once

// Closed-form and semi-closed-form results: interference characteristic
// functions, Gil-Pelaez inversion, success probability, ASE, the asymptotic
// scaling form, and the pairwise/symbol error-rate chain.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "gfscma/errors.hpp"
#include "gfscma/netmodel.hpp"
#include "gfscma/quadrature.hpp"
#include "gfscma/scma.hpp"
#include "gfscma/specfun.hpp"

namespace gfscma::analytic {

using Complex = std::complex<double>;
using netmodel::NetworkParams;

struct CharacteristicFunction {
    std::function<Complex(double)> evaluator; // omega > 0 -> CF value
    std::string description;
};

struct GilPelaezOptions {
    double omega_unit = 1.0;   // characteristic frequency scale of the CF
    double panel_tol = 1e-10;  // absolute per-panel tolerance
    double envelope_tol = 1e-12; // truncation threshold on |cf(w)|/(w/unit)
    double hard_cap = 1e15;    // decade scan limit, in units of omega_unit
    double rate_hint = 0.0;    // known internal CF phase rate (per unit)
    double cap_rate = 0.0;     // extra transient rate for panel sizing
    bool skip_cf_probe = false;
};

struct InversionResult {
    double value = 0.0;     // raw, before clamping
    long evals = 0;
    double omega_trunc = 0.0;
    double clamp_residual = 0.0;
};

struct SuccessResult {
    double p_suc = 0.0;
    long integrand_evals = 0;
    double truncation_omega = 0.0;
};

namespace detail {

// Finds the first decade t_k = t0 10^k whose envelope |cf|/t sits below
// `tol` together with the next two decades. Throws if the scan exhausts the
// hard cap: the CF tail is too heavy to truncate.
template <class G>
double truncation_point(const G& g, double t0, double tol, double cap,
                        long& evals) {
    double qualifying = -1.0;
    int streak = 0;
    for (double t = t0; t <= cap * 1.0001; t *= 10.0) {
        double env = std::abs(g(t)) / t;
        ++evals;
        if (env < tol) {
            if (streak == 0) qualifying = t;
            if (++streak == 3) return qualifying;
        } else {
            streak = 0;
        }
    }
    throw TruncationError(
        "gil_pelaez: envelope |cf(w)|/w never stayed below tolerance");
}

// Integrates f over [0, hi]: geometric panels from hi*2^-26 doubling until
// the width cap, then linear strides. Each panel refined adaptively.
template <class F>
double integrate_zero_to(const F& f, double hi, double panel_tol, double w_max,
                         long& evals) {
    double lo = 0.0;
    double width = hi * std::pow(2.0, -26);
    double total = 0.0;
    while (lo < hi) {
        double w = std::min(width, w_max);
        double next = std::min(lo + w, hi);
        total += quad::integrate_adaptive(f, lo, next, panel_tol, evals);
        lo = next;
        width *= 2.0;
    }
    return total;
}

// Phase-rate estimate of g at t: mean unwrapped-increment over two small
// steps, falling back to `guess` when increments disagree (aliasing).
template <class G>
double estimate_rate(const G& g, double t, double guess, long& evals) {
    double step = guess > 0 ? 0.02 * 2.0 * std::numbers::pi / guess : t * 1e-3;
    step = std::min(step, 0.1 * t);
    Complex g0 = g(t), g1 = g(t + step), g2 = g(t + 2 * step);
    evals += 3;
    if (std::abs(g0) < 1e-280 || std::abs(g1) < 1e-280 ||
        std::abs(g2) < 1e-280)
        return guess;
    double d1 = std::arg(g1 / g0);
    double d2 = std::arg(g2 / g1);
    if (std::abs(d1 - d2) > 0.3 * std::max(std::abs(d1), std::abs(d2)) + 1e-9)
        return guess;
    return std::abs(d1 + d2) / (2.0 * step);
}

// Core inversion: P = 1/2 - (1/pi) Int_0^inf Im{e^{-jwx} cf(w)} dw/w,
// computed in scaled frequency t = w / unit.
template <class CF>
InversionResult invert(const CF& cf, double x, const GilPelaezOptions& o) {
    const double u = o.omega_unit;
    auto g = [&](double t) { return cf(t * u) * std::polar(1.0, -t * u * x); };
    auto integrand = [&](double t) { return std::imag(g(t)) / t; };

    InversionResult res;
    double omega_t =
        truncation_point(g, 1e-3, o.envelope_tol, o.hard_cap, res.evals);
    res.omega_trunc = omega_t * u;

    double rate_guess = std::abs(x) * u + o.rate_hint;
    double A = omega_t;
    if (rate_guess > 0)
        A = std::min(omega_t, 48.0 * 2.0 * std::numbers::pi / rate_guess);
    double cap_rate = std::max(rate_guess + o.cap_rate, 1e-30);
    double w_max = 0.75 * 2.0 * std::numbers::pi / cap_rate;

    double total =
        integrate_zero_to(integrand, A, o.panel_tol, w_max, res.evals);

    if (A < omega_t) {
        double rate = estimate_rate(g, A, rate_guess, res.evals);
        if (rate <= 0) rate = rate_guess;
        double remaining = (omega_t - A) * rate;
        if (remaining < 20.0 * std::numbers::pi) {
            total += integrate_zero_to(
                [&](double t) { return integrand(A + t); }, omega_t - A,
                o.panel_tol, w_max, res.evals);
        } else {
            total += quad::oscillatory_tail(integrand, A,
                                            std::numbers::pi / rate,
                                            o.panel_tol, res.evals, omega_t);
        }
    }

    res.value = 0.5 - total / std::numbers::pi;
    return res;
}

inline double clamp_probability(double v, double& residual,
                                double slack = 1e-6) {
    double c = std::clamp(v, 0.0, 1.0);
    residual = v - c;
    if (std::abs(residual) > slack)
        throw ToleranceError(
            "probability overshoots [0,1] beyond the quadrature slack: " +
            std::to_string(v));
    return c;
}

inline void probe_cf(const std::function<Complex(double)>& ev, double unit) {
    for (double t : {1e-6, 1e-3, 1.0, 1e3}) {
        Complex v = ev(t * unit);
        if (!(std::abs(v) <= 1.0 + 1e-9))
            throw InvariantError("cf.magnitude",
                                 "|cf| exceeds 1 at omega = " +
                                     std::to_string(t * unit));
    }
}

} // namespace detail

/// CDF by Gil-Pelaez inversion: P(X <= x) = 1/2 - (1/pi) Int Im{e^{-jwx}
/// cf(w)} dw / w.
inline double gil_pelaez_cdf(const CharacteristicFunction& cf, double x,
                             GilPelaezOptions opts = {},
                             InversionResult* diag = nullptr) {
    if (!opts.skip_cf_probe) detail::probe_cf(cf.evaluator, opts.omega_unit);
    InversionResult r = detail::invert(
        [&](double w) { return cf.evaluator(w); }, x, opts);
    if (diag) *diag = r;
    double residual = 0.0;
    double p = detail::clamp_probability(r.value, residual);
    if (diag) diag->clamp_residual = residual;
    return p;
}

namespace detail {

// gamma(2, alpha) = 1 - (1 + alpha) e^{-alpha}; the truncated second moment
// of the serving distance, scaled by pi lambda_b.
inline double gamma2(double alpha) {
    if (std::isinf(alpha)) return 1.0;
    if (alpha < 1e-4) // series for the cancellation-prone region
        return 0.5 * alpha * alpha *
               (1.0 - 2.0 * alpha / 3.0 + 0.25 * alpha * alpha);
    return 1.0 - (1.0 + alpha) * std::exp(-alpha);
}

} // namespace detail

/// Inter-cell interference CF at omega:
/// exp{ beta c gamma(2, alpha) M_w }, M_w = 1 - 2F1(-1/b, d_s; 1-1/b; j w rho).
inline Complex cf_inter(double omega, const NetworkParams& p) {
    if (!(omega > 0)) throw std::domain_error("cf_inter: omega must be > 0");
    double b = p.b();
    Complex F = specfun::hyp2f1(-1.0 / b, p.d_s, 1.0 - 1.0 / b,
                                Complex(0.0, omega * p.rho));
    Complex M = 1.0 - F;
    double scale = netmodel::effective_interferer_intensity(p) / p.lambda_b *
                   detail::gamma2(netmodel::alpha_of(p));
    return std::exp(scale * M);
}

/// Intra-cell interference CF, summed in the occupancy mixture form
/// sum_{u<J} P(u) + sum_{u>=J} P(u) K_w^{u-(J-1)} with K_w = (1-j w rho)^{-d_s}.
/// Algebraically equal to the closed generating-function form but free of
/// its large-omega cancellation.
inline Complex cf_intra(double omega, const NetworkParams& p,
                        const netmodel::OccupancyTable& t) {
    if (!(omega > 0)) throw std::domain_error("cf_intra: omega must be > 0");
    Complex kw = std::pow(Complex(1.0, -omega * p.rho), -double(p.d_s));
    Complex sum(t.head(p.J - 1), 0.0);
    Complex kpow = kw;
    for (int u = p.J; u < static_cast<int>(t.p.size()); ++u) {
        sum += t.p[u] * kpow;
        kpow *= kw;
    }
    return sum;
}

inline Complex cf_intra(double omega, const NetworkParams& p) {
    return cf_intra(omega, p, netmodel::occupancy_table(p));
}

/// Signal term S_w: truncated-UE branch e^{-alpha} plus the occupancy
/// mixture of (1 + j w rho / gamma)^{-d_s (u+1)} and the saturated branch.
/// `eq9_literal` switches to the -d_s u exponent form.
inline Complex signal_term(double omega, const NetworkParams& p,
                           const netmodel::OccupancyTable& t,
                           bool eq9_literal = false) {
    if (!(omega > 0))
        throw std::domain_error("signal_term: omega must be > 0");
    Complex base = Complex(1.0, omega * p.rho / p.gamma_th);
    Complex tw = std::pow(base, -double(p.d_s));
    double head = t.head(p.J - 1);
    Complex mix(0.0, 0.0);
    if (!eq9_literal) {
        Complex tpow = tw; // t^{u+1} at u = 0
        for (int u = 0; u < p.J && u < static_cast<int>(t.p.size()); ++u) {
            mix += t.p[u] * tpow;
            tpow *= tw;
        }
        mix += (1.0 - head) * std::pow(base, -double(p.J) * p.d_s);
    } else {
        Complex tJ = std::pow(base, -double(p.J) * p.d_s);
        Complex tpow(1.0, 0.0); // t^u at u = 0
        Complex s(0.0, 0.0);
        for (int u = 0; u < p.J && u < static_cast<int>(t.p.size()); ++u) {
            s += t.p[u] * (tpow - tJ);
            tpow *= tw;
        }
        mix = 1.0 - s;
    }
    double op = netmodel::truncation_outage(p);
    return op + (1.0 - op) * mix;
}

inline Complex signal_term(double omega, const NetworkParams& p) {
    return signal_term(omega, p, netmodel::occupancy_table(p));
}

/// Joint cell factor E[exp{j w (I_intra - S / gamma_th)}]: the decoded-signal
/// mixture and the intra-cell excess share one occupancy draw, so the exact
/// CF couples them through the common P{u} instead of multiplying the two
/// marginal factors. Reduces the inversion's model error to the level of the
/// occupancy approximation itself.
inline Complex cf_cell(double omega, const NetworkParams& p,
                       const netmodel::OccupancyTable& t) {
    if (!(omega > 0)) throw std::domain_error("cf_cell: omega must be > 0");
    Complex tsig =
        std::pow(Complex(1.0, omega * p.rho / p.gamma_th), -double(p.d_s));
    Complex kw = std::pow(Complex(1.0, -omega * p.rho), -double(p.d_s));
    Complex tsat = std::pow(tsig, double(p.J));
    Complex mix(0.0, 0.0);
    Complex tp = tsig;  // t^{u+1} while u < J
    Complex kp(1.0, 0.0); // K^{u-(J-1)} once u >= J
    for (int u = 0; u < static_cast<int>(t.p.size()); ++u) {
        if (u < p.J) {
            mix += t.p[u] * tp;
            if (u < p.J - 1) tp *= tsig;
        } else {
            kp *= kw;
            mix += t.p[u] * tsat * kp;
        }
    }
    double op = netmodel::truncation_outage(p);
    return op + (1.0 - op) * mix;
}

struct SolverOptions {
    // Evaluate the literal factorized product S_w Phi_intra instead of the
    // joint cell factor. The product treats the decoded-signal count and the
    // intra-cell interferer count as independent, which they are not; it is
    // kept for comparison with the factorized closed form.
    bool factorized_cf = false;
    bool eq9_literal_signal = false;
    double panel_tol = 1e-10;
};

/// Success probability: Gil-Pelaez inversion of the SINR event CF
/// (cell factor) x Phi_inter x e^{j w sigma^2}.
inline SuccessResult success_probability(const NetworkParams& p,
                                         SolverOptions opts = {}) {
    p.validate();
    netmodel::OccupancyTable table = netmodel::occupancy_table(p);
    const double rho = p.rho;
    auto g = [&](double w) {
        Complex cell =
            opts.factorized_cf
                ? signal_term(w, p, table, opts.eq9_literal_signal) *
                      cf_intra(w, p, table)
                : cf_cell(w, p, table);
        return cell * cf_inter(w, p) * std::polar(1.0, w * p.sigma_sq);
    };
    GilPelaezOptions go;
    go.omega_unit = 1.0 / rho;
    go.panel_tol = opts.panel_tol;
    go.rate_hint = p.sigma_sq / rho; // dominant asymptotic rotation
    go.cap_rate = p.d_s / p.gamma_th + 1.0; // transient signal rotations
    InversionResult r = detail::invert(g, 0.0, go);
    double residual = 0.0;
    SuccessResult out;
    out.p_suc = detail::clamp_probability(r.value, residual);
    out.integrand_evals = r.evals;
    out.truncation_omega = r.omega_trunc;
    return out;
}

/// Closed-form interference-limited scaling approximation of the success
/// probability (quadratic hypergeometric expansion; xi = 1/(1 + 1/d_s)).
/// Refuses when noise dominates the signal scale or when the codebook count
/// cannot plausibly absorb the cell occupancy.
inline double success_probability_asymptotic(const NetworkParams& p) {
    p.validate();
    if (p.sigma_sq * p.gamma_th > 5.0 * p.rho * p.d_s)
        throw std::domain_error(
            "success_probability_asymptotic: noise-dominated regime");
    netmodel::OccupancyTable t = netmodel::occupancy_table(p);
    if (1.0 - t.head(p.J - 1) > 0.8)
        throw std::domain_error(
            "success_probability_asymptotic: intra-cell interference is not "
            "negligible at this occupancy");
    double b = p.b();
    double c = p.c_voronoi;
    double beta = netmodel::occupancy_beta(p);
    double xi = 1.0 / (1.0 + 1.0 / p.d_s);
    double expo = std::exp(-(beta * c) * (beta * c) * (2.0 * b - 1.0) /
                           (2.0 * (b - 1.0) * (b - 1.0)) * xi);
    double bracket = c / (2.0 * (b - 1.0)) - (c + 1.0) / p.gamma_th * expo;
    return 0.5 - beta * std::sqrt(4.0 * b - 2.0) * std::sqrt(xi) * bracket /
                     std::sqrt(std::numbers::pi);
}

/// Area spectral efficiency lambda_u Ubar P_suc log2(1 + gamma_th).
inline double ase(const NetworkParams& p, SolverOptions opts = {}) {
    double psuc = success_probability(p, opts).p_suc;
    return netmodel::pilot_intensity(p) * netmodel::mean_served(p) * psuc *
           std::log2(1.0 + p.gamma_th);
}

/// Constant C of the collided-interferer CF:
/// gamma(2, alpha) / (1 - e^{-alpha}), -> 1 as rho_max -> infinity.
inline double pep_constant(double alpha) {
    if (std::isinf(alpha)) return 1.0;
    if (alpha < 1e-6) return 0.5 * alpha; // leading order, avoids 0/0
    return detail::gamma2(alpha) / (-std::expm1(-alpha));
}

/// CF factor of the collided-codebook interference functional:
/// exp{-C [1F1(-1/b; 1-1/b; -v/4) - 1]}.
inline double pep_interference_cf(double v, const NetworkParams& p) {
    if (!(v > 0))
        throw std::domain_error("pep_interference_cf: v must be > 0");
    double b = p.b();
    double C = pep_constant(netmodel::alpha_of(p));
    double f = specfun::hyp1f1(-1.0 / b, 1.0 - 1.0 / b, Complex(-v / 4.0, 0.0))
                   .real();
    return std::exp(-C * (f - 1.0));
}

/// E[sin(0.5 sqrt(v H))] for H ~ Gamma(d_s, |Delta|^2), via the terminating
/// Kummer polynomial e^{-x} 1F1(1-d_s; 3/2; x), x = |Delta|^2 v / 16.
inline double expected_sin(double v, double delta_norm_sq, int d_s) {
    if (!(v > 0) || !(delta_norm_sq > 0) || d_s < 1)
        throw std::domain_error("expected_sin: bad arguments");
    double x = delta_norm_sq * v / 16.0;
    double poly =
        specfun::hyp1f1(1.0 - d_s, 1.5, Complex(x, 0.0)).real();
    double ratio =
        std::exp(specfun::ln_gamma(d_s + 0.5) - specfun::ln_gamma(d_s));
    return std::sqrt(delta_norm_sq) * ratio * 0.5 * std::sqrt(v) *
           std::exp(-x) * poly;
}

/// Average pairwise error probability for codeword difference norm
/// delta_norm_sq at the given SNR (SNR = rho / sigma^2; power control runs
/// at rho_eff = sigma^2 * SNR so rho_max truncation tracks the sweep).
inline double apep(double delta_norm_sq, const NetworkParams& p, double snr,
                   double panel_tol = 1e-11) {
    if (!(delta_norm_sq > 0) || !(snr > 0))
        throw std::domain_error("apep: requires delta_norm_sq > 0, snr > 0");
    double b = p.b();
    double rho_eff = p.sigma_sq * snr;
    double alpha = std::isinf(p.rho_max)
                       ? std::numeric_limits<double>::infinity()
                       : std::numbers::pi * p.lambda_b *
                             std::pow(p.rho_max / rho_eff, 1.0 / b);
    double C = pep_constant(alpha);
    // integrate in s = sqrt(v): (1/v) dv = (2/s) ds and the s -> 0 limit of
    // the integrand is finite since expected_sin ~ sqrt(v)
    auto h = [&](double s) {
        double v = s * s;
        double f =
            specfun::hyp1f1(-1.0 / b, 1.0 - 1.0 / b, Complex(-v / 4.0, 0.0))
                .real();
        return 2.0 / s * std::exp(-v / (4.0 * snr) - C * (f - 1.0)) *
               expected_sin(v, delta_norm_sq, p.d_s);
    };
    long evals = 0;
    double scale = 4.0 / std::sqrt(delta_norm_sq) + 2.0;
    double integral = quad::integrate_decaying(h, scale, panel_tol, evals);
    double raw = 0.5 - integral / (2.0 * std::numbers::pi);
    double residual = 0.0;
    return detail::clamp_probability(raw, residual);
}

/// ASEP: nearest-neighbor approximation (1/M) sum_c N_c APEP(Delta_min), or
/// the full union bound over all ordered codeword pairs.
inline double asep(const scma::DistanceSpectrum& spectrum,
                   const NetworkParams& p, double snr,
                   bool full_union_bound = false) {
    int M = static_cast<int>(spectrum.neighbor_count.size());
    if (M < 2) throw std::domain_error("asep: spectrum needs M >= 2");
    double total = 0.0;
    if (full_union_bound) {
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j)
                if (j != i)
                    total += apep(spectrum.pair_distances[i][j], p, snr);
    } else {
        double pe = apep(spectrum.delta_min_sq, p, snr);
        for (int i = 0; i < M; ++i) total += spectrum.neighbor_count[i] * pe;
    }
    return total / M;
}

} // namespace gfscma::analytic
