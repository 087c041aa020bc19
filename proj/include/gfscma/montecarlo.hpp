#pragma once

// Independent network simulator: samples the PPP model on a toroidal window,
// executes power control, occupancy, SINR and MLD trials, and estimates the
// metrics the analysis predicts. Realizations are independent work units
// with per-index RNG streams, so estimates are byte-identical at any thread
// count.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "gfscma/errors.hpp"
#include "gfscma/netmodel.hpp"
#include "gfscma/scma.hpp"

namespace gfscma::montecarlo {

using netmodel::NetworkParams;

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Per-realization stream: master seed and realization index fully determine
// the draw sequence.
class RngStream {
  public:
    RngStream(uint64_t seed, uint64_t stream) {
        uint64_t s0 = splitmix64(seed ^ 0x8BADF00DDEADBEEFull);
        uint64_t s1 = splitmix64(s0 + stream);
        std::seed_seq seq{static_cast<uint32_t>(s1), static_cast<uint32_t>(s1 >> 32),
                          static_cast<uint32_t>(splitmix64(s1)),
                          static_cast<uint32_t>(splitmix64(s1 + 1))};
        eng_.seed(seq);
    }

    double uniform01() { // (0, 1]
        return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    }
    double uniform01o() { // [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }
    double exponential() { return -std::log(uniform01()); }
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u = uniform01();
        double v = uniform01o();
        double r = std::sqrt(-2.0 * std::log(u));
        double th = 2.0 * std::numbers::pi * v;
        cached_ = r * std::sin(th);
        have_cached_ = true;
        return r * std::cos(th);
    }
    std::complex<double> cnormal() { // CN(0, 1)
        double u = uniform01();
        double v = uniform01o();
        double r = std::sqrt(-std::log(u)); // |z|^2 ~ Exp(1)
        double th = 2.0 * std::numbers::pi * v;
        return {r * std::cos(th), r * std::sin(th)};
    }
    // Gamma(shape, 1) for small integer shape: minus-log of a uniform product.
    double gamma_int(int shape) {
        double prod = 1.0;
        for (int i = 0; i < shape; ++i) prod *= uniform01();
        return -std::log(prod);
    }
    int uniform_int(int n) { // 0 .. n-1
        return static_cast<int>(uniform01o() * n);
    }

    // Poisson: product inversion for small mean, PTRD (Hoermann) otherwise.
    long poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean < 10.0) {
            double limit = std::exp(-mean);
            double prod = uniform01();
            long k = 0;
            while (prod > limit) {
                prod *= uniform01();
                ++k;
            }
            return k;
        }
        double smu = std::sqrt(mean);
        double bpar = 0.931 + 2.53 * smu;
        double apar = -0.059 + 0.02483 * bpar;
        double inv_alpha = 1.1239 + 1.1328 / (bpar - 3.4);
        double vr = 0.9277 - 3.6224 / (bpar - 2.0);
        double lnmu = std::log(mean);
        while (true) {
            double U = uniform01o() - 0.5;
            double V = uniform01();
            double us = 0.5 - std::abs(U);
            long k = static_cast<long>(
                std::floor((2.0 * apar / us + bpar) * U + mean + 0.43));
            if (us >= 0.07 && V <= vr) return k;
            if (k < 0 || (us < 0.013 && V > us)) continue;
            double lhs = std::log(V * inv_alpha / (apar / (us * us) + bpar));
            if (lhs <= k * lnmu - mean - specfun::ln_gamma(k + 1.0)) return k;
        }
    }

  private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

struct Point {
    double x = 0.0, y = 0.0;
};

/// Poisson(intensity * side^2) uniform points on the square window.
inline std::vector<Point> sample_hppp(double intensity, double side,
                                      RngStream& rng) {
    if (!(intensity >= 0) || !(side > 0))
        throw std::domain_error("sample_hppp: bad intensity or window");
    long n = rng.poisson(intensity * side * side);
    std::vector<Point> pts(n);
    for (auto& p : pts) {
        p.x = rng.uniform01o() * side;
        p.y = rng.uniform01o() * side;
    }
    return pts;
}

inline double torus_dist_sq(const Point& a, const Point& b, double side) {
    double dx = std::abs(a.x - b.x);
    double dy = std::abs(a.y - b.y);
    if (dx > 0.5 * side) dx = side - dx;
    if (dy > 0.5 * side) dy = side - dy;
    return dx * dx + dy * dy;
}

// Uniform-grid nearest-neighbor index with toroidal wrap.
class BsGrid {
  public:
    void build(const std::vector<Point>& pts, double side) {
        side_ = side;
        pts_ = &pts;
        dim_ = std::max<int>(1, static_cast<int>(std::sqrt(
                                    static_cast<double>(pts.size()))));
        cell_ = side / dim_;
        heads_.assign(static_cast<size_t>(dim_) * dim_, -1);
        next_.assign(pts.size(), -1);
        for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
            int c = cell_index(pts[i].x, pts[i].y);
            next_[i] = heads_[c];
            heads_[c] = i;
        }
    }

    // Index and squared distance of the nearest site.
    std::pair<int, double> nearest(const Point& q) const {
        int cx = coord(q.x), cy = coord(q.y);
        int best = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int ring = 0; ring <= dim_; ++ring) {
            // once a candidate exists, stop when the ring cannot beat it
            if (best >= 0) {
                double ring_min = (ring - 1) * cell_;
                if (ring_min > 0 && ring_min * ring_min > best_d2) break;
            }
            int half = dim_ / 2;
            if (ring > half + 1) break;
            for (int dx = -ring; dx <= ring; ++dx)
                for (int dy = -ring; dy <= ring; ++dy) {
                    if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                    int gx = wrap(cx + dx), gy = wrap(cy + dy);
                    for (int i = heads_[static_cast<size_t>(gx) * dim_ + gy];
                         i >= 0; i = next_[i]) {
                        double d2 = torus_dist_sq(q, (*pts_)[i], side_);
                        if (d2 < best_d2) {
                            best_d2 = d2;
                            best = i;
                        }
                    }
                }
        }
        return {best, best_d2};
    }

  private:
    int coord(double v) const {
        int c = static_cast<int>(v / cell_);
        return c >= dim_ ? dim_ - 1 : c;
    }
    int cell_index(double x, double y) const {
        return coord(x) * dim_ + coord(y);
    }
    int wrap(int c) const {
        c %= dim_;
        return c < 0 ? c + dim_ : c;
    }

    double side_ = 0.0, cell_ = 0.0;
    int dim_ = 0;
    const std::vector<Point>* pts_ = nullptr;
    std::vector<int> heads_, next_;
};

struct MetricEstimate {
    double value = 0.0;
    double ci_halfwidth = 0.0; // 95%
    long n = 0;
    uint64_t seed = 0;
};

inline MetricEstimate bernoulli_estimate(long successes, long n,
                                         uint64_t seed) {
    MetricEstimate e;
    e.n = n;
    e.seed = seed;
    e.value = static_cast<double>(successes) / n;
    if (n > 1) {
        double s = std::sqrt(n * e.value * (1.0 - e.value) / (n - 1.0));
        e.ci_halfwidth = 1.96 * s / std::sqrt(static_cast<double>(n));
    }
    return e;
}

struct SimOptions {
    double window_side = 10000.0; // m
    int threads = 0;              // 0: hardware/env default
};

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GFSCMA_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

inline void check_window(const NetworkParams& p, double side,
                         double rho_eff) {
    double rmax = std::pow(p.rho_max / rho_eff, 1.0 / p.eta);
    if (rmax > side / 4.0)
        throw std::domain_error(
            "window too small: truncation radius " + std::to_string(rmax) +
            " exceeds a quarter of the window side " + std::to_string(side));
}

// Everything the success metric needs from one sampled network.
struct RealizationOutcome {
    bool typical_truncated = false;
    int occupancy = 0;       // transmitting same-pilot UEs in the typical cell
    double decoded_gain = 0; // G_o plus up to J-1 co-decoded gains
    double intra = 0.0;      // W
    double inter = 0.0;      // W
};

struct Scratch {
    std::vector<Point> bs;
    BsGrid grid;
};

// One snapshot of the reduced same-pilot network: BS PPP, typical UE, and
// the pilot-sharing UE class at lambda_u. Interferers attenuate as
// rho (R_i / D_i)^eta toward the typical's BS with toroidal distances.
inline RealizationOutcome one_realization(const NetworkParams& p,
                                          double lambda_u, double side,
                                          RngStream& rng, Scratch& sc) {
    RealizationOutcome out;
    const double rmax2 = std::pow(p.rho_max / p.rho, 2.0 / p.eta);
    const double half_eta = p.eta / 2.0;

    sc.bs = sample_hppp(p.lambda_b, side, rng);
    if (sc.bs.empty())
        throw std::runtime_error("one_realization: empty BS process");
    sc.grid.build(sc.bs, side);

    Point typical{rng.uniform01o() * side, rng.uniform01o() * side};
    auto [tbs, tr2] = sc.grid.nearest(typical);
    out.typical_truncated = tr2 > rmax2;
    const Point bso = sc.bs[tbs];

    if (!out.typical_truncated) out.decoded_gain = rng.gamma_int(p.d_s);

    long n_u = rng.poisson(lambda_u * side * side);
    int co_decoded = 0;
    for (long i = 0; i < n_u; ++i) {
        Point ue{rng.uniform01o() * side, rng.uniform01o() * side};
        auto [bs, r2] = sc.grid.nearest(ue);
        if (r2 > rmax2) continue; // truncated: silent
        double g = rng.gamma_int(p.d_s);
        if (bs == tbs) {
            ++out.occupancy;
            if (co_decoded < p.J - 1) {
                out.decoded_gain += g;
                ++co_decoded;
            } else {
                out.intra += p.rho * g;
            }
        } else {
            double d2 = torus_dist_sq(ue, bso, side);
            out.inter += p.rho * std::pow(r2 / d2, half_eta) * g;
        }
    }
    return out;
}

namespace detail {

template <class PerRealization>
void parallel_realizations(long n_real, int threads,
                           PerRealization&& body) {
    threads = static_cast<int>(
        std::max<long>(1, std::min<long>(threads, n_real)));
    std::vector<std::thread> pool;
    long chunk = (n_real + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        long lo = t * chunk;
        long hi = std::min(n_real, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body, t] { body(t, lo, hi); });
    }
    for (auto& th : pool) th.join();
}

} // namespace detail

/// Success-probability estimates for several thresholds from shared
/// realizations. Success: typical UE transmits (not truncated) and the joint
/// decoded SINR clears the threshold.
inline std::vector<MetricEstimate> simulate_success_multi(
    const NetworkParams& p, const std::vector<double>& gamma_list, long n_real,
    uint64_t seed, SimOptions opts = {}) {
    p.validate();
    if (n_real < 1)
        throw std::domain_error("simulate_success: n_real must be >= 1");
    check_window(p, opts.window_side, p.rho);
    const double lambda_u = netmodel::pilot_intensity(p);
    int threads = resolve_threads(opts.threads);

    std::vector<std::vector<long>> counts(
        threads, std::vector<long>(gamma_list.size(), 0));
    detail::parallel_realizations(
        n_real, threads, [&](int t, long lo, long hi) {
            Scratch sc;
            for (long i = lo; i < hi; ++i) {
                RngStream rng(seed, static_cast<uint64_t>(i));
                RealizationOutcome o =
                    one_realization(p, lambda_u, opts.window_side, rng, sc);
                if (o.typical_truncated) continue;
                double signal = p.rho * o.decoded_gain;
                double denom = o.inter + o.intra + p.sigma_sq;
                for (size_t k = 0; k < gamma_list.size(); ++k)
                    if (signal >= gamma_list[k] * denom) ++counts[t][k];
            }
        });

    std::vector<MetricEstimate> out;
    for (size_t k = 0; k < gamma_list.size(); ++k) {
        long total = 0;
        for (int t = 0; t < threads; ++t) total += counts[t][k];
        out.push_back(bernoulli_estimate(total, n_real, seed));
    }
    return out;
}

inline MetricEstimate simulate_success(const NetworkParams& p, long n_real,
                                       uint64_t seed, SimOptions opts = {}) {
    return simulate_success_multi(p, {p.gamma_th}, n_real, seed, opts)[0];
}

/// Symbol errors of an MLD receiver under codebook collision: every foreign
/// cell contributes one same-codebook interferer (serving distance
/// conditional on transmitting, kept when farther from the typical's BS than
/// from its own). The typical UE is conditioned on transmitting. SNR fixes
/// the power-control target at rho_eff = sigma^2 * SNR.
inline MetricEstimate simulate_asep(const NetworkParams& p,
                                    const scma::Codebook& cb, double snr,
                                    long n_trials, uint64_t seed,
                                    SimOptions opts = {}) {
    p.validate();
    if (n_trials < 1)
        throw std::domain_error("simulate_asep: n_trials must be >= 1");
    if (cb.M != p.M || cb.K != p.K || cb.d_s != p.d_s)
        throw InvariantError("asep.codebook",
                             "codebook (M, K, d_s) disagrees with params");
    const double rho_eff = p.sigma_sq * snr;
    check_window(p, opts.window_side, rho_eff);
    const double side = opts.window_side;
    const double rmax2 = std::pow(p.rho_max / rho_eff, 2.0 / p.eta);
    const double pi_lb = std::numbers::pi * p.lambda_b;
    const double alpha = pi_lb * std::pow(rmax2, 1.0); // pi lb rmax^2
    const double trunc_mass = -std::expm1(-alpha);     // P{R <= rmax}
    const int ds = p.d_s;
    const auto& support = cb.support;
    int threads = resolve_threads(opts.threads);

    // conditional serving distance R | R <= rmax, by CDF inversion
    auto draw_r2 = [&](RngStream& rng) {
        return -std::log1p(-rng.uniform01o() * trunc_mass) / pi_lb;
    };

    std::vector<long> errors(threads, 0);
    detail::parallel_realizations(
        n_trials, threads, [&](int t, long lo, long hi) {
            std::vector<std::complex<double>> y(ds), h_o(ds);
            for (long i = lo; i < hi; ++i) {
                RngStream rng(seed, static_cast<uint64_t>(i));
                int sent = rng.uniform_int(cb.M);
                for (int s = 0; s < ds; ++s) {
                    h_o[s] = rng.cnormal();
                    y[s] = std::sqrt(rho_eff) *
                               cb.codewords[sent][support[s]] * h_o[s] +
                           std::sqrt(p.sigma_sq / 2.0) *
                               std::complex<double>(rng.normal(), rng.normal());
                }
                Point bso{side / 2.0, side / 2.0};
                long n_int = rng.poisson(p.lambda_b * side * side);
                for (long q = 0; q < n_int; ++q) {
                    Point ue{rng.uniform01o() * side, rng.uniform01o() * side};
                    double d2 = torus_dist_sq(ue, bso, side);
                    double r2 = draw_r2(rng);
                    if (d2 <= r2) continue; // serves its own closer BS
                    int cw = rng.uniform_int(cb.M);
                    double amp = std::sqrt(rho_eff) *
                                 std::pow(r2 / d2, p.eta / 4.0);
                    for (int s = 0; s < ds; ++s)
                        y[s] += amp * cb.codewords[cw][support[s]] *
                                rng.cnormal();
                }
                int best = 0;
                double best_metric = std::numeric_limits<double>::infinity();
                for (int m = 0; m < cb.M; ++m) {
                    double metric = 0.0;
                    for (int s = 0; s < ds; ++s)
                        metric += std::norm(y[s] -
                                            std::sqrt(rho_eff) *
                                                cb.codewords[m][support[s]] *
                                                h_o[s]);
                    if (metric < best_metric) {
                        best_metric = metric;
                        best = m;
                    }
                }
                if (best != sent) ++errors[t];
            }
        });

    long total = 0;
    for (long e : errors) total += e;
    return bernoulli_estimate(total, n_trials, seed);
}

/// (1/n) sum e^{j omega x}.
inline std::complex<double> empirical_cf(const std::vector<double>& samples,
                                         double omega) {
    if (samples.empty())
        throw std::domain_error("empirical_cf: no samples");
    std::complex<double> acc(0.0, 0.0);
    for (double x : samples) acc += std::polar(1.0, omega * x);
    return acc / static_cast<double>(samples.size());
}

// Per-realization component records for validating the analytical CFs.
struct InterferenceSamples {
    std::vector<double> inter, intra;
    std::vector<double> neg_signal_over_gamma; // -(1/gamma) sum rho G, 0 if truncated
    std::vector<int> occupancy;
    std::vector<double> typical_serving_distance;
};

inline InterferenceSamples sample_interference_components(
    const NetworkParams& p, long n_real, uint64_t seed, SimOptions opts = {}) {
    p.validate();
    check_window(p, opts.window_side, p.rho);
    const double lambda_u = netmodel::pilot_intensity(p);
    InterferenceSamples out;
    out.inter.reserve(n_real);
    Scratch sc;
    for (long i = 0; i < n_real; ++i) {
        RngStream rng(seed, static_cast<uint64_t>(i));
        // mirror one_realization's draw order to keep streams aligned
        RealizationOutcome o =
            one_realization(p, lambda_u, opts.window_side, rng, sc);
        out.inter.push_back(o.inter);
        out.intra.push_back(o.intra);
        out.neg_signal_over_gamma.push_back(
            o.typical_truncated ? 0.0
                                : -p.rho * o.decoded_gain / p.gamma_th);
        out.occupancy.push_back(o.occupancy);
    }
    return out;
}

// A materialized snapshot for inspection-style tests.
struct UeRecord {
    Point pos;
    int serving_bs = -1;
    double serving_distance = 0.0;
    bool truncated = false;
};

struct Realization {
    double window_side = 0.0;
    std::vector<Point> bs_points;
    std::vector<UeRecord> ue_points;
    Point typical;
    int typical_bs = -1;
    double typical_serving_distance = 0.0;
    bool typical_truncated = false;
};

inline Realization sample_realization(const NetworkParams& p, uint64_t seed,
                                      uint64_t index, SimOptions opts = {}) {
    p.validate();
    Realization r;
    r.window_side = opts.window_side;
    RngStream rng(seed, index);
    const double rmax2 = std::pow(p.rho_max / p.rho, 2.0 / p.eta);
    r.bs_points = sample_hppp(p.lambda_b, r.window_side, rng);
    if (r.bs_points.empty())
        throw std::runtime_error("sample_realization: empty BS process");
    BsGrid grid;
    grid.build(r.bs_points, r.window_side);
    r.typical = {rng.uniform01o() * r.window_side,
                 rng.uniform01o() * r.window_side};
    auto [tbs, tr2] = grid.nearest(r.typical);
    r.typical_bs = tbs;
    r.typical_serving_distance = std::sqrt(tr2);
    r.typical_truncated = tr2 > rmax2;
    long n_u = rng.poisson(netmodel::pilot_intensity(p) * r.window_side *
                           r.window_side);
    for (long i = 0; i < n_u; ++i) {
        UeRecord ue;
        ue.pos = {rng.uniform01o() * r.window_side,
                  rng.uniform01o() * r.window_side};
        auto [bs, d2] = grid.nearest(ue.pos);
        ue.serving_bs = bs;
        ue.serving_distance = std::sqrt(d2);
        ue.truncated = d2 > rmax2;
        r.ue_points.push_back(ue);
    }
    return r;
}

} // namespace gfscma::montecarlo
