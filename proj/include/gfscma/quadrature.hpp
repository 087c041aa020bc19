#pragma once

// Adaptive Gauss-Kronrod panel integration plus an Euler-accelerated
// half-period tail for conditionally convergent oscillatory integrals on
// [0, inf). The characteristic-function inversions are the only consumers;
// tolerances default to their contracts.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "gfscma/errors.hpp"

namespace gfscma::quad {

namespace detail {

// G7-K15 node/weight table, positive half; w_g = 0 marks Kronrod-only nodes.
struct NodeRow {
    double x, wg, wk;
};
inline constexpr NodeRow kGk15[8] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

} // namespace detail

struct PanelResult {
    double value = 0.0;
    double error = 0.0;
};

template <class F>
PanelResult gk15(const F& f, double a, double b, long& evals) {
    const double mid = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double y0 = f(mid);
    double g7 = detail::kGk15[0].wg * y0;
    double k15 = detail::kGk15[0].wk * y0;
    evals += 1;
    for (int i = 1; i < 8; ++i) {
        double dx = h * detail::kGk15[i].x;
        double y = f(mid + dx) + f(mid - dx);
        evals += 2;
        g7 += detail::kGk15[i].wg * y;
        k15 += detail::kGk15[i].wk * y;
    }
    g7 *= h;
    k15 *= h;
    // |K15 - G7| is a conservative error estimate; refinement is cheap here
    return {k15, std::abs(k15 - g7)};
}

/// Adaptive bisection on [a, b] until each panel's error estimate is below
/// `abs_tol`. Throws ToleranceError if the depth budget runs out.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol,
                          long& evals, int max_depth = 48,
                          long max_evals = 200000000L) {
    struct Seg {
        double a, b;
        int depth;
    };
    std::vector<Seg> stack{{a, b, 0}};
    double total = 0.0;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        PanelResult r = gk15(f, s.a, s.b, evals);
        if (r.error <= abs_tol || s.depth >= max_depth) {
            if (s.depth >= max_depth && r.error > 64 * abs_tol)
                throw ToleranceError(
                    "integrate_adaptive: panel tolerance not reached");
            total += r.value;
            continue;
        }
        if (evals > max_evals)
            throw ToleranceError("integrate_adaptive: evaluation budget spent");
        double mid = 0.5 * (s.a + s.b);
        stack.push_back({s.a, mid, s.depth + 1});
        stack.push_back({mid, s.b, s.depth + 1});
    }
    return total;
}

/// Sum of integral_{start + m T}^{start + (m+1) T} f, m = 0, 1, ...,
/// accelerated with an iterated-averaging (Euler) transform. T should be a
/// half period of the dominant oscillation so consecutive segments alternate.
template <class F>
double oscillatory_tail(const F& f, double start, double half_period,
                        double abs_tol, long& evals, double hard_stop,
                        int max_segments = 5000) {
    std::vector<double> avg; // averaging table, row j = latest j-th average
    avg.reserve(48);
    double partial = 0.0;
    double prev_accel = 0.0;
    int streak = 0;
    for (int m = 0; m < max_segments; ++m) {
        double a = start + m * half_period;
        double b = a + half_period;
        if (a >= hard_stop) return prev_accel;
        partial += integrate_adaptive(f, a, b, abs_tol * 0.1, evals, 30);
        double carry = partial;
        for (double& row : avg) {
            double next = 0.5 * (row + carry);
            row = carry;
            carry = next;
        }
        if (avg.size() < 40) avg.push_back(carry);
        double accel = carry;
        if (m > 8) {
            streak = std::abs(accel - prev_accel) < abs_tol ? streak + 1 : 0;
            if (streak >= 3) return accel;
        }
        prev_accel = accel;
    }
    throw ToleranceError("oscillatory_tail: no convergence");
}

/// Integral over [0, inf) of a function that eventually decays monotonically
/// (no persistent oscillation). Dyadic panels from `scale`; stops when three
/// consecutive panels contribute below rel_tail * |total|.
template <class F>
double integrate_decaying(const F& f, double scale, double panel_tol,
                          long& evals, double rel_tail = 1e-14,
                          int max_doublings = 80) {
    double total = 0.0;
    double lo = 0.0;
    double hi = scale * std::pow(2.0, -20);
    int quiet = 0;
    for (int k = 0; k < max_doublings + 21; ++k) {
        double piece = integrate_adaptive(f, lo, hi, panel_tol, evals);
        total += piece;
        if (std::abs(piece) < rel_tail * std::max(std::abs(total), 1e-300))
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 3 && hi > scale) return total;
        lo = hi;
        hi *= 2.0;
    }
    throw ToleranceError("integrate_decaying: tail did not die out");
}

} // namespace gfscma::quad
