#pragma once

// Real/complex special-function kernels: log-gamma, incomplete gamma,
// Pochhammer symbols and the hypergeometric family 1F1 / 2F1 / 1F2.
// All are series-based with explicit transformations; nothing here calls
// into platform libm beyond elementary functions.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "gfscma/errors.hpp"

namespace gfscma::specfun {

using Complex = std::complex<double>;

namespace detail {

// Stop once |term| < eps*|sum| held for `needed` consecutive terms; guards
// against false stops of sign-alternating series.
class ConvergenceDetector {
  public:
    explicit ConvergenceDetector(double eps = 1e-16, int needed = 3)
        : eps_(eps), needed_(needed) {}
    bool done(double term_mag, double sum_mag) {
        if (term_mag < eps_ * sum_mag)
            ++streak_;
        else
            streak_ = 0;
        return streak_ >= needed_;
    }

  private:
    double eps_;
    int needed_;
    int streak_ = 0;
};

// Kahan-compensated complex accumulator.
class CompensatedSum {
  public:
    void add(Complex v) {
        Complex y = v - c_;
        Complex t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    Complex value() const { return s_; }

  private:
    Complex s_{0.0, 0.0};
    Complex c_{0.0, 0.0};
};

inline bool is_nonpositive_integer(double x, double tol = 1e-12) {
    return x <= tol && std::abs(x - std::round(x)) < tol;
}

inline void require_finite(Complex v, const char* who) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw ConvergenceError(std::string(who) + ": non-finite result");
}

} // namespace detail

/// Natural log of Gamma(x) for x > 0 (Lanczos, g = 7).
inline double ln_gamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("ln_gamma: requires x > 0");
    static constexpr double g = 7.0;
    static constexpr double coef[9] = {
        0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,    12.507343278686905,
        -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // reflection keeps the series argument away from 0
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) -
               ln_gamma(1.0 - x);
    }
    double z = x - 1.0;
    double a = coef[0];
    for (int i = 1; i < 9; ++i) a += coef[i] / (z + i);
    double t = z + g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) -
           t + std::log(a);
}

namespace detail {

// Regularized lower incomplete gamma by series, for x < s + 1.
inline double gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum))
            return sum * std::exp(s * std::log(x) - x - ln_gamma(s));
    }
    throw ConvergenceError("lower_incomplete_gamma: series failed");
}

// Regularized upper incomplete gamma by Lentz continued fraction, x >= s + 1.
inline double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            return std::exp(s * std::log(x) - x - ln_gamma(s)) * h;
    }
    throw ConvergenceError("lower_incomplete_gamma: continued fraction failed");
}

} // namespace detail

/// Regularized P(s, x) = gamma(s, x) / Gamma(s), s > 0, x >= 0.
inline double gamma_p(double s, double x) {
    if (!(s > 0.0) || !(x >= 0.0))
        throw std::domain_error("gamma_p: requires s > 0, x >= 0");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return x < s + 1.0 ? detail::gamma_p_series(s, x)
                       : 1.0 - detail::gamma_q_cf(s, x);
}

/// Lower incomplete gamma(s, x) = integral_0^x t^{s-1} e^{-t} dt.
inline double lower_incomplete_gamma(double s, double x) {
    if (!(s > 0.0) || !(x >= 0.0))
        throw std::domain_error(
            "lower_incomplete_gamma: requires s > 0, x >= 0");
    return gamma_p(s, x) * std::exp(ln_gamma(s));
}

/// Pochhammer symbol (a)_q = a (a+1) ... (a+q-1), with (a)_0 = 1.
inline double pochhammer(double a, int q) {
    if (q < 0)
        throw std::domain_error("pochhammer: requires q >= 0");
    double p = 1.0;
    for (int k = 0; k < q; ++k) p *= a + k;
    return p;
}

namespace detail {

// Raw Kummer series sum_n (a)_n / (b)_n z^n / n!.
inline Complex hyp1f1_series(double a, double b, Complex z, int max_terms) {
    CompensatedSum sum;
    ConvergenceDetector conv;
    Complex term{1.0, 0.0};
    sum.add(term);
    for (int n = 0; n < max_terms; ++n) {
        if (is_nonpositive_integer(b + n, 1e-300))
            throw std::domain_error("hyp1f1: b is a non-positive integer");
        term *= (a + n) * z / ((b + n) * (n + 1.0));
        sum.add(term);
        if (conv.done(std::abs(term), std::abs(sum.value())))
            return sum.value();
        if (a + n == 0.0) return sum.value(); // terminated exactly
    }
    throw ConvergenceError("hyp1f1: series did not converge within budget");
}

// Upper incomplete Gamma(a, x) for any real a and x >> 1+|a|, by Lentz.
inline double upper_gamma_cf_any(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 20000; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            return std::exp(a * std::log(x) - x) * h;
    }
    throw ConvergenceError("upper_gamma_cf_any failed");
}

// 1F1(a; a+1; -x) for a in (-1, 0), x large: a x^{-a} [Gamma(a) - Gamma(a,x)].
// The series route loses all precision once x >> 1; this stays exact.
inline double hyp1f1_gamma_route(double a, double x) {
    double gamma_a = std::exp(ln_gamma(a + 1.0)) / a; // Gamma(a), negative
    double upper = upper_gamma_cf_any(a, x);
    return a * std::pow(x, -a) * (gamma_a - upper);
}

} // namespace detail

/// Confluent hypergeometric 1F1(a; b; z).
///
/// Terminates exactly when a is a non-positive integer. For Re(z) < 0 the
/// Kummer transformation 1F1(a;b;z) = e^z 1F1(b-a;b;-z) is applied first so
/// the series is summed on the stable side.
inline Complex hyp1f1(double a, double b, Complex z, int max_terms = 2000) {
    if (detail::is_nonpositive_integer(b))
        throw std::domain_error("hyp1f1: b must not be a non-positive integer");
    if (detail::is_nonpositive_integer(a)) {
        // exact terminating polynomial of degree -a
        int n = static_cast<int>(std::llround(-a));
        detail::CompensatedSum sum;
        Complex term{1.0, 0.0};
        sum.add(term);
        for (int k = 0; k < n; ++k) {
            term *= (a + k) * z / ((b + k) * (k + 1.0));
            sum.add(term);
        }
        return sum.value();
    }
    if (z.real() < 0.0) {
        // far negative real axis of the a/(a+1) family: series cancellationic
        // is catastrophic, switch to the incomplete-gamma representation
        if (z.imag() == 0.0 && std::abs(b - (a + 1.0)) < 1e-13 && a > -1.0 &&
            a < 0.0 && z.real() < -100.0) {
            return Complex(detail::hyp1f1_gamma_route(a, -z.real()), 0.0);
        }
        Complex r =
            std::exp(z) * detail::hyp1f1_series(b - a, b, -z, max_terms);
        detail::require_finite(r, "hyp1f1");
        return r;
    }
    Complex r = detail::hyp1f1_series(a, b, z, max_terms);
    detail::require_finite(r, "hyp1f1");
    return r;
}

namespace detail {

// Raw Gauss series sum_n (a)_n (b)_n / (c)_n z^n / n!, |z| < 1.
inline Complex hyp2f1_series(double a, double b, double c, Complex z,
                             int max_terms) {
    CompensatedSum sum;
    ConvergenceDetector conv;
    Complex term{1.0, 0.0};
    sum.add(term);
    for (int n = 0; n < max_terms; ++n) {
        term *= (a + n) * (b + n) * z / ((c + n) * (n + 1.0));
        sum.add(term);
        if (conv.done(std::abs(term), std::abs(sum.value())))
            return sum.value();
        if (a + n == 0.0 || b + n == 0.0) return sum.value();
    }
    throw ConvergenceError("hyp2f1: series did not converge within budget");
}

} // namespace detail

/// Gauss hypergeometric 2F1(a, b; c; z), z off the cut [1, inf).
///
/// Direct series for |z| < 0.9; otherwise a Pfaff transformation maps onto
/// w = z/(z-1). The Pfaff side is chosen so the transformed series carries
/// the smaller of (a, b): its terms then decay like n^{min(a,b)-max(a,b)-1},
/// absolutely summable even as |w| -> 1 (which is where the imaginary-axis
/// arguments of the interference transforms land).
inline Complex hyp2f1(double a, double b, double c, Complex z,
                      int max_terms = 500) {
    if (detail::is_nonpositive_integer(c))
        throw std::domain_error("hyp2f1: c must not be a non-positive integer");
    if (z.imag() == 0.0 && z.real() >= 1.0)
        throw std::domain_error("hyp2f1: real z >= 1 is on the branch cut");
    if (z == Complex(0.0, 0.0)) return {1.0, 0.0};
    if (std::abs(z) < 0.9) {
        Complex r = detail::hyp2f1_series(a, b, c, z, max_terms);
        detail::require_finite(r, "hyp2f1");
        return r;
    }
    Complex w = z / (z - 1.0);
    // |w| < 1 whenever Re(z) < 1/2, in particular on the whole imaginary
    // axis; the chosen-side series terms decay like n^{-|a-b|-1}, absolutely
    // summable there. Real z in (0.9, 1) maps outside the disk: unsupported.
    if (std::abs(w) >= 1.0 - 1e-14)
        throw ConvergenceError(
            "hyp2f1: argument maps outside the Pfaff disk; no continuation "
            "path for this region");
    // Near-unit |w| tails decay polynomially; give the series room.
    const int pfaff_budget = 400000;
    Complex r;
    if (a <= b)
        r = std::pow(1.0 - z, -a) *
            detail::hyp2f1_series(a, c - b, c, w, pfaff_budget);
    else
        r = std::pow(1.0 - z, -b) *
            detail::hyp2f1_series(c - a, b, c, w, pfaff_budget);
    detail::require_finite(r, "hyp2f1");
    return r;
}

/// 1F2(a; b1, b2; z) by direct series (real argument).
inline double hyp1f2(double a, double b1, double b2, double z,
                     int max_terms = 2000) {
    if (detail::is_nonpositive_integer(b1) ||
        detail::is_nonpositive_integer(b2))
        throw std::domain_error(
            "hyp1f2: lower parameters must not be non-positive integers");
    detail::CompensatedSum sum;
    detail::ConvergenceDetector conv;
    Complex term{1.0, 0.0};
    sum.add(term);
    for (int n = 0; n < max_terms; ++n) {
        term *= (a + n) * z / ((b1 + n) * (b2 + n) * (n + 1.0));
        sum.add(term);
        if (conv.done(std::abs(term), std::abs(sum.value())))
            return sum.value().real();
        if (a + n == 0.0) return sum.value().real();
    }
    throw ConvergenceError("hyp1f2: series did not converge within budget");
}

} // namespace gfscma::specfun
