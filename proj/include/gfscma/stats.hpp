#pragma once

// Goodness-of-fit helpers for the simulator validation suite.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gfscma/specfun.hpp"

namespace gfscma::stats {

/// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - i / n));
        d = std::max(d, std::abs((i + 1) / n - f));
    }
    return d;
}

/// Asymptotic Kolmogorov p-value Q(sqrt(n) D).
inline double ks_pvalue(size_t n, double d) {
    double lambda = (std::sqrt(static_cast<double>(n)) + 0.12 +
                     0.11 / std::sqrt(static_cast<double>(n))) *
                    d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * (k % 2 ? 1.0 : -1.0) *
                      std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

/// Upper tail of the chi-square distribution with `dof` degrees of freedom.
inline double chi_square_pvalue(double stat, int dof) {
    return 1.0 - specfun::gamma_p(dof / 2.0, stat / 2.0);
}

/// Pearson chi-square of observed counts against expected counts. Bins with
/// expected < 5 should be pooled by the caller.
inline double chi_square_stat(const std::vector<double>& observed,
                              const std::vector<double>& expected) {
    double s = 0.0;
    for (size_t i = 0; i < observed.size(); ++i) {
        double diff = observed[i] - expected[i];
        s += diff * diff / expected[i];
    }
    return s;
}

} // namespace gfscma::stats
