#pragma once

// SCMA codebook representation, factor-graph combinatorics and the distance
// spectrum consumed by the error-rate analysis. Codebooks are immutable
// after construction; the text format is documented in
// docs/codebook_format.md.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gfscma/errors.hpp"

namespace gfscma::scma {

using Complex = std::complex<double>;

struct IndicatorMatrix {
    int K = 0;
    int L = 0;
    int d_s = 0;
    std::vector<uint8_t> entries; // row-major K x L

    uint8_t at(int k, int l) const { return entries[k * L + l]; }
};

struct Codebook {
    int M = 0;
    int K = 0;
    int d_s = 0;
    std::vector<int> support;           // the d_s nonzero positions
    std::vector<std::vector<Complex>> codewords; // M rows of length K
};

struct DistanceSpectrum {
    double delta_min_sq = 0.0;
    std::vector<int> neighbor_count;      // per codeword
    std::vector<std::vector<double>> pair_distances; // M x M squared
};

inline long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Indicator matrix whose columns enumerate all C(K, d_s) supports in
/// lexicographic order.
inline IndicatorMatrix build_indicator(int K, int d_s) {
    if (d_s <= 1 || d_s > K)
        throw std::domain_error("build_indicator: requires 1 < d_s <= K");
    if (K > 16)
        throw std::domain_error("build_indicator: K must be <= 16");
    IndicatorMatrix m;
    m.K = K;
    m.d_s = d_s;
    m.L = static_cast<int>(binomial(K, d_s));
    m.entries.assign(static_cast<size_t>(K) * m.L, 0);
    std::vector<int> idx(d_s);
    for (int i = 0; i < d_s; ++i) idx[i] = i;
    int col = 0;
    while (true) {
        for (int i : idx) m.entries[static_cast<size_t>(i) * m.L + col] = 1;
        ++col;
        int i = d_s - 1;
        while (i >= 0 && idx[i] == K - d_s + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < d_s; ++j) idx[j] = idx[j - 1] + 1;
    }
    return m;
}

/// Number of distinguishable codebooks J = L T / K.
inline long codebook_count(long L, long T, long K) {
    if (K <= 0 || (L * T) % K != 0)
        throw std::domain_error("codebook_count: K must divide L*T");
    return L * T / K;
}

/// Exhaustive pairwise squared distances, minimum, and nearest-neighbor
/// counts (ties within 1e-9 relative of the minimum).
inline DistanceSpectrum distance_spectrum(const Codebook& cb) {
    DistanceSpectrum s;
    int M = cb.M;
    s.pair_distances.assign(M, std::vector<double>(M, 0.0));
    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < M; ++i) {
        for (int j = i + 1; j < M; ++j) {
            double d2 = 0.0;
            for (int k = 0; k < cb.K; ++k)
                d2 += std::norm(cb.codewords[i][k] - cb.codewords[j][k]);
            s.pair_distances[i][j] = s.pair_distances[j][i] = d2;
            dmin = std::min(dmin, d2);
        }
    }
    s.delta_min_sq = dmin;
    s.neighbor_count.assign(M, 0);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            if (j != i && s.pair_distances[i][j] <= dmin * (1.0 + 1e-9))
                ++s.neighbor_count[i];
    return s;
}

namespace detail {

inline void check_invariants(const Codebook& cb) {
    if (cb.M < 2)
        throw InvariantError("codebook.cardinality", "M must be >= 2");
    if (cb.d_s < 1 || cb.d_s > cb.K)
        throw InvariantError("codebook.d_s", "requires 1 <= d_s <= K");
    // support = union of nonzero positions, must have exactly d_s members
    std::vector<char> nz(cb.K, 0);
    for (const auto& cw : cb.codewords)
        for (int k = 0; k < cb.K; ++k)
            if (std::abs(cw[k]) > 1e-12) nz[k] = 1;
    int count = 0;
    for (char c : nz) count += c;
    if (count != cb.d_s)
        throw InvariantError("codebook.support",
                             "nonzero positions do not form a d_s-sized support");
    for (int m = 0; m < cb.M; ++m) {
        double power = 0.0;
        for (int k = 0; k < cb.K; ++k) {
            if (!nz[k] && std::abs(cb.codewords[m][k]) > 1e-12)
                throw InvariantError("codebook.support",
                                     "codeword " + std::to_string(m) +
                                         " is nonzero off the support");
            power += std::norm(cb.codewords[m][k]);
        }
        if (std::abs(power - 1.0) > 1e-9)
            throw InvariantError("codebook.unit_power",
                                 "codeword " + std::to_string(m) +
                                     " has power " + std::to_string(power));
    }
    for (int i = 0; i < cb.M; ++i)
        for (int j = i + 1; j < cb.M; ++j) {
            double d2 = 0.0;
            for (int k = 0; k < cb.K; ++k)
                d2 += std::norm(cb.codewords[i][k] - cb.codewords[j][k]);
            if (d2 < 1e-18)
                throw InvariantError("codebook.distinct",
                                     "codewords " + std::to_string(i) + " and " +
                                         std::to_string(j) + " coincide");
        }
}

inline Complex parse_complex_token(const std::string& tok, int line, int col) {
    // form: <float><+|-><float>j , e.g. 0.5-0.25j
    if (tok.empty() || tok.back() != 'j')
        throw ParseError("expected complex token ending in 'j'", line, col);
    std::string body = tok.substr(0, tok.size() - 1);
    // split at the sign that separates re and im (skip a leading sign and
    // signs inside exponents)
    size_t split = std::string::npos;
    for (size_t i = 1; i < body.size(); ++i) {
        char ch = body[i];
        if ((ch == '+' || ch == '-') &&
            body[i - 1] != 'e' && body[i - 1] != 'E')
            split = i; // keep the last candidate: im sign
    }
    if (split == std::string::npos)
        throw ParseError("complex token lacks an imaginary part", line, col);
    try {
        size_t used = 0;
        double re = std::stod(body.substr(0, split), &used);
        if (used != split)
            throw ParseError("malformed real part", line, col);
        double im = std::stod(body.substr(split), &used);
        if (used != body.size() - split)
            throw ParseError("malformed imaginary part", line, col);
        return {re, im};
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("malformed complex number '" + tok + "'", line, col);
    }
}

} // namespace detail

inline Codebook parse_codebook(std::istream& in) {
    Codebook cb;
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty codebook file", 1, 1);
    {
        std::istringstream hs(line);
        if (!(hs >> cb.M >> cb.K >> cb.d_s))
            throw ParseError("header must read 'M K d_s'", 1, 1);
        std::string extra;
        if (hs >> extra)
            throw ParseError("trailing tokens after header", 1, 1);
    }
    if (cb.M < 1 || cb.K < 1)
        throw ParseError("non-positive dimensions in header", 1, 1);
    for (int m = 0; m < cb.M; ++m) {
        if (!std::getline(in, line))
            throw ParseError("expected " + std::to_string(cb.M) +
                                 " codeword rows",
                             m + 2, 1);
        std::istringstream ls(line);
        std::vector<Complex> row;
        std::string tok;
        int col = 1;
        while (ls >> tok) {
            row.push_back(detail::parse_complex_token(tok, m + 2, col));
            ++col;
        }
        if (static_cast<int>(row.size()) != cb.K)
            throw ParseError("row has " + std::to_string(row.size()) +
                                 " entries, expected K = " +
                                 std::to_string(cb.K),
                             m + 2, 1);
        cb.codewords.push_back(std::move(row));
    }
    detail::check_invariants(cb);
    cb.support.clear();
    for (int k = 0; k < cb.K; ++k)
        for (const auto& cw : cb.codewords)
            if (std::abs(cw[k]) > 1e-12) {
                cb.support.push_back(k);
                break;
            }
    return cb;
}

/// Load a codebook from the plain text format; all invariants are verified.
inline Codebook load_codebook(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_codebook: cannot open " + path);
    return parse_codebook(in);
}

inline std::string format_codebook(const Codebook& cb) {
    std::ostringstream out;
    out << cb.M << " " << cb.K << " " << cb.d_s << "\n";
    char buf[64];
    for (const auto& cw : cb.codewords) {
        for (int k = 0; k < cb.K; ++k) {
            double im = cw[k].imag();
            std::snprintf(buf, sizeof buf, "%.17g%s%.17gj", cw[k].real(),
                          im < 0 ? "" : "+", im);
            out << (k ? " " : "") << buf;
        }
        out << "\n";
    }
    return out.str();
}

inline void save_codebook(const Codebook& cb, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_codebook: cannot open " + path);
    out << format_codebook(cb);
}

namespace detail {

inline Codebook finish(Codebook cb) {
    check_invariants(cb);
    cb.support.clear();
    for (int k = 0; k < cb.K; ++k)
        for (const auto& cw : cb.codewords)
            if (std::abs(cw[k]) > 1e-12) {
                cb.support.push_back(k);
                break;
            }
    return cb;
}

} // namespace detail

/// Built-in deterministic codebooks.
///
/// sparse4: M=4, K=4, d_s=2 on support {0,1}; QPSK repeated over the two
///   active tones, second tone rotated by pi/4.
/// dense4:  M=4, K=4, d_s=4; unit-power regular simplex (pairwise squared
///   distance 8/3), tone k rotated by k pi/4.
/// sparse8: M=8, K=4, d_s=2 on support {0,1}; 8-PSK repeated, second tone
///   rotated by pi/4.
/// dense8:  M=8, K=4, d_s=4; +/- the four unitary DFT columns scaled to unit
///   power (orthogonal biorthogonal set, pairwise squared distance 2).
inline Codebook builtin_codebook(const std::string& kind) {
    auto polar = [](double r, double th) {
        return Complex(r * std::cos(th), r * std::sin(th));
    };
    const double pi = std::numbers::pi;
    Codebook cb;
    if (kind == "sparse4" || kind == "sparse8") {
        int M = kind == "sparse4" ? 4 : 8;
        cb.M = M;
        cb.K = 4;
        cb.d_s = 2;
        double amp = 1.0 / std::sqrt(2.0);
        for (int m = 0; m < M; ++m) {
            double th = 2.0 * pi * m / M;
            std::vector<Complex> cw(4, Complex(0, 0));
            cw[0] = polar(amp, th);
            cw[1] = polar(amp, th + pi / 4.0);
            cb.codewords.push_back(std::move(cw));
        }
    } else if (kind == "dense4") {
        cb.M = 4;
        cb.K = 4;
        cb.d_s = 4;
        double s = std::sqrt(4.0 / 3.0);
        for (int m = 0; m < 4; ++m) {
            std::vector<Complex> cw(4);
            for (int k = 0; k < 4; ++k) {
                double v = s * ((k == m ? 1.0 : 0.0) - 0.25);
                cw[k] = polar(std::abs(v), k * pi / 4.0 + (v < 0 ? pi : 0.0));
            }
            cb.codewords.push_back(std::move(cw));
        }
    } else if (kind == "dense8") {
        cb.M = 8;
        cb.K = 4;
        cb.d_s = 4;
        for (int m = 0; m < 8; ++m) {
            int col = m % 4;
            double sign = m < 4 ? 1.0 : -1.0;
            std::vector<Complex> cw(4);
            for (int k = 0; k < 4; ++k)
                cw[k] = sign * polar(0.5, 2.0 * pi * col * k / 4.0);
            cb.codewords.push_back(std::move(cw));
        }
    } else {
        throw std::domain_error("builtin_codebook: unknown kind '" + kind +
                                "'");
    }
    return detail::finish(cb);
}

} // namespace gfscma::scma
