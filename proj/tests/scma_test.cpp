#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gfscma/scma.hpp"

using namespace gfscma;
using scma::Codebook;
using Complex = std::complex<double>;

namespace {

// brute-force spectrum, kept deliberately separate from the library path
double brute_min_dist_sq(const Codebook& cb) {
    double best = 1e300;
    for (int i = 0; i < cb.M; ++i)
        for (int j = 0; j < cb.M; ++j) {
            if (i == j) continue;
            double d = 0;
            for (int k = 0; k < cb.K; ++k)
                d += std::norm(cb.codewords[i][k] - cb.codewords[j][k]);
            best = std::min(best, d);
        }
    return best;
}

} // namespace

TEST(Indicator, FourBySix) {
    auto m = scma::build_indicator(4, 2);
    EXPECT_EQ(m.L, 6);
    EXPECT_EQ(m.K, 4);
    for (int l = 0; l < m.L; ++l) {
        int w = 0;
        for (int k = 0; k < m.K; ++k) w += m.at(k, l);
        EXPECT_EQ(w, 2);
    }
}

TEST(Indicator, DenseDegenerate) {
    auto m = scma::build_indicator(4, 4);
    EXPECT_EQ(m.L, 1);
    for (int k = 0; k < 4; ++k) EXPECT_EQ(m.at(k, 0), 1);
}

TEST(Indicator, FiveChooseTwo) {
    EXPECT_EQ(scma::build_indicator(5, 2).L, 10);
}

TEST(Indicator, ColumnsDistinctAndExhaustive) {
    for (int K : {4, 5, 6}) {
        for (int ds = 2; ds <= K; ++ds) {
            auto m = scma::build_indicator(K, ds);
            EXPECT_EQ(m.L, scma::binomial(K, ds));
            std::set<std::vector<uint8_t>> cols;
            for (int l = 0; l < m.L; ++l) {
                std::vector<uint8_t> col;
                int w = 0;
                for (int k = 0; k < K; ++k) {
                    col.push_back(m.at(k, l));
                    w += m.at(k, l);
                }
                EXPECT_EQ(w, ds);
                cols.insert(col);
            }
            EXPECT_EQ(static_cast<int>(cols.size()), m.L);
        }
    }
}

TEST(Indicator, DomainErrors) {
    EXPECT_THROW(scma::build_indicator(4, 1), std::domain_error);
    EXPECT_THROW(scma::build_indicator(4, 5), std::domain_error);
    EXPECT_THROW(scma::build_indicator(17, 2), std::domain_error);
}

TEST(CodebookCount, Values) {
    EXPECT_EQ(scma::codebook_count(6, 4, 4), 6);
    EXPECT_EQ(scma::codebook_count(5, 5, 5), 5);
    EXPECT_EQ(scma::codebook_count(10, 6, 5), 12);
    EXPECT_THROW(scma::codebook_count(6, 3, 4), std::domain_error);
}

TEST(Spectrum, AntipodalPair) {
    Codebook cb;
    cb.M = 2;
    cb.K = 4;
    cb.d_s = 2;
    double a = 1.0 / std::sqrt(2.0);
    cb.codewords = {{{a, 0}, {a, 0}, {0, 0}, {0, 0}},
                    {{-a, 0}, {-a, 0}, {0, 0}, {0, 0}}};
    auto s = scma::distance_spectrum(cb);
    EXPECT_NEAR(s.delta_min_sq, 4.0, 1e-12);
    EXPECT_EQ(s.neighbor_count[0], 1);
    EXPECT_EQ(s.neighbor_count[1], 1);
}

TEST(Spectrum, SymmetricZeroDiagonal) {
    auto cb = scma::builtin_codebook("sparse8");
    auto s = scma::distance_spectrum(cb);
    for (int i = 0; i < cb.M; ++i) {
        EXPECT_EQ(s.pair_distances[i][i], 0.0);
        for (int j = 0; j < cb.M; ++j)
            EXPECT_EQ(s.pair_distances[i][j], s.pair_distances[j][i]);
    }
}

TEST(Spectrum, BuiltinGoldenValues) {
    // brute-force spectra of the shipped constructions
    auto s4 = scma::distance_spectrum(scma::builtin_codebook("sparse4"));
    EXPECT_NEAR(s4.delta_min_sq, 2.0, 1e-12);
    for (int n : s4.neighbor_count) EXPECT_EQ(n, 2);

    auto d4 = scma::distance_spectrum(scma::builtin_codebook("dense4"));
    EXPECT_NEAR(d4.delta_min_sq, 8.0 / 3.0, 1e-12);
    for (int n : d4.neighbor_count) EXPECT_EQ(n, 3);

    auto s8 = scma::distance_spectrum(scma::builtin_codebook("sparse8"));
    EXPECT_NEAR(s8.delta_min_sq, 2.0 - std::sqrt(2.0), 1e-12);

    auto d8 = scma::distance_spectrum(scma::builtin_codebook("dense8"));
    EXPECT_NEAR(d8.delta_min_sq, 2.0, 1e-12);
    for (int n : d8.neighbor_count) EXPECT_EQ(n, 6);
}

TEST(Spectrum, DenseBeatsSparseMinDistance) {
    // the shipped dense constructions must dominate the sparse ones; verified
    // against the independent brute-force enumeration
    auto s4 = scma::builtin_codebook("sparse4");
    auto d4 = scma::builtin_codebook("dense4");
    EXPECT_GT(brute_min_dist_sq(d4), brute_min_dist_sq(s4));
    EXPECT_NEAR(scma::distance_spectrum(d4).delta_min_sq,
                brute_min_dist_sq(d4), 1e-13);
    EXPECT_NEAR(scma::distance_spectrum(s4).delta_min_sq,
                brute_min_dist_sq(s4), 1e-13);
}

TEST(Builtins, InvariantsHold) {
    for (const char* kind : {"sparse4", "dense4", "sparse8", "dense8"}) {
        auto cb = scma::builtin_codebook(kind);
        for (const auto& cw : cb.codewords) {
            double pw = 0;
            for (auto& c : cw) pw += std::norm(c);
            EXPECT_NEAR(pw, 1.0, 1e-9) << kind;
        }
        EXPECT_EQ(static_cast<int>(cb.support.size()), cb.d_s) << kind;
    }
    EXPECT_EQ(scma::builtin_codebook("sparse4").d_s, 2);
    EXPECT_EQ(scma::builtin_codebook("dense4").d_s, 4);
    EXPECT_EQ(scma::builtin_codebook("sparse8").M, 8);
    EXPECT_THROW(scma::builtin_codebook("mystery"), std::domain_error);
}

TEST(Spectrum, GlobalRotationInvariance) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> uph(0.0, 2 * std::numbers::pi);
    for (const char* kind : {"sparse4", "dense4", "sparse8", "dense8"}) {
        auto cb = scma::builtin_codebook(kind);
        double before = scma::distance_spectrum(cb).delta_min_sq;
        for (int rep = 0; rep < 20; ++rep) {
            Complex phase = std::polar(1.0, uph(rng));
            Codebook rot = cb;
            for (auto& cw : rot.codewords)
                for (auto& c : cw) c *= phase;
            double after = scma::distance_spectrum(rot).delta_min_sq;
            EXPECT_NEAR(after, before, 1e-12) << kind;
        }
    }
}

TEST(Loader, RoundTripsWithSave) {
    auto cb = scma::builtin_codebook("sparse4");
    auto path = std::filesystem::temp_directory_path() / "cb_roundtrip.txt";
    scma::save_codebook(cb, path.string());
    auto back = scma::load_codebook(path.string());
    EXPECT_EQ(back.M, cb.M);
    EXPECT_EQ(back.K, cb.K);
    EXPECT_EQ(back.d_s, cb.d_s);
    for (int m = 0; m < cb.M; ++m)
        for (int k = 0; k < cb.K; ++k)
            EXPECT_LT(std::abs(back.codewords[m][k] - cb.codewords[m][k]),
                      1e-15);
    std::filesystem::remove(path);
}

TEST(Loader, UnitPowerViolationNamed) {
    std::istringstream in(
        "2 4 2\n"
        "0.6324555320336759+0j 0.6324555320336759+0j 0+0j 0+0j\n"
        "0.7071067811865476+0j -0.7071067811865476+0j 0+0j 0+0j\n");
    try {
        scma::parse_codebook(in);
        FAIL() << "expected invariant violation";
    } catch (const InvariantError& e) {
        EXPECT_EQ(e.check, "codebook.unit_power");
    }
}

TEST(Loader, JaggedRowsAreParseErrors) {
    std::istringstream in(
        "2 4 2\n"
        "0.7071067811865476+0j 0.7071067811865476+0j 0+0j 0+0j\n"
        "0.7071067811865476+0j -0.7071067811865476+0j 0+0j\n");
    try {
        scma::parse_codebook(in);
        FAIL() << "expected parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 3);
    }
}

TEST(Loader, MalformedTokenReportsPosition) {
    std::istringstream in(
        "1 2 2\n"
        "0.5+0j banana\n");
    EXPECT_THROW(scma::parse_codebook(in), ParseError);
    std::istringstream empty("");
    EXPECT_THROW(scma::parse_codebook(empty), ParseError);
    std::istringstream badhdr("4 x 2\n");
    EXPECT_THROW(scma::parse_codebook(badhdr), ParseError);
}

TEST(Loader, OffSupportEntriesRejected) {
    std::istringstream in(
        "2 4 3\n"
        "0.7071067811865476+0j 0.7071067811865476+0j 0+0j 0+0j\n"
        "0.7071067811865476+0j -0.7071067811865476+0j 0+0j 0+0j\n");
    try {
        scma::parse_codebook(in);
        FAIL() << "expected invariant violation";
    } catch (const InvariantError& e) {
        EXPECT_EQ(e.check, "codebook.support");
    }
}
