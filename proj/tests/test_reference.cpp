#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>
#include <sstream>

#include "apcgl/dft.hpp"
#include "apcgl/linear_propagator.hpp"
#include "apcgl/reference.hpp"
#include "test_support.hpp"

using namespace apcgl;
using namespace apcgl::testing;

namespace {

const CglParams kCubic{1.0, 1.0, 0.1, 1.0, 1.0, 3, {-1.0, -1.0}};

ApSeries standard_initial(std::size_t m) {
    ApSeries u0(1.0, m);
    u0.set_coeff(1, {0.5, 0.0});
    u0.set_coeff(2, {0.0, 0.25});
    return u0;
}

} // namespace

TEST_CASE("radix-2 FFT matches a naive DFT") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Complex> samples(16);
    for (Complex& s : samples) {
        s = {dist(rng), dist(rng)};
    }
    const std::vector<Complex> fast = dft_forward(samples);
    for (std::size_t k = 0; k < samples.size(); ++k) {
        Complex naive{0.0, 0.0};
        for (std::size_t m = 0; m < samples.size(); ++m) {
            naive += samples[m] *
                     std::polar(1.0, -2.0 * std::numbers::pi *
                                         static_cast<double>(k * m) /
                                         static_cast<double>(samples.size()));
        }
        naive /= static_cast<double>(samples.size());
        CHECK(std::abs(fast[k] - naive) < 1e-13);
    }

    const std::vector<Complex> back = dft_inverse(fast);
    for (std::size_t m = 0; m < samples.size(); ++m) {
        CHECK(std::abs(back[m] - samples[m]) < 1e-13);
    }

    std::vector<Complex> bad(12);
    CHECK_THROWS_AS(fft_radix2(bad, -1), std::invalid_argument);
}

TEST_CASE("sampling a series") {
    SUBCASE("pure mode") {
        ApSeries u(1.0, 1);
        u.set_coeff(1, {1.0, 0.0});
        const GridField field = sample(u, 8);
        for (std::size_t k = 0; k < 8; ++k) {
            const Complex expected =
                std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / 8.0);
            CHECK(std::abs(field.values()[k] - expected) < 1e-15);
        }
    }

    SUBCASE("zero series gives a zero field") {
        ApSeries u(2.0, 3);
        const GridField field = sample(u, 16);
        for (const Complex& v : field.values()) {
            CHECK(v == Complex{0.0, 0.0});
        }
    }

    SUBCASE("grid too small is rejected") {
        ApSeries u(1.0, 8);
        CHECK_THROWS_AS(sample(u, 16), std::invalid_argument);
        CHECK_THROWS_AS(sample(u, 15), std::invalid_argument);
    }
}

TEST_CASE("extract_series inverts sample") {
    std::mt19937_64 rng(103);
    const ApSeries u = random_unit_series(rng, 0.9, 12);
    const ApSeries back = extract_series(sample(u, 64), 12);
    CHECK(l1_distance(u, back) < 1e-12);
}

TEST_CASE("pseudospectral with kappa = 0 reproduces the semigroup") {
    CglParams params = kCubic;
    params.kappa = {0.0, 0.0};
    const ApSeries u0 = standard_initial(16);
    const ApSeries direct = linear_step(u0, params, 0.3);
    for (Scheme scheme : {Scheme::exponential_euler, Scheme::etdrk4}) {
        PseudospectralOptions opts;
        opts.scheme = scheme;
        const GridField field =
            pseudospectral_solve(u0, params, 0.3, 128, 0.3 / 1024, opts);
        const ApSeries spectral = extract_series(field, 16);
        for (std::size_t j = 1; j <= 16; ++j) {
            CHECK(std::abs(spectral.coeff(j) - direct.coeff(j)) <= 1e-10);
        }
    }
}

TEST_CASE("pseudospectral zero data stays zero") {
    const ApSeries u0(1.0, 8);
    const GridField field = pseudospectral_solve(u0, kCubic, 0.5, 64, 1e-3);
    for (const Complex& v : field.values()) {
        CHECK(std::abs(v) == 0.0);
    }
}

TEST_CASE("pseudospectral self-convergence under dt halving") {
    const ApSeries u0 = standard_initial(32);
    PseudospectralOptions opts;
    opts.scheme = Scheme::etdrk4;
    const double T = 0.5;
    const GridField coarse =
        pseudospectral_solve(u0, kCubic, T, 256, T / 4096, opts);
    const GridField fine =
        pseudospectral_solve(u0, kCubic, T, 256, T / 8192, opts);
    const double drift =
        l1_distance(extract_series(coarse, 32), extract_series(fine, 32));
    CHECK(drift <= 1e-9);
}

TEST_CASE("dealiasing soundness under grid doubling") {
    const ApSeries u0 = standard_initial(32);
    PseudospectralOptions opts;
    opts.scheme = Scheme::etdrk4;
    const double T = 0.25;
    const GridField n256 = pseudospectral_solve(u0, kCubic, T, 256, 1e-3, opts);
    const GridField n512 = pseudospectral_solve(u0, kCubic, T, 512, 1e-3, opts);
    CHECK(l1_distance(extract_series(n256, 32), extract_series(n512, 32)) <= 1e-9);
}

TEST_CASE("spectral leakage") {
    SUBCASE("band-limited fields do not leak") {
        std::mt19937_64 rng(107);
        const ApSeries u = random_unit_series(rng, 1.1, 10);
        CHECK(spectral_leakage(sample(u, 64), 10) <= 1e-14);
    }

    SUBCASE("an injected mean shows up as the constructed ratio") {
        ApSeries u(1.0, 2);
        u.set_coeff(1, {0.6, 0.0});
        u.set_coeff(2, {0.0, 0.4});
        GridField field = sample(u, 32);
        for (Complex& v : field.values()) {
            v += 0.1;
        }
        CHECK(spectral_leakage(field, 2) ==
              doctest::Approx(0.1 / 1.1).epsilon(1e-12));
    }

    SUBCASE("zero field has zero leakage") {
        const GridField field(1.0, std::vector<Complex>(16, Complex{0.0, 0.0}));
        CHECK(spectral_leakage(field, 4) == 0.0);
    }

    SUBCASE("pseudospectral evolution stays on the lattice") {
        const ApSeries u0 = standard_initial(32);
        PseudospectralOptions opts;
        opts.scheme = Scheme::etdrk4;
        double worst = 0.0;
        opts.observe_every = 16;
        opts.observer = [&](double, const std::vector<Complex>& spectrum) {
            worst = std::max(worst, leakage_from_spectrum(spectrum, 32));
        };
        pseudospectral_solve(u0, kCubic, 0.1, 256, 1e-3, opts);
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("picard iteration") {
    SUBCASE("zero data is the fixed point") {
        const ApSeries u0(1.0, 8);
        const ApSeries result = picard_iterate(u0, kCubic, 0.2, 5, 16);
        CHECK(l1_norm(result) == 0.0);
    }

    SUBCASE("kappa = 0 collapses to the semigroup after one iteration") {
        CglParams params = kCubic;
        params.kappa = {0.0, 0.0};
        const ApSeries u0 = standard_initial(12);
        const ApSeries result = picard_iterate(u0, params, 0.3, 1, 16);
        CHECK(result == linear_step(u0, params, 0.3));
    }

    SUBCASE("agrees with the pseudospectral oracle at small T") {
        const ApSeries u0 = standard_initial(32);
        const double T = 0.05;
        const ApSeries picard = picard_iterate(u0, kCubic, T, 8, 32);
        PseudospectralOptions opts;
        opts.scheme = Scheme::etdrk4;
        const GridField field =
            pseudospectral_solve(u0, kCubic, T, 256, T / 4096, opts);
        CHECK(l1_distance(picard, extract_series(field, 32)) <= 1e-6);
    }

    SUBCASE("non-contraction is reported") {
        ApSeries u0(1.0, 8);
        u0.set_coeff(1, {40.0, 0.0});
        CHECK_THROWS_AS(picard_iterate(u0, kCubic, 2.0, 6, 16),
                        NonContractionError);
    }
}

TEST_CASE("reference solver signals non-finite states") {
    // A gain-dominated focusing run on a coarse dt overflows quickly.
    ApSeries u0(1.0, 8);
    u0.set_coeff(1, {50.0, 0.0});
    CglParams params{0.05, 0.0, 1.0, 1.0, 0.0, 3, {1.0, 0.0}};
    CHECK_THROWS_AS(pseudospectral_solve(u0, params, 5.0, 64, 0.05),
                    ReferenceBlowupError);
}

TEST_CASE("grid CSV schema") {
    ApSeries u(1.0, 1);
    u.set_coeff(1, {1.0, 0.0});
    const GridField field = sample(u, 4);
    std::ostringstream out;
    write_grid_csv(field, out);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "k,x_k,re_u,im_u");
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
    }
    CHECK(rows == 4);
}
