#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "apcgl/nonlinear_flow.hpp"
#include "test_support.hpp"

using namespace apcgl;
using namespace apcgl::testing;

TEST_CASE("pointwise flow basics") {
    SUBCASE("zero is a fixed point") {
        for (double t : {0.0, 0.5, 3.0}) {
            const ScalarFlowResult r = pointwise_flow({0.0, 0.0}, {-1.0, -1.0}, 3, t);
            CHECK(r.status == FlowStatus::completed);
            CHECK(r.value == Complex{0.0, 0.0});
        }
    }

    SUBCASE("real separable solution 1/sqrt(1+2t)") {
        for (double t : {0.1, 0.6, 1.5}) {
            const ScalarFlowResult r = pointwise_flow({1.0, 0.0}, {-1.0, 0.0}, 3, t);
            CHECK(r.status == FlowStatus::completed);
            CHECK(std::abs(r.value - Complex{1.0 / std::sqrt(1.0 + 2.0 * t), 0.0}) <
                  1e-14);
        }
        CHECK(std::abs(pointwise_flow({1.0, 0.0}, {-1.0, 0.0}, 3, 1.5).value -
                       Complex{0.5, 0.0}) < 1e-15);
    }

    SUBCASE("kappa = 0 leaves the state alone") {
        const ScalarFlowResult r = pointwise_flow({0.3, -0.2}, {0.0, 0.0}, 4, 2.0);
        CHECK(r.value == Complex{0.3, -0.2});
    }

    SUBCASE("rejects bad arguments") {
        CHECK_THROWS_AS(pointwise_flow({1.0, 0.0}, {-1.0, 0.0}, 1, 0.5),
                        std::invalid_argument);
        CHECK_THROWS_AS(pointwise_flow({1.0, 0.0}, {-1.0, 0.0}, 3, -0.5),
                        std::invalid_argument);
    }
}

TEST_CASE("pointwise flow against a scalar RK4 oracle") {
    // z' = -z^3 from i stays a closed-form case until t -> 0.5.
    const Complex kappa{-1.0, 0.0};
    const auto field = [&](Complex z) { return kappa * z * z * z; };
    for (double t : {0.1, 0.25, 0.4}) {
        const Complex oracle = rk4_scalar(field, {0.0, 1.0}, t, 20000);
        const ScalarFlowResult closed = pointwise_flow({0.0, 1.0}, kappa, 3, t);
        CHECK(closed.status == FlowStatus::completed);
        CHECK(std::abs(closed.value - oracle) <= 1e-8);
        // i/sqrt(1-2t) in closed form.
        CHECK(std::abs(closed.value - Complex{0.0, 1.0 / std::sqrt(1.0 - 2.0 * t)}) <
              1e-12);
    }

    // Mixed complex kappa: oracle only.
    const Complex kappa2{-1.0, -1.0};
    const auto field2 = [&](Complex z) { return kappa2 * z * z * z; };
    const Complex oracle2 = rk4_scalar(field2, {0.4, 0.3}, 0.7, 20000);
    const ScalarFlowResult closed2 = pointwise_flow({0.4, 0.3}, kappa2, 3, 0.7);
    CHECK(std::abs(closed2.value - oracle2) <= 1e-9);

    // Fifth degree.
    const auto field5 = [&](Complex z) { return kappa2 * z * z * z * z * z; };
    const Complex oracle5 = rk4_scalar(field5, {0.5, -0.2}, 0.6, 20000);
    const ScalarFlowResult closed5 = pointwise_flow({0.5, -0.2}, kappa2, 5, 0.6);
    CHECK(std::abs(closed5.value - oracle5) <= 1e-9);
}

TEST_CASE("pointwise blowup detection") {
    // z' = -z^3 from i: radicand 1 - 2t hits zero at t* = 0.5.
    const ScalarFlowResult r = pointwise_flow({0.0, 1.0}, {-1.0, 0.0}, 3, 1.0);
    CHECK(r.status == FlowStatus::blowup);
    REQUIRE(r.blowup_time.has_value());
    CHECK(*r.blowup_time >= 0.49);
    CHECK(*r.blowup_time <= 0.51);

    // Asking for exactly the horizon also reports blowup.
    const ScalarFlowResult horizon = pointwise_flow({0.0, 1.0}, {-1.0, 0.0}, 3, 0.5);
    CHECK(horizon.status == FlowStatus::blowup);
}

TEST_CASE("coefficient flow keeps modes below n fixed") {
    std::mt19937_64 rng(51);
    const ApSeries u = random_unit_series(rng, 1.0, 12);
    for (int n : {2, 3, 4}) {
        const FlowResult r = coefficient_flow(u, {-1.0, -0.5}, n, 0.3, 16);
        CHECK(r.status == FlowStatus::completed);
        for (std::size_t j = 1; j < static_cast<std::size_t>(n); ++j) {
            CHECK(r.state.coeff(j) == u.coeff(j));
        }
    }
}

TEST_CASE("triangular cascade from a single mode") {
    // a1 constant, so da3/dt = kappa a1^3 integrates to kappa t, and
    // da5/dt = 3 kappa^2 a1^5 t gives 1.5 kappa^2 t^2; RK4 reproduces both.
    const Complex kappa{-0.7, 0.4};
    ApSeries u(1.0, 6);
    u.set_coeff(1, {1.0, 0.0});
    const double t = 0.35;
    const FlowResult r = coefficient_flow(u, kappa, 3, t, 32);
    CHECK(std::abs(r.state.coeff(3) - kappa * t) <= 1e-14 * std::abs(kappa * t));
    const Complex a5 = 1.5 * kappa * kappa * t * t;
    CHECK(std::abs(r.state.coeff(5) - a5) <= 1e-13 * std::abs(a5));
    CHECK(r.state.coeff(2) == Complex{0.0, 0.0});
    CHECK(r.state.coeff(4) == Complex{0.0, 0.0});
}

TEST_CASE("coefficient flow truncation nestedness is bit-exact") {
    std::mt19937_64 rng(53);
    const std::size_t m = 16;
    ApSeries u(1.0, m);
    ApSeries u_wide(1.0, m + 8);
    std::uniform_real_distribution<double> mag(0.0, 0.5);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (std::size_t j = 1; j <= m; ++j) {
        const Complex c = std::polar(mag(rng), phase(rng));
        u.set_coeff(j, c);
        u_wide.set_coeff(j, c);
    }
    const FlowResult narrow = coefficient_flow(u, {-1.0, -1.0}, 3, 0.2, 16);
    const FlowResult wide = coefficient_flow(u_wide, {-1.0, -1.0}, 3, 0.2, 16);
    for (std::size_t j = 1; j <= m; ++j) {
        CHECK(narrow.state.coeff(j) == wide.state.coeff(j));
    }
}

TEST_CASE("coefficient flow matches the pointwise closed form on the grid") {
    std::mt19937_64 rng(59);
    const ApSeries u = random_decaying_series(rng, 1.0, 16, 0.25, 0.25);
    const Complex kappa{-1.0, -1.0};
    const double t = 0.05;
    const FlowResult flowed = coefficient_flow(u, kappa, 3, t, 64);
    const double period = 2.0 * std::numbers::pi / u.lambda();
    double sup = 0.0;
    for (int k = 0; k < 64; ++k) {
        const double x = period * k / 64.0;
        const ScalarFlowResult pw = pointwise_flow(evaluate(u, x), kappa, 3, t);
        REQUIRE(pw.status == FlowStatus::completed);
        sup = std::max(sup, std::abs(evaluate(flowed.state, x) - pw.value));
    }
    CHECK(sup <= 1e-8);
}

TEST_CASE("RK4 self-convergence factor") {
    std::mt19937_64 rng(61);
    const ApSeries u = random_decaying_series(rng, 1.0, 16, 0.5, 0.5);
    const Complex kappa{-1.0, -1.0};
    const double t = 0.4;
    const ApSeries y1 = coefficient_flow(u, kappa, 3, t, 4).state;
    const ApSeries y2 = coefficient_flow(u, kappa, 3, t, 8).state;
    const ApSeries y4 = coefficient_flow(u, kappa, 3, t, 16).state;
    const double d1 = l1_distance(y1, y2);
    const double d2 = l1_distance(y2, y4);
    REQUIRE(d2 > 1e-14);
    const double factor = d1 / d2;
    CHECK(factor >= 12.0);
    CHECK(factor <= 20.0);
}

TEST_CASE("half-interval flow equals the rescaled full flow") {
    std::mt19937_64 rng(67);
    const ApSeries u = random_decaying_series(rng, 1.0, 12, 0.4, 0.5);
    const Complex kappa{-0.8, -1.2};
    const double h = 0.2;
    const FlowResult half = half_interval_flow(u, kappa, 3, h, 16);
    const FlowResult full = coefficient_flow(u, kappa, 3, h, 16);
    REQUIRE(half.status == FlowStatus::completed);
    for (std::size_t j = 1; j <= u.modes(); ++j) {
        CHECK(std::abs(half.state.coeff(j) - full.state.coeff(j)) <= 1e-13);
    }

    SUBCASE("h = 0 is the identity") {
        const FlowResult still = half_interval_flow(u, kappa, 3, 0.0);
        CHECK(still.state == u);
    }
}

TEST_CASE("blowup detection in the coefficient flow") {
    SUBCASE("norm threshold crossing") {
        ApSeries u(1.0, 24);
        u.set_coeff(1, {120.0, 0.0});
        const FlowResult r = coefficient_flow(u, {1.0, 0.0}, 3, 1.0, 64);
        CHECK(r.status == FlowStatus::blowup);
        REQUIRE(r.blowup_time.has_value());
        CHECK(*r.blowup_time > 0.0);
        CHECK(*r.blowup_time <= 1.0);
    }

    SUBCASE("overflow to non-finite keeps the last finite state") {
        ApSeries u(1.0, 8);
        u.set_coeff(1, {1e200, 0.0});
        const FlowResult r = coefficient_flow(u, {1.0, 0.0}, 3, 1.0, 8);
        CHECK(r.status == FlowStatus::blowup);
        REQUIRE(r.blowup_time.has_value());
        for (std::size_t j = 1; j <= 8; ++j) {
            CHECK(std::isfinite(r.state.coeff(j).real()));
            CHECK(std::isfinite(r.state.coeff(j).imag()));
        }
    }

    SUBCASE("blowup propagates identically through the half-interval form") {
        ApSeries u(1.0, 24);
        u.set_coeff(1, {120.0, 0.0});
        const FlowResult full = coefficient_flow(u, {1.0, 0.0}, 3, 1.0, 64);
        const FlowResult half = half_interval_flow(u, {1.0, 0.0}, 3, 1.0, 64);
        CHECK(full.status == FlowStatus::blowup);
        CHECK(half.status == FlowStatus::blowup);
        CHECK(*full.blowup_time == doctest::Approx(*half.blowup_time).epsilon(1e-12));
    }
}

TEST_CASE("default substep rule") {
    CHECK(default_substeps(1e-6, 0.1, 3, 1.0) == 8);
    CHECK(default_substeps(1.0, 2.0, 3, 1.0) == 256);
    CHECK(default_substeps(1.0, 1e6, 3, 10.0) == 4096);
}
