#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "rabi/numint.hpp"
#include "rabi/quarter.hpp"

using namespace rabi;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {
// Seeds for nu = 1, f = 1, g = 1/2, computed once by symbolic expansion of the
// tau-series and substitution tau = 2 arcsin(sqrt u).
const std::vector<double> xi_x_ref{1, -0.5, -1.9583333333333333, 0.5486111111111112,
                                   0.5417906746031746, -0.09700865299823633, -0.0627481306951793,
                                   0.0008670290958857427};
const std::vector<double> eta_x_ref{0, 3.0, -1.5833333333333333, -1.7361111111111112,
                                    0.28100198412698413, 0.19664627425044093, -0.07138746509406231,
                                    -0.045814253927473174};
const std::vector<double> xi_y_ref{0, -1, 1.0833333333333333, 0.5305555555555556,
                                   -0.3158234126984127, -0.08188106261022927, 0.034390152350221796,
                                   0.007046129002354201};
const std::vector<double> eta_y_ref{1, -2, -1.1666666666666667, 0.9944444444444445,
                                    0.31081349206349207, -0.13836089065255733, -0.023885941090802203,
                                    0.015224460054569181};
}  // namespace

TEST_CASE("singular points of the x- and y-equations") {
    for (const DimensionlessParams d : {DimensionlessParams(1, 1, 0.5), DimensionlessParams(0.3, 2, 1.7)}) {
        const auto x = ode_coeffs_X<double>(d);
        CHECK(x.p[3](0.0) == 0);
        CHECK(x.p[3](1.0) == Approx(0).scale(1));
        CHECK(x.p[3](0.5) != 0);
        const auto y = ode_coeffs_Y<double>(d);
        CHECK(y.p[3](0.5) == Approx(0).scale(1));
        CHECK(y.p[3](0.0) == 0);
        CHECK(y.p[3](1.0) == Approx(0).scale(1));
    }
    CHECK_THROWS_AS(ode_coeffs_Y<double>(DimensionlessParams(0, 0, 1)), DegenerateError);
}

TEST_CASE("u = sin^2(tau/2) and its inverse series") {
    CHECK(std::pow(std::sin(pi / 6), 2) == Approx(0.25));
    const auto v = v_of_u_closed_form<double>(60);
    // v(1/4) = (pi/3)^2
    CHECK(series_evaluate(v, 0.25).value == Approx(pi * pi / 9).epsilon(1e-14));
    CHECK(v.c[0] == 0);
    CHECK(v.c[1] == Approx(4));
}

TEST_CASE("seeds from the tau-series") {
    const DimensionlessParams d(1, 1, 0.5);
    const auto xx = xi_seeds<double>(d, 1, 0, 8);
    const auto ex = eta_seeds<double>(d, 1, 0, 8);
    const auto xy = xi_seeds<double>(d, 0, 1, 8);
    const auto ey = eta_seeds<double>(d, 0, 1, 8);
    REQUIRE(xx.size() == 8);
    for (int k = 0; k < 8; ++k) {
        CHECK(xx[k] == Approx(xi_x_ref[k]).epsilon(1e-12).scale(1));
        CHECK(ex[k] == Approx(eta_x_ref[k]).epsilon(1e-12).scale(1));
        CHECK(xy[k] == Approx(xi_y_ref[k]).epsilon(1e-12).scale(1));
        CHECK(ey[k] == Approx(eta_y_ref[k]).epsilon(1e-12).scale(1));
    }
}

TEST_CASE("tau-Taylor expansion reproduces the integrator near tau = 0") {
    const DimensionlessParams d(1, 1, 0.5);
    const auto t = tau_taylor<double>(d, {0.6, 0.8, 0}, 30);
    const double tau = 0.4;
    double x = 0, y = 0, z = 0;
    for (int k = 30; k >= 0; --k) {
        x = x * tau + t.x[k];
        y = y * tau + t.y[k];
        z = z * tau + t.z[k];
    }
    const auto tr = integrate_classical(d, {0.6, 0.8, 0}, tau, 1e-12, 2);
    CHECK(max_abs_diff(SpinVector{x, y, z}, tr.spin.back()) < 1e-10);
    CHECK_THROWS_AS(tau_taylor<double>(d, {0, 0, 1}, 5), ValidationError);
}

TEST_CASE("quarter solution against the integrator") {
    for (const DimensionlessParams d :
         {DimensionlessParams(1, 1, 0.5), DimensionlessParams(0.5, 0.5, 0.1), DimensionlessParams(2, 3, 1)}) {
        const QuarterSolution qs = solve_quarter(d, 0.6, 0.8);
        CHECK(qs.tail < 1e-12);
        CHECK(qs.seed_check < 1e-8);
        const auto tr = integrate_classical(d, {0.6, 0.8, 0}, pi / 2, 1e-12, 7);
        for (std::size_t i = 0; i < tr.tau.size(); ++i) {
            CHECK(evaluate_component(qs, Component::x, tr.tau[i]) == Approx(tr.spin[i].x).epsilon(1e-9).scale(1));
            CHECK(evaluate_component(qs, Component::y, tr.tau[i]) == Approx(tr.spin[i].y).epsilon(1e-9).scale(1));
        }
        CHECK_THROWS_AS(evaluate_component(qs, Component::x, 2.0), ValidationError);
    }
}

TEST_CASE("raising the truncation order keeps the leading coefficients") {
    const DimensionlessParams d(1, 1, 0.5);
    const QuarterSolution a = solve_quarter(d, 1, 0, 10);
    const QuarterSolution b = solve_quarter(d, 1, 0, 40);
    REQUIRE(a.order == 10);
    for (int k = 0; k <= 10; ++k) {
        CHECK(a.xi_x.c[k] == Approx(b.xi_x.c[k]).epsilon(1e-13).scale(1));
        CHECK(a.eta_x.c[k] == Approx(b.eta_x.c[k]).epsilon(1e-13).scale(1));
        CHECK(a.xi_y.c[k] == Approx(b.xi_y.c[k]).epsilon(1e-13).scale(1));
        CHECK(a.eta_y.c[k] == Approx(b.eta_y.c[k]).epsilon(1e-13).scale(1));
    }
    CHECK_THROWS_AS(solve_quarter(d, 1, 0, 100000), ValidationError);
}

TEST_CASE("free precession: closed-form quarter series") {
    const DimensionlessParams d(0.8, 0, 0);
    const QuarterSolution qs = solve_quarter(d, 0, 1);
    for (double tau : {0.0, 0.5, 1.2, pi / 2})
        CHECK(evaluate_component(qs, Component::y, tau) == Approx(std::cos(0.8 * tau)).epsilon(1e-12));
}
