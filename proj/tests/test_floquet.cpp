#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rabi/floquet.hpp"
#include "rabi/numint.hpp"

using namespace rabi;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("u-series to Fourier cosine coefficients") {
    auto c = u_series_to_fourier(PowerSeries<double>({1.0}), 0);
    CHECK(c[0] == 1);
    // sin^2(t/2) = (1 - cos t)/2
    c = u_series_to_fourier(PowerSeries<double>({0.0, 1.0}), 1);
    CHECK(c[0] == Approx(0.5));
    CHECK(c[1] == Approx(-0.5));
    // sin^4(t/2) = 3/8 - cos(t)/2 + cos(2t)/8
    c = u_series_to_fourier(PowerSeries<double>({0.0, 0.0, 1.0}), 2);
    CHECK(c[0] == Approx(3.0 / 8));
    CHECK(c[1] == Approx(-0.5));
    CHECK(c[2] == Approx(1.0 / 8));
    CHECK_THROWS_AS(u_series_to_fourier(PowerSeries<double>({0.0, 1.0}), 3), ValidationError);
    // generic series: Fourier sum reproduces the series
    const PowerSeries<double> s({0.3, -1.2, 0.7, 0.25, -0.1, 0.05});
    c = u_series_to_fourier(s, 5);
    for (double t : {0.2, 1.0, 2.7}) {
        const double u = std::pow(std::sin(t / 2), 2);
        CHECK(cos_sum(c, t) == Approx(series_evaluate(s, u, true).value).epsilon(1e-14));
    }
}

TEST_CASE("z Fourier coefficients") {
    const DimensionlessParams d(1, 1, 0.5);
    const auto z = z_fourier({0, 0, 0}, {0, 0, 0}, d);
    CHECK(z.z0 == 0);
    for (double v : z.zsin) CHECK(v == 0);
    // z' = nu y - g cos(t) x with x = 1, y = 0: z = -g sin t
    const auto z1 = z_fourier({1, 0, 0}, {0, 0, 0}, d);
    CHECK(z1.z0 == 0);
    CHECK(z1.zsin[1] == Approx(-0.5));
    // y = 1: secular growth nu
    const auto z2 = z_fourier({0, 0}, {1, 0}, d);
    CHECK(z2.z0 == Approx(1));
}

TEST_CASE("quarter monodromy without drive is a rotation about x") {
    const double nu = 0.7;
    const Rotation3 q = quarter_monodromy(DimensionlessParams(nu, 0, 0));
    const double c = std::cos(nu * pi / 2), s = std::sin(nu * pi / 2);
    Rotation3 ref = Rotation3::identity();
    ref(1, 1) = c;
    ref(1, 2) = -s;
    ref(2, 1) = s;
    ref(2, 2) = c;
    CHECK(max_abs_diff(q, ref) < 1e-12);
}

TEST_CASE("series propagator matches the integrator and is orthogonal") {
    for (const DimensionlessParams d : {DimensionlessParams(1, 1, 0.5), DimensionlessParams(2, 0.5, 1.5)}) {
        const SeriesPropagator p = build_propagator(d);
        CHECK(orthogonality_defect(p.quarter) < tol_ortho);
        CHECK(orthogonality_defect(p.full) < tol_ortho);
        for (double tau : {0.3, 1.4, 2.9, 4.0, 6.0, 8.5, -1.1, -5.0})
            CHECK(max_abs_diff(p.at(tau), propagator_numeric(d, 0, tau, 1e-12)) < 1e-9);
        CHECK(max_abs_diff(p.half, monodromy_numeric(d, pi, 1e-12)) < 1e-9);
    }
}

TEST_CASE("parity of the series propagator") {
    const SeriesPropagator p = build_propagator(DimensionlessParams(1, 1, 0.5));
    for (double s : {0.2, 0.9, 1.5}) {
        CHECK(max_abs_diff(p.at(pi + s), T1 * p.at(s) * T1 * p.half) < 1e-12);
        CHECK(max_abs_diff(p.at(pi - s), T13 * p.at(s) * T13 * p.half) < 1e-12);
        CHECK(max_abs_diff(p.at(-s), T3 * p.at(s) * T3) < 1e-14);
    }
}

TEST_CASE("circular drive: r and alpha") {
    for (double nu : {0.5, 1.0, 1.7})
        for (double f : {0.3, 1.0, 2.0}) {
            const DimensionlessParams d(nu, f, f);
            const double w = std::hypot(nu - 1, f);
            CHECK(r_parameter(d) == Approx(std::abs(std::cos(pi * w / 2))).epsilon(1e-10).scale(1));
        }
    // on resonance the periodic axis is along y
    const double a = alpha_periodic(DimensionlessParams(1, 0.3, 0.3));
    CHECK(a == Approx(pi / 2).epsilon(1e-10));
}

TEST_CASE("periodic solution returns after one period") {
    const DimensionlessParams d(1, 1, 0.5);
    const MonodromyParams mp = monodromy_params(d);
    const SpinVector s0{std::cos(mp.alpha), std::sin(mp.alpha), 0};
    const auto tr = integrate_classical(d, s0, 2 * pi, 1e-12, 2);
    CHECK(max_abs_diff(tr.spin.back(), s0) < 1e-9);
    const PeriodicSolution ps = periodic_solution(d);
    CHECK(ps.alpha == Approx(mp.alpha).epsilon(1e-10));
    CHECK(cos_sum(ps.x, 0) == Approx(s0.x).epsilon(1e-10));
    CHECK(cos_sum(ps.y, 0) == Approx(s0.y).epsilon(1e-10));
    const auto mid = integrate_classical(d, s0, 2.3, 1e-12, 2);
    CHECK(cos_sum(ps.x, 2.3) == Approx(mid.spin.back().x).epsilon(1e-9));
    CHECK(sin_sum(ps.z, 2.3) == Approx(mid.spin.back().z).epsilon(1e-9));
}

TEST_CASE("quasienergy pipeline") {
    const DimensionlessParams d(1, 1, 0.5);
    const QuasienergyResult q = quasienergy(d);
    CHECK(q.r == Approx(0.387328422).epsilon(1e-8));
    CHECK(q.eps_qu == Approx(0.126602043).epsilon(1e-8));
    CHECK(q.route_mismatch < 1e-8);
    CHECK(q.split.total == Approx(q.split.geometric + q.split.dynamical).epsilon(1e-12));
    // the split refers to the antiparallel periodic solution
    CHECK(q.split.dynamical == Approx(-dynamical_from_fourier(periodic_solution(d), d)).epsilon(1e-10));
    CHECK_FALSE(q.degenerate);
}

TEST_CASE("zero-quasienergy curve") {
    CHECK(zero_quasienergy_G(1, 1, 1) == Approx(1).epsilon(1e-8));
    CHECK(zero_curve_series_G(1) == 1);
    // the curve leaves the circular point with d(omega)/dG = 1/2
    const double a = zero_quasienergy_omega(1, 1, 0.999), b = zero_quasienergy_omega(1, 1, 0.998);
    CHECK((a - b) / 0.001 == Approx(0.5).epsilon(2e-3));
    const double g = zero_quasienergy_G(1, 1, 0.9);
    CHECK(g == Approx(zero_curve_series_G(0.9)).epsilon(1e-3));
    CHECK(r_parameter(to_dimensionless(DriveParams(1, 1, g, 0.9))) < 1e-7);
}

TEST_CASE("degenerate solutions on the zero curve are orthonormal") {
    const double g = zero_quasienergy_G(1, 1, 0.9);
    const DegenerateSolutions ds = degenerate_solutions(to_dimensionless(DriveParams(1, 1, g, 0.9)));
    CHECK(dot(ds.s1_0, ds.s2_0) == Approx(0).scale(1));
    CHECK(norm(ds.s3_0) == Approx(1));
    CHECK(ds.eps_d > 0);
    CHECK_THROWS_AS(degenerate_solutions(DimensionlessParams(1, 1, 0.5)), NumericalError);
}
