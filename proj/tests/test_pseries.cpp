#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rabi/numint.hpp"
#include "rabi/pseries.hpp"
#include "rabi/quarter.hpp"

using namespace rabi;
using doctest::Approx;
using PS = PowerSeries<double>;

namespace {
PS exp_series(int n) {
    PS s = PS::zero(n);
    double f = 1;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) f *= k;
        s.c[k] = 1 / f;
    }
    return s;
}
}  // namespace

TEST_CASE("multiply") {
    const PS a({1, 1}), b({1, -1});
    const PS p = series_multiply(a, b);
    CHECK(p.c[0] == 1);
    CHECK(p.c[1] == 0);
    if (p.order() >= 2) CHECK(p.c[2] == 0);  // truncated to the shorter order
    const PS a2({1, 1, 0}), b2({1, -1, 0});
    CHECK(series_multiply(a2, b2).c[2] == -1);
    const PS one({1, 0, 0, 0});
    const PS s({0.3, -1, 2, 5});
    const PS q = series_multiply(one, s);
    for (int k = 0; k <= 3; ++k) CHECK(q.c[k] == s.c[k]);
}

TEST_CASE("multiply: sin times sin equals sin squared") {
    const int n = 15;
    PS s = PS::zero(n), s2 = PS::zero(n);
    double f = 1;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) f *= k;
        if (k % 2 == 1) s.c[k] = ((k / 2) % 2 ? -1 : 1) / f;
    }
    // sin^2 = (1 - cos 2u)/2
    f = 1;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) f *= k;
        if (k >= 2 && k % 2 == 0) s2.c[k] = -0.5 * ((k / 2) % 2 ? -1 : 1) * std::pow(2.0, k) / f;
    }
    const PS p = series_multiply(s, s);
    for (int k = 0; k <= n; ++k) CHECK(p.c[k] == Approx(s2.c[k]).epsilon(1e-13).scale(1));
}

TEST_CASE("multiply is commutative and associative") {
    const PS a({1, 2, -0.5, 0.25, 3}), b({-1, 0.5, 0.5, 2, 1}), c({0.2, 0, 1, -1, 4});
    const PS ab = series_multiply(a, b), ba = series_multiply(b, a);
    const PS l = series_multiply(ab, c), r = series_multiply(a, series_multiply(b, c));
    for (int k = 0; k <= 4; ++k) {
        CHECK(ab.c[k] == Approx(ba.c[k]));
        CHECK(l.c[k] == Approx(r.c[k]));
    }
}

TEST_CASE("compose") {
    const PS s({0.5, -1, 2, 0.3});
    const PS id = series_compose(PS({0, 1, 0, 0}), PS({0, 1.5, 0.2, 0.1}));
    CHECK(id.c[1] == Approx(1.5));
    CHECK(id.c[2] == Approx(0.2));
    const PS sq = series_compose(PS({0, 0, 1}), PS({0, 2, 0}));
    CHECK(sq.c[2] == Approx(4));
    CHECK(sq.c[1] == 0);
    // exp(log(1 + u)) = 1 + u
    const int n = 20;
    PS lg = PS::zero(n);
    for (int k = 1; k <= n; ++k) lg.c[k] = (k % 2 ? 1.0 : -1.0) / k;
    const PS e = series_compose(exp_series(n), lg);
    CHECK(e.c[0] == Approx(1));
    CHECK(e.c[1] == Approx(1));
    for (int k = 2; k <= n; ++k) CHECK(std::abs(e.c[k]) < 1e-12);
    (void)s;
}

TEST_CASE("revert") {
    const PS r1 = series_revert(PS({0, 1, 0, 0}));
    CHECK(r1.c[1] == 1);
    CHECK(r1.c[2] == 0);
    const PS r2 = series_revert(PS({0, 2, 0, 0}));
    CHECK(r2.c[1] == Approx(0.5));
    // u(v) = v/4 - v^2/48 + v^3/1440 - ...
    const PS v = v_of_u_by_reversion<double>(12);
    CHECK(v.c[1] == Approx(4));
    CHECK(v.c[2] == Approx(4.0 / 3));
    const PS closed = v_of_u_closed_form<double>(12);
    for (int k = 0; k <= 12; ++k) CHECK(v.c[k] == Approx(closed.c[k]).epsilon(1e-12));
    // round trip
    const PS s({0, 1.5, -0.4, 0.7, 0.1, -0.3});
    const PS back = series_compose(series_revert(s), s);
    CHECK(back.c[1] == Approx(1));
    for (int k = 2; k <= 5; ++k) CHECK(std::abs(back.c[k]) < 1e-12);
    CHECK_THROWS(series_revert(PS({1, 1, 0})));
}

TEST_CASE("evaluate") {
    PS geo = PS::zero(60);
    for (auto& c : geo.c) c = 1;
    const auto v = series_evaluate(geo, 0.5);
    CHECK(v.value == Approx(2).epsilon(1e-15));
    CHECK(v.tail_estimate < 1e-17);
    const PS s({0.7, 3, -2});
    CHECK(series_evaluate(s, 0).value == 0.7);
    CHECK_THROWS_AS(series_evaluate(s, 0.6), ValidationError);
    CHECK_NOTHROW(series_evaluate(s, 0.6, true));
}

TEST_CASE("recurrence engine on simple equations") {
    using P = Polynomial<double>;
    // X' - X = 0, written with p = (-1, 1, 0, 0) and a dummy third-order slot
    // would leave p3 = 0; use X''' - X = 0 instead with seeds 1, 1, 1/2.
    const std::array<P, 4> p{P{-1.0}, P{}, P{}, P{1.0}};
    const PS e = recurrence_from_poly_ode(p, std::vector<double>{1, 1, 0.5}, 20);
    double f = 1;
    for (int k = 0; k <= 20; ++k) {
        if (k > 0) f *= k;
        CHECK(e.c[k] == Approx(1 / f).epsilon(1e-13));
    }
    // u X''' + X'' = 0 has constants among its solutions
    const std::array<P, 4> q{P{}, P{}, P{1.0}, P{0.0, 1.0}};
    const PS c = recurrence_from_poly_ode(q, std::vector<double>{2.5, 0, 0}, 10);
    for (int k = 1; k <= 10; ++k) CHECK(c.c[k] == 0);
    CHECK(c.c[0] == 2.5);
    CHECK_THROWS_AS(recurrence_from_poly_ode(std::array<P, 4>{P{1.0}, P{}, P{}, P{}}, std::vector<double>{1}, 5),
                    ValidationError);
}

TEST_CASE("recurrence on the x-equation: residual and prefix stability") {
    const DimensionlessParams d(1, 1, 0.5);
    const auto ode = ode_coeffs_X<double>(d);
    const auto seeds = xi_seeds<double>(d, 1, 0);
    RecurrenceReport rep;
    const PS x40 = recurrence_from_poly_ode(ode.p, seeds, 40, &rep);
    const PS x80 = recurrence_from_poly_ode(ode.p, seeds, 80);
    for (int k = 0; k <= 40; ++k) CHECK(x40.c[k] == x80.c[k]);
    double cmax = 0;
    for (double c : x40.c) cmax = std::max(cmax, std::abs(c));
    const auto res = ode_residual(ode.p, x40);
    REQUIRE(res.size() >= 30);
    for (double r : res) CHECK(std::abs(r) <= 1e-9 * cmax);
    CHECK(rep.max_seed_residual < 1e-9);
    // double precision loses the high coefficients; 60 digits keeps them
    using MP = mpfloat<60>;
    const auto ode_mp = ode_coeffs_X<MP>(d);
    const auto x_mp = recurrence_from_poly_ode(ode_mp.p, xi_seeds<MP>(d, 1, 0), 80);
    for (int k = 0; k <= 8; ++k) CHECK(x40.c[k] == Approx(static_cast<double>(x_mp.c[k])).epsilon(1e-10));
    // evaluation at u = 1/2 matches the integrator at tau = pi/2
    const auto tr = integrate_classical(d, {1, 0, 0}, std::numbers::pi / 2, 1e-12, 2);
    CHECK(series_evaluate(x_mp, 0.5).value == Approx(tr.spin.back().x).epsilon(1e-8));
}
