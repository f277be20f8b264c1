#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "rabi/core.hpp"

using namespace rabi;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("to_dimensionless divides by omega") {
    auto d = to_dimensionless(DriveParams(1, 1, 0.5, 1));
    CHECK(d.nu == 1);
    CHECK(d.f == 1);
    CHECK(d.g == 0.5);
    d = to_dimensionless(DriveParams(0, 0, 1, 1));
    CHECK(d.nu == 0);
    CHECK(d.f == 0);
    CHECK(d.g == 1);
    d = to_dimensionless(DriveParams(1, 3, 2, 0.5));
    CHECK(d.nu == 2);
    CHECK(d.f == 6);
    CHECK(d.g == 4);
    const DriveParams back = to_physical(d, 0.5);
    CHECK(back.omega0 == 1);
    CHECK(back.F == 3);
    CHECK(back.G == 2);
}

TEST_CASE("parameter validation rejects negative and non-finite values") {
    CHECK_THROWS_AS(DriveParams(-1, 1, 1, 1), ValidationError);
    CHECK_THROWS_AS(DriveParams(1, -0.1, 1, 1), ValidationError);
    CHECK_THROWS_AS(DriveParams(1, 1, 1, 0), ValidationError);
    CHECK_THROWS_AS(DriveParams(1, 1, NAN, 1), ValidationError);
    CHECK_THROWS_AS(DimensionlessParams(1, 1, -1), ValidationError);
    CHECK_THROWS_AS(MonodromyParams(1.5, 0), ValidationError);
}

TEST_CASE("field_at samples") {
    const DimensionlessParams d(1, 1, 0.5);
    auto h = field_at(d, 0);
    CHECK(h.x == 1);
    CHECK(h.y == 0.5);
    CHECK(h.z == 0);
    h = field_at(d, pi / 2);
    CHECK(h.x == 1);
    CHECK(h.y == Approx(0).epsilon(1e-15).scale(1));
    CHECK(h.z == Approx(1));
    h = field_at(DimensionlessParams(2, 6, 4), pi);
    CHECK(h.x == 2);
    CHECK(h.y == Approx(-4));
    CHECK(std::abs(h.z) < 1e-14);
}

TEST_CASE("half monodromy from (r, alpha)") {
    CHECK(max_abs_diff(half_monodromy_from_params({0, 0}), Rotation3::identity()) < 1e-15);
    const Rotation3 one = half_monodromy_from_params({1, 0.7});
    CHECK(one(2, 2) == Approx(-1));
    CHECK(std::abs(one(0, 2)) < 1e-15);
    CHECK(std::abs(one(2, 1)) < 1e-15);
    const MonodromyParams mp(0.387328, 1.40464);
    const Rotation3 h = half_monodromy_from_params(mp);
    CHECK(h(2, 2) == Approx(1 - 2 * 0.387328 * 0.387328).epsilon(1e-14));
    CHECK(h(2, 2) == Approx(0.699954).epsilon(1e-6));
    // structure of the half-period matrix, exact
    CHECK(h(0, 1) == -h(1, 0));
    CHECK(h(0, 2) == h(2, 0));
    CHECK(h(1, 2) == -h(2, 1));
    CHECK(orthogonality_defect(h) < tol_ortho);
    CHECK(h.det() == Approx(1));
    // maps the periodic axis to its mirror image
    const SpinVector a{std::cos(mp.alpha), std::sin(mp.alpha), 0};
    CHECK(max_abs_diff(h * a, SpinVector{a.x, -a.y, 0}) < tol_ortho);
}

TEST_CASE("full monodromy from (r, alpha)") {
    CHECK(max_abs_diff(full_monodromy_from_params({0, 1.3}), Rotation3::identity()) < 1e-15);
    CHECK(full_monodromy_from_params({1 / std::sqrt(2.0), 0})(2, 2) == Approx(-1));
    for (double r : {0.1, 0.387328, 0.8, 0.99})
        for (double alpha : {0.0, 1.0, 2.5, 4.0}) {
            const MonodromyParams mp(r, alpha);
            const Rotation3 full = full_monodromy_from_params(mp);
            const Rotation3 t1h = T1 * half_monodromy_from_params(mp);
            CHECK(max_abs_diff(full, t1h * t1h) < 1e-15);
            const SpinVector a{std::cos(mp.alpha), std::sin(mp.alpha), 0};
            CHECK(max_abs_diff(full * a, a) < tol_ortho);
            // rotation angle rho from the trace equals 4 pi eps
            const double rho = std::acos(std::clamp((full.trace() - 1) / 2, -1.0, 1.0));
            const double eps = quasienergy_from_r(r).eps_qu;
            CHECK(std::cos(rho) == Approx(std::cos(4 * pi * eps)).epsilon(1e-12));
            CHECK(max_abs_diff(full.transpose(), T3 * full * T3) < 1e-14);
        }
}

TEST_CASE("quasienergy from r") {
    CHECK(quasienergy_from_r(0).eps_qu == 0);
    CHECK(quasienergy_from_r(1).eps_qu == Approx(0.5));
    CHECK(quasienergy_from_r(0.387328).eps_qu == Approx(0.126602).epsilon(1e-5));
    double prev = -1;
    for (int i = 0; i <= 100; ++i) {
        const auto q = quasienergy_from_r(i / 100.0);
        CHECK(q.eps_qu > prev);
        prev = q.eps_qu;
        CHECK(q.eps_cl == Approx(normalize_angle(2 * q.eps_qu, 1.0)));
    }
    CHECK_THROWS_AS(quasienergy_from_r(-0.1), ValidationError);
}

TEST_CASE("physical quasienergy folds into [0, omega/2]") {
    CHECK(physical_quasienergy(0.126602, 1) == Approx(0.126602));
    CHECK(physical_quasienergy(0.75, 2) == Approx(0.5));
    CHECK(physical_quasienergy(0.5, 1) == Approx(0.5));
    CHECK(physical_quasienergy(-0.1, 1) == Approx(0.1));
    const auto b = quasienergy_branches(0.2, 1, 1);
    REQUIRE(b.size() == 6);
    CHECK(b.front() == Approx(-1.2));
    CHECK(b.back() == Approx(1.2));
}

TEST_CASE("normalize_angle") {
    CHECK(normalize_angle(-0.5) == Approx(2 * pi - 0.5));
    CHECK(normalize_angle(7.0) == Approx(7.0 - 2 * pi));
    CHECK(normalize_angle(1.25, 1.0) == Approx(0.25));
}
