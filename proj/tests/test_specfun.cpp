#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rabi/specfun.hpp"

using namespace rabi;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

// Reference values computed once with mpmath at 30 digits.
TEST_CASE("elliptic E") {
    CHECK(complete_elliptic_E(0) == Approx(pi / 2).epsilon(1e-15));
    CHECK(complete_elliptic_E(1) == 1);
    CHECK(complete_elliptic_E(-1.5) == Approx(2.05299498428258950352).epsilon(1e-14));
    CHECK(complete_elliptic_E(0.99999999) == Approx(1).epsilon(1e-6));
    CHECK_THROWS_AS(complete_elliptic_E(1.5), ValidationError);
}

TEST_CASE("elliptic K and Pi") {
    CHECK(complete_elliptic_K(0) == Approx(pi / 2).epsilon(1e-15));
    CHECK(complete_elliptic_Pi(0, 0) == Approx(pi / 2).epsilon(1e-15));
    CHECK(complete_elliptic_K(0.3) == Approx(1.71388944817879105555).epsilon(1e-14));
    CHECK(complete_elliptic_Pi(0, 0.3) == Approx(1.71388944817879105555).epsilon(1e-14));
    CHECK(complete_elliptic_Pi(-1.25, -1) == Approx(0.904921390489910383203).epsilon(1e-14));
    // Pi(n|0) = pi / (2 sqrt(1 - n))
    for (double n : {-3.0, -0.5, 0.4, 0.9}) CHECK(complete_elliptic_Pi(n, 0) == Approx(pi / (2 * std::sqrt(1 - n))));
    CHECK_THROWS_AS(complete_elliptic_Pi(1, 0), ValidationError);
    CHECK_THROWS_AS(complete_elliptic_K(1), ValidationError);
}

TEST_CASE("elliptic integrals against direct quadrature") {
    using boost::math::quadrature::gauss_kronrod;
    for (double m : {-4.0, -1.0, 0.2, 0.7}) {
        const double e = gauss_kronrod<double, 31>::integrate(
            [m](double t) { return std::sqrt(1 - m * std::sin(t) * std::sin(t)); }, 0, pi / 2, 10, 1e-14);
        CHECK(complete_elliptic_E(m) == Approx(e).epsilon(1e-12));
        for (double n : {-2.0, 0.5}) {
            const double p = gauss_kronrod<double, 31>::integrate(
                [m, n](double t) {
                    const double s2 = std::sin(t) * std::sin(t);
                    return 1 / ((1 - n * s2) * std::sqrt(1 - m * s2));
                },
                0, pi / 2, 10, 1e-14);
            CHECK(complete_elliptic_Pi(n, m) == Approx(p).epsilon(1e-12));
        }
    }
}

TEST_CASE("Bessel J") {
    CHECK(bessel_J(0, 0) == 1);
    CHECK(bessel_J(3, 0) == 0);
    CHECK(bessel_J(0, 1) == Approx(0.765197686557966551450).epsilon(1e-14));
    CHECK(bessel_J(3, 2.5) == Approx(0.216600391039113524767).epsilon(1e-14));
    CHECK_THROWS_AS(bessel_J(-1, 1), ValidationError);
}

TEST_CASE("Jacobi-Anger: cos(x sin t) = J0(x) + 2 sum J_2k(x) cos 2kt") {
    for (double x : {0.3, 1.7, 4.0})
        for (double t : {0.1, 1.0, 2.5}) {
            double s = bessel_J(0, x);
            for (int k = 1; k <= 20; ++k) s += 2 * bessel_J(2 * k, x) * std::cos(2 * k * t);
            CHECK(s == Approx(std::cos(x * std::sin(t))).epsilon(1e-13));
            double o = 0;
            for (int k = 0; k <= 20; ++k) o += 2 * bessel_J(2 * k + 1, x) * std::sin((2 * k + 1) * t);
            CHECK(o == Approx(std::sin(x * std::sin(t))).epsilon(1e-13));
        }
}
