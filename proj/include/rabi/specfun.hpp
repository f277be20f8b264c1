#pragma once

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/ellint_rd.hpp>
#include <boost/math/special_functions/ellint_rf.hpp>
#include <boost/math/special_functions/ellint_rj.hpp>

#include "rabi/core.hpp"

namespace rabi {

// Complete elliptic integrals in the parameter convention
//   E(m) = int_0^{pi/2} sqrt(1 - m sin^2 t) dt,  m <= 1 (negative m allowed).
// Evaluated through Carlson's symmetric forms, which stay real for m < 0.

inline double complete_elliptic_K(double m) {
    if (!(m < 1)) throw ValidationError("complete_elliptic_K: need m < 1");
    return boost::math::ellint_rf(0.0, 1.0 - m, 1.0);
}

inline double complete_elliptic_E(double m) {
    if (!(m <= 1)) throw ValidationError("complete_elliptic_E: need m <= 1");
    if (m == 1) return 1.0;
    const double y = 1.0 - m;
    return boost::math::ellint_rf(0.0, y, 1.0) - m / 3.0 * boost::math::ellint_rd(0.0, y, 1.0);
}

/// Pi(n|m) = int_0^{pi/2} dt / ((1 - n sin^2 t) sqrt(1 - m sin^2 t)), n < 1, m < 1.
inline double complete_elliptic_Pi(double n, double m) {
    if (!(n < 1)) throw ValidationError("complete_elliptic_Pi: need n < 1");
    if (!(m < 1)) throw ValidationError("complete_elliptic_Pi: need m < 1");
    const double y = 1.0 - m;
    const double rf = boost::math::ellint_rf(0.0, y, 1.0);
    if (n == 0) return rf;
    return rf + n / 3.0 * boost::math::ellint_rj(0.0, y, 1.0, 1.0 - n);
}

inline double bessel_J(int k, double x) {
    if (k < 0) throw ValidationError("bessel_J: order must be >= 0");
    return boost::math::cyl_bessel_j(k, x);
}

}  // namespace rabi
