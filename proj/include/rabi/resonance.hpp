#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>
#include <boost/rational.hpp>

#include "rabi/core.hpp"
#include "rabi/quarter.hpp"

namespace rabi {

// ---------------------------------------------------------------------------
// Mean Fourier coefficients of the basis solutions
// ---------------------------------------------------------------------------

struct XiMatrix {
    double xx{0}, xy{0};  // x_0 for initial e_x, e_y
    double yx{0}, yy{0};  // y_0 for initial e_x, e_y
    double det() const { return xx * yy - xy * yx; }
};

inline XiMatrix xi_matrix(const QuarterSolution& qs) {
    XiMatrix m;
    double w = 1;
    for (int n = 0; n <= qs.order; ++n) {
        if (n > 0) w *= (2.0 * n - 1) / (2.0 * n);
        m.xx += w * qs.xi_x.c[n];
        m.xy += w * qs.xi_y.c[n];
        m.yx += w * qs.eta_x.c[n];
        m.yy += w * qs.eta_y.c[n];
    }
    return m;
}

inline XiMatrix xi_matrix(const DimensionlessParams& d) { return xi_matrix(solve_quarter(d)); }

// ---------------------------------------------------------------------------
// Stored series coefficients of omega_res/omega0 in (F/omega0)^m (G/omega0)^k
// ---------------------------------------------------------------------------

using Rational = boost::rational<std::int64_t>;
using TableEntry = std::optional<Rational>;

struct ResonanceTable {
    int n{1};
    std::vector<std::vector<TableEntry>> rows;  // rows[m][k]; missing or nullopt = not available
    int complete_order{0};                      // every entry with m + k <= this is stored

    TableEntry at(int m, int k) const {
        if (m < 0 || k < 0 || m >= static_cast<int>(rows.size()) || k >= static_cast<int>(rows[m].size()))
            return std::nullopt;
        return rows[m][k];
    }
};

namespace detail {
inline TableEntry q(std::int64_t a, std::int64_t b = 1) { return Rational(a, b); }
inline const TableEntry star = std::nullopt;
}  // namespace detail

inline const ResonanceTable& resonance_table(int n) {
    using detail::q;
    using detail::star;
    static const ResonanceTable t1{
        1,
        {
            {q(1), q(0), q(1, 16), q(0), q(1, 1024), q(0), q(-35, 131072), q(0), q(103, 8388608)},
            {q(0), q(-1, 8), q(0), q(3, 256), q(0), q(27, 65536), q(0), q(-69, 262144), q(0)},
            {q(1, 16), q(0), q(-13, 512), q(0), q(611, 131072), q(0), q(433, 2097152), q(0), star},
            {q(0), q(3, 256), q(0), q(-315, 32768), q(0), q(609, 262144), q(0), star, q(0)},
            {q(1, 1024), q(0), q(611, 131072), q(0), q(-19115, 4194304), q(0), star, q(0), star},
            {q(0), q(27, 65536), q(0), q(609, 262144), q(0), star, q(0), star, q(0)},
            {q(-35, 131072), q(0), q(433, 2097152), q(0), star, q(0), star, q(0), star},
            {q(0), q(-69, 262144), q(0), star, q(0), star, q(0), star, q(0)},
            {q(103, 8388608), q(0), star, q(0), star, q(0), star, q(0), star},
        },
        8};
    static const ResonanceTable t2{
        2,
        {
            {q(1, 3), q(0), q(3, 32), q(0), q(-135, 8192), q(0), q(2133, 1048576), q(0)},
            {q(0), q(1, 16), q(0), q(-9, 2048), q(0), q(-3591, 524288), q(0), star},
            {q(3, 32), q(0), q(-21, 4096), q(0), q(6075, 1048576), q(0), star, q(0)},
            {q(0), q(-9, 2048), q(0), q(4095, 262144), q(0), star, q(0), star},
            {q(-135, 8192), q(0), q(6075, 1048576), q(0), star, q(0), star, q(0)},
            {q(0), q(-3591, 524288), q(0), star, q(0), star, q(0), star},
            {q(2133, 1048576), q(0), star, q(0), star, q(0), star, q(0)},
            {q(0), star, q(0), star, q(0), star, q(0), star},
        },
        6};
    static const ResonanceTable t3{
        3,
        {
            {q(1, 5), q(0), q(5, 96), q(0), q(-2125, 221184)},
            {q(0), q(1, 48), q(0), q(-125, 55296), q(0)},
            {q(5, 96), q(0), q(-205, 36864), q(0), star},
            {q(0), q(-125, 55296), q(0), star, q(0)},
            {q(-2125, 221184), q(0), star, q(0), star},
        },
        4};
    switch (n) {
        case 1: return t1;
        case 2: return t2;
        case 3: return t3;
        default: throw ValidationError("resonance_table: stored tables exist for n = 1, 2, 3");
    }
}

/// Coefficient of (F/omega0)^2 (and (G/omega0)^2) for n > 1; stated as a conjecture.
inline Rational resonance_coeff_20(int n) {
    if (n < 2) throw ValidationError("resonance_coeff_20: n > 1 required");
    return Rational(2 * n - 1, 16 * static_cast<std::int64_t>(n - 1) * n);
}

/// Coefficient of (F/omega0)(G/omega0) for n > 1, from the circular limit.
inline Rational resonance_coeff_11(int n) {
    if (n < 2) throw ValidationError("resonance_coeff_11: n > 1 required");
    return Rational(1, 8 * static_cast<std::int64_t>(n - 1) * n);
}

/// Circular-polarization resonance omega_res/omega0 for n >= 2 (and 1 for n = 1).
inline double resonance_circular(int n, double F_over_omega0) {
    if (n < 1) throw ValidationError("resonance_circular: n >= 1 required");
    if (n == 1) return 1.0;
    const double a = (2.0 * n - 3) * (2.0 * n - 1) * (F_over_omega0 * F_over_omega0 + 1) + 1;
    return (std::sqrt(a) - 1) / (4.0 * (n - 2) * n + 3);
}

/// Sum of Omega_{m,k} along the anti-diagonal m + k = M.
inline Rational antidiagonal_sum(const ResonanceTable& t, int M) {
    Rational s(0);
    for (int m = 0; m <= M; ++m) {
        const auto e = t.at(m, M - m);
        if (!e) throw ValidationError("antidiagonal_sum: entry beyond stored table");
        s += *e;
    }
    return s;
}

/// Truncated series for omega_res; max_order < 0 uses the full complete order.
/// For n > 3 only the order-2 closed forms are available.
inline double resonance_series_eval(int n, double F, double G, double omega0, int max_order = -1) {
    if (n < 1) throw ValidationError("resonance_series_eval: n >= 1 required");
    if (!(omega0 > 0)) throw ValidationError("resonance_series_eval: omega0 > 0 required");
    const double a = F / omega0, b = G / omega0;
    if (n > 3) {
        if (max_order < 0) max_order = 2;
        if (max_order > 2) throw ValidationError("resonance_series_eval: order beyond stored table");
        double s = 1.0 / (2 * n - 1);
        if (max_order >= 2) {
            const double c20 = boost::rational_cast<double>(resonance_coeff_20(n));
            s += c20 * (a * a + b * b) + boost::rational_cast<double>(resonance_coeff_11(n)) * a * b;
        }
        return s * omega0;
    }
    const ResonanceTable& t = resonance_table(n);
    if (max_order < 0) max_order = t.complete_order;
    if (max_order > t.complete_order) throw ValidationError("resonance_series_eval: order beyond stored table");
    double s = 0;
    for (int M = 0; M <= max_order; ++M)
        for (int m = 0; m <= M; ++m) {
            const auto e = t.at(m, M - m);
            s += boost::rational_cast<double>(*e) * std::pow(a, m) * std::pow(b, M - m);
        }
    return s * omega0;
}

// ---------------------------------------------------------------------------
// Numerical resonance frequency: det Xi(omega) = 0
// ---------------------------------------------------------------------------

inline double xi_determinant(double omega0, double F, double G, double omega) {
    return xi_matrix(to_dimensionless(DriveParams(omega0, F, G, omega))).det();
}

inline double resonance_frequency(double omega0, double F, double G, int n) {
    if (n < 1) throw ValidationError("resonance_frequency: n >= 1 required");
    DriveParams(omega0, F, G, 1.0);  // validates amplitudes
    if (!(omega0 > 0)) throw ValidationError("resonance_frequency: omega0 > 0 required");
    const double est = resonance_series_eval(n, F, G, omega0);
    auto det = [&](double w) { return xi_determinant(omega0, F, G, w); };
    constexpr int steps = 24;
    for (double half : {0.3, 0.45}) {
        const double lo = est * (1 - half), hi = est * (1 + half);
        double best_a = 0, best_b = 0, best_gap = INFINITY;
        double wa = lo, da = det(lo);
        for (int i = 1; i <= steps; ++i) {
            const double wb = lo + (hi - lo) * i / steps, db = det(wb);
            if (da == 0) return wa;
            if (da * db < 0) {
                const double gap = std::abs(0.5 * (wa + wb) - est);
                if (gap < best_gap) best_gap = gap, best_a = wa, best_b = wb;
            }
            wa = wb;
            da = db;
        }
        if (std::isfinite(best_gap)) {
            const auto r = boost::math::tools::bisect(det, best_a, best_b, [](double a, double b) {
                return std::abs(b - a) <= 1e-10 * std::abs(a);
            });
            return 0.5 * (r.first + r.second);
        }
    }
    throw NumericalError("resonance_frequency: no sign change of det Xi near the series estimate for n=" +
                         std::to_string(n));
}

}  // namespace rabi
