#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "rabi/core.hpp"
#include "rabi/numint.hpp"
#include "rabi/specfun.hpp"

namespace rabi {

// ---------------------------------------------------------------------------
// Circular polarization (f = g)
// ---------------------------------------------------------------------------

namespace detail {
inline void require_circular(const DimensionlessParams& d) {
    if (std::abs(d.f - d.g) > 1e-12) throw ValidationError("circular case requires f = g");
}

/// Rotation by angle phi about the unit axis n (right-handed).
inline Rotation3 axis_rotation(SpinVector n, double phi) {
    const double c = std::cos(phi), s = std::sin(phi), v = 1 - c;
    Rotation3 r;
    r.m = {{{c + n.x * n.x * v, n.x * n.y * v - n.z * s, n.x * n.z * v + n.y * s},
            {n.y * n.x * v + n.z * s, c + n.y * n.y * v, n.y * n.z * v - n.x * s},
            {n.z * n.x * v - n.y * s, n.z * n.y * v + n.x * s, c + n.z * n.z * v}}};
    return r;
}
}  // namespace detail

inline double rabi_frequency(const DimensionlessParams& d) { return std::hypot(d.f, 1 - d.nu); }

/// Closed-form R(tau, 0) for f = g: in the frame co-rotating with the drive
/// the field is static, b = (nu - 1, f, 0).
inline Rotation3 circular_propagator(const DimensionlessParams& d, double tau) {
    detail::require_circular(d);
    const double omega = rabi_frequency(d);
    const Rotation3 frame = detail::axis_rotation({1, 0, 0}, tau);
    if (omega == 0) return frame;
    const SpinVector axis{(d.nu - 1) / omega, d.f / omega, 0};
    return frame * detail::axis_rotation(axis, omega * tau);
}

/// fold((1 + Omega)/2).
inline double circular_quasienergy(const DimensionlessParams& d) {
    detail::require_circular(d);
    return fold_quasienergy((1 + rabi_frequency(d)) / 2);
}

// ---------------------------------------------------------------------------
// Adiabatic limit omega -> 0 (physical units, t is physical time)
// ---------------------------------------------------------------------------

/// Spin following the slow field: S0 + omega S1 + omega^2 S2 up to `order`.
inline SpinVector adiabatic_spin(const DriveParams& p, int order, double t) {
    if (order < 0 || order > 2) throw ValidationError("adiabatic_spin: order must be 0, 1 or 2");
    const double w = p.omega, w0 = p.omega0, F = p.F, G = p.G;
    const double c = std::cos(w * t), s = std::sin(w * t);
    const SpinVector h{w0, G * c, F * s};
    const double nh = norm(h);
    if (nh < 1e-300) throw ValidationError("adiabatic_spin: field vanishes");
    SpinVector out = (1.0 / nh) * h;
    if (order == 0) return out;
    const double D = (G * G - F * F) * std::cos(2 * w * t) + F * F + G * G + 2 * w0 * w0;
    const double r2 = std::numbers::sqrt2;
    out = out + (2 * r2 * w / std::pow(D, 1.5)) * SpinVector{-F * G, F * w0 * c, G * w0 * s};
    if (order == 1) return out;
    const double F2 = F * F, G2 = G * G, w02 = w0 * w0;
    const double a10 = -6 * r2 * w0 * (F2 * F2 + w02 * (F2 + G2) + G2 * G2);
    const double a12 = 2 * r2 * w0 * (F2 - G2) * (2 * F2 + 2 * G2 + w02);
    const double a14 = 2 * r2 * w0 * (F2 - G2) * (F2 - G2);
    const double a21 = r2 * G * (-6 * F2 * F2 + F2 * (2 * G2 - 7 * w02) + 11 * G2 * w02 + 8 * w02 * w02);
    const double a23 = 3 * r2 * G * (F - G) * (F + G) * (2 * F2 + w02);
    const double a31 = r2 * F * (F2 * (2 * G2 + 11 * w02) - 6 * G2 * G2 - 7 * G2 * w02 + 8 * w02 * w02);
    const double a33 = 3 * r2 * F * (F2 - G2) * (2 * G2 + w02);
    const SpinVector s2{a10 + a12 * std::cos(2 * w * t) + a14 * std::cos(4 * w * t),
                        a21 * c + a23 * std::cos(3 * w * t), a31 * s + a33 * std::sin(3 * w * t)};
    return out + (w * w / std::pow(D, 3.5)) * s2;
}

/// max over one period of |dS/dt - h x S| for the truncated adiabatic spin.
inline double adiabatic_residual(const DriveParams& p, int order, int samples = 400) {
    const double period = 2 * std::numbers::pi / p.omega;
    const double dt = 1e-3 / p.omega;
    double worst = 0;
    for (int k = 0; k < samples; ++k) {
        const double t = period * k / samples;
        auto S = [&](double tt) { return adiabatic_spin(p, order, tt); };
        const SpinVector deriv =
            (1.0 / (12 * dt)) * (S(t - 2 * dt) - 8.0 * S(t - dt) + 8.0 * S(t + dt) - S(t + 2 * dt));
        const SpinVector h{p.omega0, p.G * std::cos(p.omega * t), p.F * std::sin(p.omega * t)};
        worst = std::max(worst, norm(deriv - cross(h, S(t))));
    }
    return worst;
}

struct AdiabaticQuasienergy {
    double E0{0}, E1{0}, E2{0};
};

/// E0 = sqrt(G^2 + omega0^2)/pi E(m), m = (G^2 - F^2)/(G^2 + omega0^2).
inline double adiabatic_E0(double omega0, double F, double G) {
    const double a = G * G + omega0 * omega0;
    if (a == 0) return F / std::numbers::pi;  // omega0 = G = 0: mean of |F sin|/2
    return std::sqrt(a) / std::numbers::pi * complete_elliptic_E((G * G - F * F) / a);
}

/// Berry-phase term; vanishes for linear polarization (G = 0 or F = 0).
inline double adiabatic_E1(double omega0, double F, double G) {
    if (G == 0 || F == 0) return 0.0;
    const double a = G * G + omega0 * omega0;
    const double m = (G * G - F * F) / a;
    return 0.5 - F * omega0 * complete_elliptic_Pi(1 - F * F / (G * G), m) / (std::numbers::pi * G * std::sqrt(a));
}

/// Mean of |h|/2 over one period by trapezoid sums (spectrally accurate for periodic integrands).
inline double adiabatic_E0_quadrature(double omega0, double F, double G, int samples = 4096) {
    double s = 0;
    for (int k = 0; k < samples; ++k) {
        const double x = 2 * std::numbers::pi * k / samples;
        s += 0.5 * std::sqrt(F * F * std::sin(x) * std::sin(x) + G * G * std::cos(x) * std::cos(x) + omega0 * omega0);
    }
    return s / samples;
}

/// Exact quasienergy on the branch n omega +- E nearest to `target`.
inline double quasienergy_branch_near(const DriveParams& p, double target, double tol = default_ode_tol) {
    const MonodromyParams mp = monodromy_params_numeric(to_dimensionless(p), tol);
    const double e = p.omega * std::asin(mp.r) / std::numbers::pi;
    double best = e, gap = std::abs(e - target);
    const long long n0 = static_cast<long long>(std::floor(target / p.omega));
    for (long long n = n0 - 1; n <= n0 + 2; ++n)
        for (double v : {n * p.omega + e, n * p.omega - e})
            if (std::abs(v - target) < gap) {
                gap = std::abs(v - target);
                best = v;
            }
    return best;
}

inline constexpr std::array<double, 3> adiabatic_fit_omegas{0.04, 0.02, 0.01};

/// E0 and E1 in closed form; E2 from the integrated quasienergy at small omega,
/// (E - E0 - omega E1)/omega^2 extrapolated to omega = 0 (two Richardson steps).
/// The omegas are relative to omega0 (or to 1 when omega0 = 0).
inline AdiabaticQuasienergy adiabatic_quasienergy(double omega0, double F, double G) {
    AdiabaticQuasienergy a;
    a.E0 = adiabatic_E0(omega0, F, G);
    a.E1 = adiabatic_E1(omega0, F, G);
    const double scale = omega0 > 0 ? omega0 : 1.0;
    std::array<double, 3> q{};
    for (int i = 0; i < 3; ++i) {
        const double w = adiabatic_fit_omegas[i] * scale;
        const double e = quasienergy_branch_near(DriveParams(omega0, F, G, w), a.E0 + w * a.E1, 1e-12);
        q[i] = (e - a.E0 - w * a.E1) / (w * w);
    }
    const double r1 = 2 * q[1] - q[0], r2 = 2 * q[2] - q[1];
    a.E2 = (4 * r2 - r1) / 3;
    return a;
}

// ---------------------------------------------------------------------------
// Fourier-Taylor series in the drive amplitudes (physical units)
// ---------------------------------------------------------------------------

struct ResonanceProximity : ValidationError {
    int m;
    explicit ResonanceProximity(int m_)
        : ValidationError("Fourier-Taylor series: omega within the guard band of omega0/(2m-1), m=" +
                          std::to_string(m_)),
          m(m_) {}
};

struct FTSeries {
    DriveParams params;
    int order{0};
    // rows n = 0..order; R[n] has n+1 entries (cos 2m w t), S[n], T[n] have n+1 entries
    std::vector<std::vector<double>> R, S, T;
};

inline constexpr double ft_guard_band = 1e-6;

inline FTSeries ft_build(const DriveParams& p, int N) {
    if (N < 0 || N > 60) throw ValidationError("ft_build: order must lie in [0, 60]");
    const double w = p.omega, w0 = p.omega0, F = p.F, G = p.G;
    for (int m = 1; m <= N + 1; ++m)
        if (std::abs(w - w0 / (2 * m - 1)) < ft_guard_band * std::max(w0, 1e-300)) throw ResonanceProximity(m);
    FTSeries s;
    s.params = p;
    s.order = N;
    s.R.assign(N + 1, {});
    s.S.assign(N + 1, {});
    s.T.assign(N + 1, {});
    const double den0 = (w - w0) * (w + w0);
    s.R[0] = {1.0};
    s.S[0] = {-(F * w + G * w0) / den0};
    s.T[0] = {-(F * w0 + G * w) / den0};
    for (int n = 0; n < N; ++n) {
        auto Sv = [&](int m) { return m <= n ? s.S[n][m] : 0.0; };
        auto Tv = [&](int m) { return m <= n ? s.T[n][m] : 0.0; };
        std::vector<double>& Rn = s.R[n + 1];
        Rn.assign(n + 2, 0.0);
        for (int m = 1; m <= n + 1; ++m)
            Rn[m] = (F * Sv(m - 1) - F * Sv(m) - G * Tv(m - 1) - G * Tv(m)) / (4 * m * w);
        s.S[n + 1].assign(n + 2, 0.0);
        s.T[n + 1].assign(n + 2, 0.0);
        for (int m = 0; m <= n + 1; ++m) {
            const double k = (2 * m + 1) * w;
            const double den = 2 * (k * k - w0 * w0);
            const double r0 = Rn[m], r1 = m + 1 <= n + 1 ? Rn[m + 1] : 0.0;
            s.S[n + 1][m] = ((-G * w0 - F * k) * r0 + (-G * w0 + F * k) * r1) / den;
            s.T[n + 1][m] = ((-G * k - F * w0) * r0 + (-G * k + F * w0) * r1) / den;
        }
    }
    return s;
}

/// Size of the highest-order contribution.
inline double ft_tail(const FTSeries& s) {
    double t = 0;
    const int n = s.order;
    for (double v : s.R[n]) t += std::abs(v);
    for (double v : s.S[n]) t += std::abs(v);
    for (double v : s.T[n]) t += std::abs(v);
    return n == 0 ? 0.0 : t;
}

inline constexpr double ft_tail_limit = 1e-6;

/// Unnormalized (X, Y, Z) at physical time t.
inline SpinVector ft_evaluate(const FTSeries& s, double t, bool check_tail = true) {
    if (check_tail && ft_tail(s) > ft_tail_limit)
        throw NumericalError("Fourier-Taylor series: amplitudes too large for the requested order");
    const double w = s.params.omega;
    SpinVector out{0, 0, 0};
    for (int n = 0; n <= s.order; ++n)
        for (std::size_t m = 0; m < s.R[n].size(); ++m) {
            out.x += s.R[n][m] * std::cos(2.0 * m * w * t);
            out.y += s.S[n][m] * std::cos((2.0 * m + 1) * w * t);
            out.z += s.T[n][m] * std::sin((2.0 * m + 1) * w * t);
        }
    return out;
}

struct FTQuasienergy {
    double total{0}, dynamical{0}, geometric{0};  // physical units
};

/// Time averages over one period with pointwise normalization R = |(X, Y, Z)|.
inline FTQuasienergy ft_quasienergy(const FTSeries& s, int samples = 1024) {
    const DriveParams& p = s.params;
    FTQuasienergy q;
    for (int k = 0; k < samples; ++k) {
        const double t = 2 * std::numbers::pi / p.omega * k / samples;
        const SpinVector v = ft_evaluate(s, t);
        const double R = norm(v);
        const double hy = p.G * std::cos(p.omega * t), hz = p.F * std::sin(p.omega * t);
        q.total += 0.5 * (p.omega0 + (hy * v.y + hz * v.z) / (R + v.x));
        q.dynamical += (p.omega0 * v.x + hy * v.y + hz * v.z) / (2 * R);
    }
    q.total /= samples;
    q.dynamical /= samples;
    q.geometric = q.total - q.dynamical;
    return q;
}

/// Second-order closed form of the quasienergy.
inline double ft_quasienergy_second_order(const DriveParams& p) {
    const double w = p.omega, w0 = p.omega0, F = p.F, G = p.G;
    return w0 / 2 - (2 * F * G * w + (F * F + G * G) * w0) / (8 * (w * w - w0 * w0));
}

/// Fourth-order closed form of the quasienergy.
inline double ft_quasienergy_fourth_order(const DriveParams& p) {
    const double w = p.omega, w0 = p.omega0, F = p.F, G = p.G;
    const double F2 = F * F, G2 = G * G, d = w * w - w0 * w0;
    const double num = 4 * F * G * (F2 + G2) * w * w * w + (F2 * F2 + 22 * F2 * G2 + G2 * G2) * w * w * w0 +
                       12 * F * G * (F2 + G2) * w * w0 * w0 + (3 * F2 * F2 + 2 * F2 * G2 + 3 * G2 * G2) * w0 * w0 * w0;
    return ft_quasienergy_second_order(p) + num / (128 * d * d * d);
}

/// Lowest-order slope dE/domega = E_g/omega.
inline double ft_slope_second_order(const DriveParams& p) {
    const double w = p.omega, w0 = p.omega0, F = p.F, G = p.G;
    const double d = w * w - w0 * w0;
    return (G * w + F * w0) * (F * w + G * w0) / (4 * d * d);
}

// ---------------------------------------------------------------------------
// omega0 -> 0 family (tau = omega t)
// ---------------------------------------------------------------------------

/// Exact solution for omega0 = F = 0 with g = G/omega.
inline SpinVector zero_field_solution(double g, double tau) {
    const double a = g * std::sin(tau);
    return {std::cos(a), 0.0, -std::sin(a)};
}

/// Same solution from the Jacobi-Anger sums truncated at `terms` harmonics.
inline SpinVector zero_field_solution_bessel(double g, double tau, int terms = 40) {
    double x = bessel_J(0, g), z = 0;
    for (int m = 1; m <= terms; ++m) x += 2 * bessel_J(2 * m, g) * std::cos(2 * m * tau);
    for (int m = 0; m <= terms; ++m) z -= 2 * bessel_J(2 * m + 1, g) * std::sin((2 * m + 1) * tau);
    return {x, 0.0, z};
}

/// Linear-in-F y-component for omega0 = 0 (normalized), physical time t.
inline double near_linear_Y(const DriveParams& p, double t, int terms = 40) {
    if (p.omega0 != 0) throw ValidationError("near_linear_Y: requires omega0 = 0");
    const double g = p.G / p.omega;
    double y = 0;
    for (int m = 0; m <= terms; ++m)
        y += (bessel_J(2 * m + 2, g) - bessel_J(2 * m, g)) / (2 * m + 1) * std::cos((2 * m + 1) * p.omega * t);
    return p.F / p.omega * y;
}

/// Near-linear approximation (x, y, z) at physical time t for omega0 = 0.
inline SpinVector near_linear_solution(const DriveParams& p, double t) {
    SpinVector s = zero_field_solution(p.G / p.omega, p.omega * t);
    s.y = near_linear_Y(p, t);
    return s;
}

/// First order in delta = F - G about the circular solution (1, -F/w cos, -F/w sin), omega0 = 0.
/// Unnormalized.
inline SpinVector near_circular_solution(const DriveParams& p, double t) {
    if (p.omega0 != 0) throw ValidationError("near_circular_solution: requires omega0 = 0");
    const double F = p.F, w = p.omega, delta = p.F - p.G;
    const double pole = F * F - 3 * w * w;
    if (std::abs(pole) < 1e-12 * std::max(1.0, w * w)) throw ValidationError("near_circular_solution: F^2 = 3 omega^2");
    const double c = std::cos(w * t), s = std::sin(w * t);
    const double x = 1 + 3 * delta * F / (2 * pole) * std::cos(2 * w * t);
    const double third = -delta * F * F / (4 * w * pole);
    const double y = (-F / w + 3 * delta * F * F / (4 * w * pole)) * c + third * std::cos(3 * w * t);
    const double z = (-F / w + delta * (1 / w - 3 * F * F / (4 * w * pole))) * s + third * std::sin(3 * w * t);
    return {x, y, z};
}

}  // namespace rabi
