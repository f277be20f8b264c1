#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabi {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Bad input: negative amplitudes, out-of-domain arguments, malformed ranges.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A computation that could not be completed (no bracket, degeneracy, ...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateError : NumericalError {
    using NumericalError::NumericalError;
};

// ---------------------------------------------------------------------------
// Small fixed-size linear algebra
// ---------------------------------------------------------------------------

struct SpinVector {
    double x{0}, y{0}, z{0};

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    friend SpinVector operator+(SpinVector a, SpinVector b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend SpinVector operator-(SpinVector a, SpinVector b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend SpinVector operator-(SpinVector a) { return {-a.x, -a.y, -a.z}; }
    friend SpinVector operator*(double s, SpinVector a) { return {s * a.x, s * a.y, s * a.z}; }
    friend SpinVector operator*(SpinVector a, double s) { return s * a; }
};

inline double dot(SpinVector a, SpinVector b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline SpinVector cross(SpinVector a, SpinVector b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(SpinVector a) { return std::sqrt(dot(a, a)); }
inline double max_abs_diff(SpinVector a, SpinVector b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

/// 3x3 real matrix; used for propagators R(tau, 0), which should lie in SO(3).
struct Rotation3 {
    std::array<std::array<double, 3>, 3> m{};

    static Rotation3 identity() {
        Rotation3 r;
        for (int i = 0; i < 3; ++i) r.m[i][i] = 1.0;
        return r;
    }
    static Rotation3 diag(double a, double b, double c) {
        Rotation3 r;
        r.m[0][0] = a;
        r.m[1][1] = b;
        r.m[2][2] = c;
        return r;
    }
    static Rotation3 from_columns(SpinVector c0, SpinVector c1, SpinVector c2) {
        Rotation3 r;
        for (int i = 0; i < 3; ++i) {
            r.m[i][0] = c0[i];
            r.m[i][1] = c1[i];
            r.m[i][2] = c2[i];
        }
        return r;
    }

    double operator()(int i, int j) const { return m[i][j]; }
    double& operator()(int i, int j) { return m[i][j]; }

    SpinVector column(int j) const { return {m[0][j], m[1][j], m[2][j]}; }

    Rotation3 transpose() const {
        Rotation3 t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t.m[i][j] = m[j][i];
        return t;
    }
    double det() const {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }
    double trace() const { return m[0][0] + m[1][1] + m[2][2]; }

    friend Rotation3 operator*(const Rotation3& a, const Rotation3& b) {
        Rotation3 c;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int k = 0; k < 3; ++k) s += a.m[i][k] * b.m[k][j];
                c.m[i][j] = s;
            }
        return c;
    }
    friend SpinVector operator*(const Rotation3& a, SpinVector v) {
        SpinVector r;
        for (int i = 0; i < 3; ++i) r[i] = a.m[i][0] * v.x + a.m[i][1] * v.y + a.m[i][2] * v.z;
        return r;
    }
};

/// Largest absolute entrywise difference.
inline double max_abs_diff(const Rotation3& a, const Rotation3& b) {
    double d = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) d = std::max(d, std::abs(a.m[i][j] - b.m[i][j]));
    return d;
}

/// max(|R R^T - I|_inf, |det R - 1|)
inline double orthogonality_defect(const Rotation3& r) {
    return std::max(max_abs_diff(r * r.transpose(), Rotation3::identity()), std::abs(r.det() - 1.0));
}

inline Rotation3 power(Rotation3 base, long long k) {
    Rotation3 acc = Rotation3::identity();
    while (k > 0) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

// Reflections used by the period symmetries.
inline const Rotation3 T1 = Rotation3::diag(-1, 1, 1);
inline const Rotation3 T3 = Rotation3::diag(1, 1, -1);
inline const Rotation3 T13 = Rotation3::diag(-1, 1, -1);

inline constexpr double tol_ortho = 1e-10;

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

namespace detail {
inline void require_nonneg(double v, const char* name) {
    if (!std::isfinite(v) || v < 0)
        throw ValidationError(std::string(name) + " must be finite and >= 0");
}
}  // namespace detail

/// Physical drive: energy splitting omega0, ellipse semi-axes F (z drive) and
/// G (y drive), drive frequency omega. hbar = 1.
struct DriveParams {
    double omega0{0}, F{0}, G{0}, omega{1};

    DriveParams() = default;
    DriveParams(double omega0_, double F_, double G_, double omega_)
        : omega0(omega0_), F(F_), G(G_), omega(omega_) {
        detail::require_nonneg(omega0, "omega0");
        detail::require_nonneg(F, "F");
        detail::require_nonneg(G, "G");
        if (!std::isfinite(omega) || omega <= 0) throw ValidationError("omega must be finite and > 0");
    }
};

/// nu = omega0/omega, f = F/omega, g = G/omega; time tau = omega t.
struct DimensionlessParams {
    double nu{0}, f{0}, g{0};

    DimensionlessParams() = default;
    DimensionlessParams(double nu_, double f_, double g_) : nu(nu_), f(f_), g(g_) {
        detail::require_nonneg(nu, "nu");
        detail::require_nonneg(f, "f");
        detail::require_nonneg(g, "g");
    }
};

inline DimensionlessParams to_dimensionless(const DriveParams& p) {
    return {p.omega0 / p.omega, p.F / p.omega, p.G / p.omega};
}

inline DriveParams to_physical(const DimensionlessParams& d, double omega) {
    return {d.nu * omega, d.f * omega, d.g * omega, omega};
}

/// h(tau) = (nu, g cos tau, f sin tau); the equation of motion is S' = h x S.
inline SpinVector field_at(const DimensionlessParams& d, double tau) {
    return {d.nu, d.g * std::cos(tau), d.f * std::sin(tau)};
}

// ---------------------------------------------------------------------------
// (r, alpha) parametrization of the monodromy
// ---------------------------------------------------------------------------

inline double normalize_angle(double a, double period = 2 * std::numbers::pi) {
    double v = std::fmod(a, period);
    if (v < 0) v += period;
    if (v >= period) v -= period;
    return v;
}

struct MonodromyParams {
    double r{0};
    double alpha{0};

    MonodromyParams() = default;
    MonodromyParams(double r_, double alpha_) : r(r_), alpha(normalize_angle(alpha_)) {
        if (!(r >= 0 && r <= 1)) throw ValidationError("r must lie in [0, 1]");
        if (!std::isfinite(alpha_)) throw ValidationError("alpha must be finite");
    }
};

/// R(pi, 0) in terms of (r, alpha).
inline Rotation3 half_monodromy_from_params(const MonodromyParams& p) {
    const double r2 = p.r * p.r;
    const double s = 2 * p.r * std::sqrt(1 - r2);
    const double c2a = std::cos(2 * p.alpha), s2a = std::sin(2 * p.alpha);
    const double ca = std::cos(p.alpha), sa = std::sin(p.alpha);
    Rotation3 q;
    q.m = {{{r2 + (1 - r2) * c2a, (1 - r2) * s2a, s * sa},
            {-(1 - r2) * s2a, (1 - r2) * c2a - r2, s * ca},
            {s * sa, -s * ca, 1 - 2 * r2}}};
    return q;
}

/// R(2 pi, 0) = (T1 R(pi, 0))^2.
inline Rotation3 full_monodromy_from_params(const MonodromyParams& p) {
    const Rotation3 a = T1 * half_monodromy_from_params(p);
    return a * a;
}

struct QuasienergyPair {
    double eps_qu;  // in [0, 1/2]
    double eps_cl;  // 2 eps_qu mod 1
};

inline QuasienergyPair quasienergy_from_r(double r) {
    if (!(r >= 0 && r <= 1)) throw ValidationError("r must lie in [0, 1]");
    const double e = std::asin(r) / std::numbers::pi;
    return {e, normalize_angle(2 * e, 1.0)};
}

/// Fold a dimensionless quasienergy (mod 1, sign-symmetric) into [0, 1/2].
inline double fold_quasienergy(double eps) {
    double e = normalize_angle(eps, 1.0);
    return e > 0.5 ? 1.0 - e : e;
}

/// Energy omega * eps folded into [0, omega/2].
inline double physical_quasienergy(double eps_qu, double omega) { return omega * fold_quasienergy(eps_qu); }

/// Other branches n*omega +- E for n in [-n_max, n_max], sorted ascending.
inline std::vector<double> quasienergy_branches(double energy, double omega, int n_max) {
    std::vector<double> out;
    for (int n = -n_max; n <= n_max; ++n) {
        out.push_back(n * omega + energy);
        out.push_back(n * omega - energy);
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct QuasienergySplit {
    double total{0};
    double geometric{0};
    double dynamical{0};
};

}  // namespace rabi
