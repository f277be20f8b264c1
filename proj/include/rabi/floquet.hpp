#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "rabi/core.hpp"
#include "rabi/numint.hpp"
#include "rabi/pseries.hpp"
#include "rabi/quarter.hpp"

namespace rabi {

// ---------------------------------------------------------------------------
// Fourier coefficients of u-series
// ---------------------------------------------------------------------------

/// cos-coefficients x_0..x_M of sum_n c_n sin^{2n}(tau/2), using
/// sin^{2n}(tau/2) = C(2n,n)/4^n + sum_{mu>=1} (-1)^mu 2 C(2n,n-mu)/4^n cos(mu tau).
inline std::vector<double> u_series_to_fourier(const PowerSeries<double>& c, int M) {
    const int N = c.order();
    if (M > N && N > 0) throw ValidationError("u_series_to_fourier: M exceeds the series order");
    if (M < 0) throw ValidationError("u_series_to_fourier: negative M");
    std::vector<double> out(M + 1, 0.0);
    double w = 1.0;  // C(2n,n)/4^n
    for (int n = 0; n <= N; ++n) {
        if (n > 0) w *= (2.0 * n - 1) / (2.0 * n);
        if (c.c[n] == 0) continue;
        double coef = w;
        out[0] += c.c[n] * coef;
        for (int mu = 1; mu <= std::min(n, M); ++mu) {
            coef = mu == 1 ? -2 * coef * n / (n + 1.0) : -coef * (n - mu + 1.0) / (n + mu);
            out[mu] += c.c[n] * coef;
        }
    }
    return out;
}

struct ZFourier {
    double z0{0};              // secular slope
    std::vector<double> zsin;  // zsin[mu], mu >= 1; zsin[0] unused
};

/// z(tau) = z0 tau + sum z_mu sin(mu tau) from z' = nu y - g cos(tau) x, z(0) = 0.
/// Coefficients of x beyond the arrays are taken as zero.
inline ZFourier z_fourier(const std::vector<double>& xf, const std::vector<double>& yf, const DimensionlessParams& d) {
    const int M = static_cast<int>(std::min(xf.size(), yf.size())) - 1;
    auto xa = [&](int k) { return k >= 0 && k < static_cast<int>(xf.size()) ? xf[k] : 0.0; };
    ZFourier z;
    z.zsin.assign(std::max(M, 0) + 1, 0.0);
    if (M < 0) return z;
    z.z0 = d.nu * yf[0] - 0.5 * d.g * xa(1);
    if (M >= 1) z.zsin[1] = d.nu * yf[1] - d.g * xa(0) - 0.5 * d.g * xa(2);
    for (int mu = 2; mu <= M; ++mu) z.zsin[mu] = (d.nu * yf[mu] - 0.5 * d.g * (xa(mu - 1) + xa(mu + 1))) / mu;
    return z;
}

inline double cos_sum(const std::vector<double>& a, double tau) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * std::cos(k * tau);
    return s;
}

inline double sin_sum(const std::vector<double>& a, double tau) {
    double s = 0;
    for (std::size_t k = 1; k < a.size(); ++k) s += a[k] * std::sin(k * tau);
    return s;
}

// ---------------------------------------------------------------------------
// Propagator from the two basis quarter-solutions plus the period symmetries
// ---------------------------------------------------------------------------

struct BasisFourier {
    std::vector<double> x, y;
    ZFourier z;
};

inline BasisFourier basis_fourier(const PowerSeries<double>& xi, const PowerSeries<double>& eta,
                                  const DimensionlessParams& d, int M) {
    BasisFourier b;
    b.x = u_series_to_fourier(xi, M);
    b.y = u_series_to_fourier(eta, M);
    b.z = z_fourier(b.x, b.y, d);
    return b;
}

struct SeriesPropagator {
    DimensionlessParams params;
    QuarterSolution qs;
    std::array<BasisFourier, 2> basis;  // initial values e_x and e_y
    Rotation3 quarter, half, full;

    /// Basis column j (0: e_x, 1: e_y) at tau in [0, pi/2].
    SpinVector basis_column(int j, double tau) const {
        const double s = std::sin(tau / 2);
        const double u = std::min(0.5, s * s);
        const auto& xi = j == 0 ? qs.xi_x : qs.xi_y;
        const auto& eta = j == 0 ? qs.eta_x : qs.eta_y;
        const auto& z = basis[j].z;
        return {series_evaluate(xi, u).value, series_evaluate(eta, u).value, z.z0 * tau + sin_sum(z.zsin, tau)};
    }

    Rotation3 quarter_at(double tau) const {
        const SpinVector c0 = basis_column(0, tau), c1 = basis_column(1, tau);
        return Rotation3::from_columns(c0, c1, cross(c0, c1));
    }

    /// R(tau, 0) for any real tau.
    Rotation3 at(double tau) const {
        constexpr double pi = std::numbers::pi;
        if (tau < 0) return T3 * at(-tau) * T3;
        if (tau > 2 * pi) {
            const double k = std::floor(tau / (2 * pi));
            double rest = tau - 2 * pi * k;
            long long kk = static_cast<long long>(k);
            if (rest < 0) rest = 0;
            return at(rest) * power(full, kk);
        }
        if (tau <= pi / 2) return quarter_at(tau);
        if (tau <= pi) return T13 * quarter_at(pi - tau) * T13 * half;
        return T1 * at(tau - pi) * T1 * half;
    }

    SpinVector spin(SpinVector s0, double tau) const { return at(tau) * s0; }
};

/// R(pi/2, 0) from the two basis solutions; third column is the cross product.
inline Rotation3 quarter_monodromy(const QuarterSolution& qs) {
    const double tau = std::numbers::pi / 2;
    const int M = qs.order;
    std::array<SpinVector, 2> col;
    for (int j = 0; j < 2; ++j) {
        const auto b = basis_fourier(j == 0 ? qs.xi_x : qs.xi_y, j == 0 ? qs.eta_x : qs.eta_y, qs.params, M);
        // alternating sums at tau = pi/2
        col[j] = {cos_sum(b.x, tau), cos_sum(b.y, tau), b.z.z0 * tau + sin_sum(b.z.zsin, tau)};
    }
    return Rotation3::from_columns(col[0], col[1], cross(col[0], col[1]));
}

/// R(pi, 0) = T13 q^T T13 q with q = R(pi/2, 0).
inline Rotation3 half_monodromy(const Rotation3& q) { return T13 * q.transpose() * T13 * q; }

/// R(2 pi, 0) = (T1 R(pi, 0))^2.
inline Rotation3 full_monodromy(const Rotation3& half) {
    const Rotation3 a = T1 * half;
    return a * a;
}

inline SeriesPropagator build_propagator(const DimensionlessParams& d, int N = 0) {
    SeriesPropagator p;
    p.params = d;
    p.qs = solve_quarter(d, 1.0, 0.0, N);
    const int M = p.qs.order;
    p.basis[0] = basis_fourier(p.qs.xi_x, p.qs.eta_x, d, M);
    p.basis[1] = basis_fourier(p.qs.xi_y, p.qs.eta_y, d, M);
    p.quarter = p.quarter_at(std::numbers::pi / 2);
    p.half = half_monodromy(p.quarter);
    p.full = full_monodromy(p.half);
    return p;
}

inline Rotation3 quarter_monodromy(const DimensionlessParams& d) { return quarter_monodromy(solve_quarter(d)); }

// ---------------------------------------------------------------------------
// r and alpha
// ---------------------------------------------------------------------------

/// r = |R(pi/2,0)_{31} R(pi/2,0)_{12} - R(pi/2,0)_{11} R(pi/2,0)_{32}| = |R(pi/2,0)_{23}|.
inline double r_parameter(const Rotation3& quarter) {
    return std::clamp(std::abs(quarter(2, 0) * quarter(0, 1) - quarter(0, 0) * quarter(2, 1)), 0.0, 1.0);
}

inline double r_parameter(const DimensionlessParams& d) { return r_parameter(quarter_monodromy(d)); }

inline constexpr double tol_alpha_degenerate = 1e-12;

/// Initial angle of the periodic solution in [0, pi): the mean of y vanishes.
inline double alpha_periodic(const QuarterSolution& qs) {
    double sx = 0, sy = 0, w = 1;
    for (int n = 0; n <= qs.order; ++n) {
        if (n > 0) w *= (2.0 * n - 1) / (2.0 * n);
        sx += w * qs.eta_x.c[n];
        sy += w * qs.eta_y.c[n];
    }
    if (std::abs(sx) < tol_alpha_degenerate && std::abs(sy) < tol_alpha_degenerate)
        throw DegenerateError("alpha_periodic: every initial angle is periodic");
    return normalize_angle(-std::atan2(sx, sy), std::numbers::pi);
}

inline double alpha_periodic(const DimensionlessParams& d) { return alpha_periodic(solve_quarter(d)); }

/// (r, alpha) with alpha mod 2 pi read from R(pi, 0).
inline MonodromyParams monodromy_params(const SeriesPropagator& p) {
    const MonodromyParams h = params_from_half(p.half);
    return MonodromyParams(r_parameter(p.quarter), h.alpha);
}

inline MonodromyParams monodromy_params(const DimensionlessParams& d) { return monodromy_params(build_propagator(d)); }

// ---------------------------------------------------------------------------
// Periodic solutions
// ---------------------------------------------------------------------------

inline constexpr int default_harmonics = 12;
inline constexpr double tol_fourier_drop = 1e-10;

struct PeriodicSolution {
    std::vector<double> x, y;  // cos coefficients
    std::vector<double> z;     // sin coefficients, z[0] unused
    double z0{0};              // secular slope
    int M{0};
    double alpha{0};           // initial angle: S(0) = (cos alpha, sin alpha, 0)

    SpinVector at(double tau) const { return {cos_sum(x, tau), cos_sum(y, tau), z0 * tau + sin_sum(z, tau)}; }
};

namespace detail {
inline PeriodicSolution truncate_periodic(const BasisFourier& b, double alpha, int min_harmonics) {
    const int full_m = static_cast<int>(b.x.size()) - 1;
    int M = std::min(min_harmonics, full_m);
    auto dropped = [&](int m) {
        double d = 0;
        for (int k = m + 1; k <= full_m; ++k)
            d = std::max({d, std::abs(b.x[k]), std::abs(b.y[k]), std::abs(b.z.zsin[k])});
        return d;
    };
    while (M < full_m && dropped(M) >= tol_fourier_drop) ++M;
    PeriodicSolution s;
    s.M = M;
    s.alpha = alpha;
    s.x.assign(b.x.begin(), b.x.begin() + M + 1);
    s.y.assign(b.y.begin(), b.y.begin() + M + 1);
    s.z.assign(b.z.zsin.begin(), b.z.zsin.begin() + M + 1);
    s.z0 = b.z.z0;
    return s;
}

inline BasisFourier combine_fourier(const std::array<BasisFourier, 2>& b, double cx, double cy) {
    BasisFourier r;
    const std::size_t n = b[0].x.size();
    r.x.resize(n);
    r.y.resize(n);
    r.z.zsin.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        r.x[k] = cx * b[0].x[k] + cy * b[1].x[k];
        r.y[k] = cx * b[0].y[k] + cy * b[1].y[k];
        r.z.zsin[k] = cx * b[0].z.zsin[k] + cy * b[1].z.zsin[k];
    }
    r.z.z0 = cx * b[0].z.z0 + cy * b[1].z.z0;
    return r;
}
}  // namespace detail

/// Periodic solution started at (cos alpha, sin alpha, 0), alpha from alpha_periodic.
inline PeriodicSolution periodic_solution(const SeriesPropagator& p, int harmonics = default_harmonics) {
    const double alpha = alpha_periodic(p.qs);
    return detail::truncate_periodic(detail::combine_fourier(p.basis, std::cos(alpha), std::sin(alpha)), alpha,
                                     harmonics);
}

inline PeriodicSolution periodic_solution(const DimensionlessParams& d, int harmonics = default_harmonics) {
    return periodic_solution(build_propagator(d), harmonics);
}

/// Half the mean energy from the first Fourier coefficients.
inline double dynamical_from_fourier(const PeriodicSolution& s, const DimensionlessParams& d) {
    const double y1 = s.y.size() > 1 ? s.y[1] : 0.0;
    const double z1 = s.z.size() > 1 ? s.z[1] : 0.0;
    return 0.5 * (d.nu * s.x[0] + 0.5 * d.g * y1 + 0.5 * d.f * z1);
}

// ---------------------------------------------------------------------------
// Quasienergy
// ---------------------------------------------------------------------------

inline constexpr int time_average_samples = 512;

struct TimeAverages {
    double energy{0};      // mean of h.S / 2
    double phase{0};       // mean of (h1 + (h2 y + h3 z)/(1 + x)) / 2
    double min_one_plus_x{0};
};

/// Trapezoid averages over one period of a periodic spin trajectory given by sampler(tau).
template <class Sampler>
TimeAverages time_averages(const DimensionlessParams& d, Sampler sampler, int samples = time_average_samples) {
    TimeAverages a;
    a.min_one_plus_x = 2;
    for (int k = 0; k < samples; ++k) {
        const double tau = 2 * std::numbers::pi * k / samples;
        SpinVector s = sampler(tau);
        s = (1.0 / norm(s)) * s;
        const SpinVector h = field_at(d, tau);
        a.energy += 0.5 * dot(h, s);
        a.phase += 0.5 * (h.x + (h.y * s.y + h.z * s.z) / (1 + s.x));
        a.min_one_plus_x = std::min(a.min_one_plus_x, 1 + s.x);
    }
    a.energy /= samples;
    a.phase /= samples;
    return a;
}

enum class QuasienergyRoute { series, integrator };

struct QuasienergyResult {
    double eps_qu{0};  // arcsin(r)/pi in [0, 1/2]
    double eps_cl{0};
    QuasienergySplit split;
    double r{0}, alpha{0};
    double eps_time_average{0};  // phase-average route, mapped onto eps_qu's sign convention
    double route_mismatch{0};    // |eps_time_average - eps_qu| mod 1
    bool degenerate{false};
    QuasienergyRoute route{QuasienergyRoute::series};
};

struct DegenerateSolutions {
    double beta{0}, alpha{0}, eps_d{0};
    SpinVector s1_0, s2_0, s3_0;  // initial values
    PeriodicSolution s1, s2;
};

/// On the zero-quasienergy manifold every solution is periodic; pick the pair
/// with vanishing (S2) and extremal (S1) mean energy.
inline DegenerateSolutions degenerate_solutions(const SeriesPropagator& p, double tol = 1e-8) {
    const Rotation3& h = p.half;
    if (std::hypot(h(2, 0), h(2, 1)) > std::numbers::pi * tol)
        throw NumericalError("degenerate_solutions: parameters are off the zero-quasienergy manifold");
    const DimensionlessParams& d = p.params;
    auto energy = [&](const BasisFourier& b) {
        return d.nu * b.x[0] + 0.5 * d.g * b.y.at(1) + 0.5 * d.f * b.z.zsin.at(1);
    };
    const double nx = energy(p.basis[0]), ny = energy(p.basis[1]);
    DegenerateSolutions out;
    double beta = std::atan2(-nx, ny);
    if (beta > std::numbers::pi / 2) beta -= std::numbers::pi;
    if (beta <= -std::numbers::pi / 2) beta += std::numbers::pi;
    out.beta = beta;
    double alpha = beta + std::numbers::pi / 2;
    if (nx * std::cos(alpha) + ny * std::sin(alpha) < 0) alpha = beta - std::numbers::pi / 2;
    out.alpha = alpha;
    out.eps_d = 0.5 * std::hypot(nx, ny);
    out.s1_0 = {std::cos(alpha), std::sin(alpha), 0};
    out.s2_0 = {std::cos(beta), std::sin(beta), 0};
    out.s3_0 = cross(out.s1_0, out.s2_0);
    const int M = p.qs.order;
    out.s1 = detail::truncate_periodic(detail::combine_fourier(p.basis, out.s1_0.x, out.s1_0.y), alpha, M);
    out.s2 = detail::truncate_periodic(detail::combine_fourier(p.basis, out.s2_0.x, out.s2_0.y), beta, M);
    return out;
}

inline DegenerateSolutions degenerate_solutions(const DimensionlessParams& d, double tol = 1e-8) {
    return degenerate_solutions(build_propagator(d), tol);
}

inline constexpr double tol_zero_manifold_r = 1e-7;

namespace detail {
inline void fill_from_periodic(QuasienergyResult& q, const DimensionlessParams& d, const MonodromyParams& mp,
                               const std::function<SpinVector(SpinVector, double)>& flow) {
    q.r = mp.r;
    q.alpha = mp.alpha;
    const auto pair = quasienergy_from_r(mp.r);
    q.eps_qu = pair.eps_qu;
    q.eps_cl = pair.eps_cl;
    const SpinVector n{std::cos(mp.alpha), std::sin(mp.alpha), 0};
    // The solution from -n carries +eps_qu; from +n it carries -eps_qu. Use the
    // orientation that keeps away from x = -1, where the phase integrand blows up.
    const TimeAverages minus = time_averages(d, [&](double t) { return flow(-n, t); });
    const TimeAverages plus = time_averages(d, [&](double t) { return flow(n, t); });
    const bool use_minus = minus.min_one_plus_x >= plus.min_one_plus_x;
    q.eps_time_average = normalize_angle(use_minus ? minus.phase : -plus.phase, 1.0);
    const double diff = normalize_angle(q.eps_time_average - q.eps_qu, 1.0);
    q.route_mismatch = std::min(diff, 1.0 - diff);
    q.split.total = q.eps_qu;
    q.split.dynamical = minus.energy;
    q.split.geometric = q.eps_qu - minus.energy;
}
}  // namespace detail

/// Dimensionless quasienergy by the series route; falls back to the
/// integrator when the series cannot be built.
inline QuasienergyResult quasienergy(const DimensionlessParams& d, double tol = default_ode_tol) {
    QuasienergyResult q;
    std::optional<SeriesPropagator> p;
    try {
        p = build_propagator(d);
    } catch (const NumericalError&) {
    }
    if (p) {
        const MonodromyParams mp = monodromy_params(*p);
        detail::fill_from_periodic(q, d, mp, [&](SpinVector s0, double t) { return p->spin(s0, t); });
        if (mp.r < tol_zero_manifold_r) {
            try {
                const auto ds = degenerate_solutions(*p, 1e-6);
                q.degenerate = true;
                q.split = {q.eps_qu, q.eps_qu - ds.eps_d, ds.eps_d};
            } catch (const NumericalError&) {
            }
        }
        return q;
    }
    q.route = QuasienergyRoute::integrator;
    const MonodromyParams mp = monodromy_params_numeric(d, tol);
    const int n = time_average_samples;
    std::vector<double> times(n + 1);
    for (int k = 0; k <= n; ++k) times[k] = 2 * std::numbers::pi * k / n;
    auto sampled = [&](SpinVector s0) { return integrate_classical_at(d, s0, times, tol); };
    const SpinVector nv{std::cos(mp.alpha), std::sin(mp.alpha), 0};
    const Trajectory tm = sampled(-nv), tp = sampled(nv);
    auto lookup = [&](double t) { return static_cast<std::size_t>(std::lround(t / (2 * std::numbers::pi) * n)); };
    detail::fill_from_periodic(q, d, mp, [&](SpinVector s0, double t) {
        return (s0.x == -nv.x && s0.y == -nv.y ? tm : tp).spin[lookup(t)];
    });
    return q;
}

/// Physical quasienergy omega * eps in [0, omega/2].
inline double quasienergy_physical(const DriveParams& p) {
    return physical_quasienergy(quasienergy(to_dimensionless(p)).eps_qu, p.omega);
}

// ---------------------------------------------------------------------------
// Zero-quasienergy curve
// ---------------------------------------------------------------------------

/// Series for G on the zero curve at omega0 = F = 1, in powers of (omega - 1).
inline double zero_curve_series_G(double omega) {
    static constexpr std::array<double, 6> c{1.0, 2.0, -5.0 / 6, 49.0 / 36, -577.0 / 240, 58357.0 / 12960};
    const double x = omega - 1;
    double s = 0;
    for (int k = 5; k >= 0; --k) s = s * x + c[k];
    return s;
}

/// First-order zero-curve estimate about omega1 = (F^2 + omega0^2)/(2 omega0), for general F, omega0.
inline double zero_curve_first_order_G(double omega0, double F, double omega) {
    if (!(omega0 > 0 && F > 0)) throw ValidationError("zero_curve_first_order_G: need omega0 > 0 and F > 0");
    const double F2 = F * F, F4 = F2 * F2, w2 = omega0 * omega0, w3 = w2 * omega0, w4 = w2 * w2;
    const double omega1 = (F2 + w2) / (2 * omega0);
    const double num = -60 * F4 + 50 * F4 * omega0 - 100 * F2 * w2 + 71 * F2 * w3 - 25 * w4;
    const double den = F * (30 * F4 + 20 * F2 * omega0 + 67 * F2 * w2 + 10 * w3 + 65 * w4);
    return F - 6 * num * (omega - omega1) / den;
}

/// omega where the series zero_curve_series_G equals G (searched in [0.5, 1]).
inline double zero_curve_series_omega(double G) {
    auto f = [G](double w) { return zero_curve_series_G(w) - G; };
    if (f(0.5) * f(1.0) > 0) throw NumericalError("zero_curve_series_omega: no root in [0.5, 1]");
    const auto r = boost::math::tools::bisect(f, 0.5, 1.0, [](double a, double b) { return std::abs(b - a) < 1e-14; });
    return 0.5 * (r.first + r.second);
}

namespace detail {
/// Third row of R(pi, 0) restricted to its first two entries; equals pi times
/// the secular slopes of the two basis solutions and vanishes exactly on the zero curve.
inline std::array<double, 2> secular_vector(const DriveParams& p) {
    const Rotation3 h = build_propagator(to_dimensionless(p)).half;
    return {h(2, 0), h(2, 1)};
}

/// Root of the secular vector along a one-parameter family, bracketed by a scan.
template <class Family>
double zero_curve_root(Family family, double lo, double hi, int steps, const char* what) {
    std::vector<double> grid(steps + 1);
    std::vector<std::array<double, 2>> vec(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        grid[i] = lo + (hi - lo) * i / steps;
        vec[i] = secular_vector(family(grid[i]));
    }
    // The vector shrinks to zero and comes back reversed; take the first such
    // interval from the top of the range.
    int best = -1;
    for (int i = steps; i-- > 0;) {
        const auto& a = vec[i];
        const auto& b = vec[i + 1];
        const double na = std::hypot(a[0], a[1]), nb = std::hypot(b[0], b[1]);
        if (na == 0) return grid[i];
        if (nb == 0) return grid[i + 1];
        if ((a[0] * b[0] + a[1] * b[1]) / (na * nb) < -0.5) {
            best = i;
            break;
        }
    }
    if (best < 0) throw NumericalError(std::string(what) + ": no sign change of the secular term in bracket");
    const auto ref = vec[best];
    auto proj = [&](double v) {
        const auto s = secular_vector(family(v));
        return s[0] * ref[0] + s[1] * ref[1];
    };
    const auto r = boost::math::tools::bisect(proj, grid[best], grid[best + 1],
                                              [](double a, double b) { return std::abs(b - a) < 1e-10; });
    const double root = 0.5 * (r.first + r.second);
    const auto s = secular_vector(family(root));
    if (std::hypot(s[0], s[1]) > 1e-6)
        throw NumericalError(std::string(what) + ": bisection converged to a non-root");
    return root;
}
}  // namespace detail

/// G on the zero-quasienergy curve for given omega0, F, omega.
inline double zero_quasienergy_G(double omega0, double F, double omega) {
    double est = std::abs(F - omega0) < 1e-12 * std::max(1.0, omega0) ? omega0 * zero_curve_series_G(omega / omega0)
                                                                        : zero_curve_first_order_G(omega0, F, omega);
    if (!(est > 0)) est = F;
    auto family = [&](double G) { return DriveParams(omega0, F, G, omega); };
    for (double width : {0.25, 0.6}) {
        const double lo = std::max(1e-6, est * (1 - width) - 0.02), hi = est * (1 + width) + 0.02;
        try {
            return detail::zero_curve_root(family, lo, hi, 24, "zero_quasienergy_G");
        } catch (const NumericalError&) {
            if (width > 0.5) throw;
        }
    }
    throw NumericalError("zero_quasienergy_G: no root");
}

/// Largest zero in omega of the quasienergy below omega_hi for given omega0, F, G.
inline double zero_quasienergy_omega(double omega0, double F, double G, double omega_lo, double omega_hi,
                                     int steps = 24) {
    if (!(omega_lo > 0 && omega_hi > omega_lo)) throw ValidationError("zero_quasienergy_omega: bad bracket");
    auto family = [&](double w) { return DriveParams(omega0, F, G, w); };
    return detail::zero_curve_root(family, omega_lo, omega_hi, steps, "zero_quasienergy_omega");
}

/// Same, bracketed around the series estimate (omega0 = F only).
inline double zero_quasienergy_omega(double omega0, double F, double G) {
    if (std::abs(F - omega0) > 1e-12 * std::max(1.0, omega0))
        throw ValidationError("zero_quasienergy_omega: automatic bracket needs F = omega0");
    const double est = omega0 * zero_curve_series_omega(G / omega0);
    return zero_quasienergy_omega(omega0, F, G, est - 0.05 * omega0, est + 0.05 * omega0);
}

}  // namespace rabi
