#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rabi/core.hpp"
#include "rabi/pseries.hpp"

namespace rabi {

// Quarter-period solution: x(tau) = X(u), y(tau) = Y(u) with u = sin^2(tau/2),
// where X and Y solve third-order linear ODEs with polynomial coefficients.
// The forward recurrences are numerically unstable (parasitic solutions grow
// like the inverse distance to the nearest singular point), so they run in
// extended precision and only the final coefficients are rounded to double.

template <unsigned Digits>
using mpfloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>,
                                              boost::multiprecision::et_off>;

template <class T>
struct ThirdOrderODE {
    std::array<Polynomial<T>, 4> p;  // sum_n p[n](u) X^(n)(u) = 0
};

namespace detail {
template <class T>
struct PolyKit {
    Polynomial<T> u{T(0), T(1)};
    Polynomial<T> one{T(1)};
    Polynomial<T> k(const T& v) const { return Polynomial<T>{v}; }
    static Polynomial<T> pow(const Polynomial<T>& a, int e) {
        Polynomial<T> r{T(1)};
        for (int i = 0; i < e; ++i) r = r * a;
        return r;
    }
};
}  // namespace detail

/// Coefficients of the X-equation; p3 = u (1 - u) (...), so u = 0 and u = 1 are singular.
template <class T = double>
ThirdOrderODE<T> ode_coeffs_X(const DimensionlessParams& d) {
    detail::PolyKit<T> K;
    const T nu(d.nu), f(d.f), g(d.g);
    const auto u = K.u;
    const auto um1u = (u - K.one) * u;                 // (u - 1) u
    const auto w = K.one - K.k(T(2)) * u;              // 1 - 2u
    const auto w2 = w * w;
    const auto core = K.k(T(4) * f * f * nu) * um1u;  // 4 f^2 nu (u-1) u

    ThirdOrderODE<T> o;
    o.p[3] = u * (K.one - u) * (core + K.k(T(f * g)) - K.k(T(g * g * nu)) * w2);
    o.p[2] = K.k(T(-0.5)) * (K.k(T(2)) * u - K.one) *
             (core + K.k(T(3) * f * g) + K.k(T(g * g * nu)) * (K.k(T(-4)) * um1u - K.k(T(3))));
    o.p[1] = K.k(T(-16) * f * f * f * f * nu) * um1u * um1u - K.k(T(4) * f * f * f * g) * um1u +
             K.k(T(4) * f * f * nu) * um1u * (K.k(T(2) * g * g) * w2 + K.k(T(nu * nu))) + K.k(T(f * g * g * g)) * w2 +
             K.k(T(3) * f * g * nu * nu) -
             K.k(T(g * g * nu)) * (K.k(T(g * g)) * w2 * w2 + K.k(T(nu * nu)) * w2 + K.k(T(2)));
    o.p[0] = K.k(T(-2) * (f - g) * (f + g)) * (K.k(T(2)) * u - K.one) *
             (core + K.k(T(3) * f * g) - K.k(T(g * g * nu)) * w2);
    return o;
}

/// Common factor of the Y-equation coefficients; the equation is unusable when it vanishes.
inline double y_equation_factor(const DimensionlessParams& d) { return d.f * d.f * d.g + d.f * d.nu + d.g * d.nu * d.nu; }

/// Coefficients of the Y-equation with the common factor f^2 g + f nu + g nu^2 divided out.
template <class T = double>
ThirdOrderODE<T> ode_coeffs_Y(const DimensionlessParams& d) {
    const double kf = y_equation_factor(d);
    const double scale = std::max({1.0, d.nu, d.f, d.g});
    if (kf <= 1e-14 * scale * scale * scale) throw DegenerateError("Y-equation degenerate: f^2 g + f nu + g nu^2 = 0");
    detail::PolyKit<T> K;
    const T nu(d.nu), f(d.f), g(d.g);
    const auto u = K.u;
    const auto um1u = (u - K.one) * u;
    const auto w = K.one - K.k(T(2)) * u;
    const auto w2 = w * w;
    const auto inner8 = K.k(T(-8)) * um1u - K.k(T(3));  // -8 (u-1) u - 3
    const auto a = K.k(T(4) * f * f * g) * um1u;          // 4 f^2 g (u-1) u

    ThirdOrderODE<T> o;
    o.p[3] = um1u * detail::PolyKit<T>::pow(-w, 3) * (a - K.k(T(f * nu + g * nu * nu)));
    o.p[2] = K.k(T(0.5)) * w2 * (a + K.k(T(f * nu)) * inner8 + K.k(T(g * nu * nu)) * inner8);
    o.p[1] = w2 * (-w) *
             (K.k(T(16) * f * f * f * f * g) * um1u * um1u - K.k(T(4) * f * f * f * nu) * um1u -
              K.k(T(4) * f * f * g) * um1u * (K.k(T(g * g)) * w2 + K.k(T(2) * nu * nu)) +
              K.k(T(f * nu)) * (K.k(T(3) * g * g) * w2 + K.k(T(nu * nu))) + K.k(T(g * g * g * nu * nu)) * w2 +
              K.k(T(g * nu * nu * nu * nu)));
    o.p[0] = K.k(T(2)) * w2 *
             (K.k(T(4) * f * f * f * f * g) * um1u + K.k(T(f * f * f * nu)) * inner8 +
              K.k(T(f * f * g * nu * nu)) * (K.k(T(4)) * um1u - K.one) - K.k(T(f * nu * nu * nu + g * nu * nu * nu * nu)));
    return o;
}

// ---------------------------------------------------------------------------
// tau-Taylor expansion and conversion to u-series
// ---------------------------------------------------------------------------

template <class T>
struct TauTaylor {
    std::vector<T> x, y, z;  // coefficients of tau^k, k = 0..order
};

/// Term-wise recursion of S' = h x S about tau = 0 with S(0) = s0, z(0) = 0.
template <class T = double>
TauTaylor<T> tau_taylor(const DimensionlessParams& d, SpinVector s0, int order) {
    if (s0.z != 0) throw ValidationError("tau_taylor: requires z(0) = 0");
    if (order < 0) throw ValidationError("tau_taylor: negative order");
    const T nu(d.nu), f(d.f), g(d.g);
    std::vector<T> cs(order + 1, T(0)), sn(order + 1, T(0));
    T fact(1);
    for (int k = 0; k <= order; ++k) {
        if (k > 0) fact *= T(k);
        const T term = T(1) / fact;
        if (k % 2 == 0)
            cs[k] = (k / 2) % 2 ? T(-term) : term;
        else
            sn[k] = ((k - 1) / 2) % 2 ? T(-term) : term;
    }
    TauTaylor<T> t;
    t.x.assign(order + 1, T(0));
    t.y.assign(order + 1, T(0));
    t.z.assign(order + 1, T(0));
    t.x[0] = T(s0.x);
    t.y[0] = T(s0.y);
    for (int k = 0; k < order; ++k) {
        T cz(0), sy(0), sx(0), cx(0);
        for (int i = 0; i <= k; ++i) {
            if (cs[i] != T(0)) {
                cz += cs[i] * t.z[k - i];
                cx += cs[i] * t.x[k - i];
            }
            if (sn[i] != T(0)) {
                sy += sn[i] * t.y[k - i];
                sx += sn[i] * t.x[k - i];
            }
        }
        const T kp1(k + 1);
        t.x[k + 1] = (g * cz - f * sy) / kp1;
        t.y[k + 1] = (f * sx - nu * t.z[k]) / kp1;
        t.z[k + 1] = (nu * t.y[k] - g * cx) / kp1;
    }
    return t;
}

/// v(u) with v = tau^2 and u = sin^2(tau/2), obtained by reverting
/// u(v) = (1 - cos sqrt(v))/2 = sum_k (-1)^(k+1) v^k / (2 (2k)!).
template <class T = double>
PowerSeries<T> v_of_u_by_reversion(int order) {
    PowerSeries<T> uv = PowerSeries<T>::zero(order);
    T fact(1);
    for (int k = 1; k <= order; ++k) {
        fact *= T(2 * k - 1) * T(2 * k);
        const T term = T(1) / (T(2) * fact);
        uv.c[k] = k % 2 ? term : T(-term);
    }
    return series_revert(uv);
}

/// Same series from 4 arcsin(sqrt u)^2 = sum_n 2 (4^n) u^n / (n^2 C(2n, n)).
template <class T = double>
PowerSeries<T> v_of_u_closed_form(int order) {
    PowerSeries<T> v = PowerSeries<T>::zero(order);
    T ratio(1);  // 4^n / C(2n, n)
    for (int n = 1; n <= order; ++n) {
        ratio *= T(4) * T(n) / T(2 * n - 1) / T(2);  // 4^n/C(2n,n) from 4^(n-1)/C(2n-2,n-1)
        v.c[n] = T(2) * ratio / (T(n) * T(n));
    }
    return v;
}

/// Even tau-series a_0 + a_2 tau^2 + ... rewritten as a series in u.
template <class T>
PowerSeries<T> even_taylor_to_u(const std::vector<T>& tay, const PowerSeries<T>& v_of_u) {
    const int n = v_of_u.order();
    PowerSeries<T> in_v = PowerSeries<T>::zero(n);
    for (int k = 0; k <= n && 2 * k < static_cast<int>(tay.size()); ++k) in_v.c[k] = tay[2 * k];
    if (2 * n >= static_cast<int>(tay.size())) throw ValidationError("even_taylor_to_u: tau-series too short");
    return series_compose(in_v, v_of_u);
}

template <class T = double>
std::vector<T> xi_seeds(const DimensionlessParams& d, double x0, double y0, int count = 5) {
    const auto tay = tau_taylor<T>(d, {x0, y0, 0}, 2 * count + 2);
    const auto s = even_taylor_to_u(tay.x, v_of_u_by_reversion<T>(count - 1));
    return s.c;
}

template <class T = double>
std::vector<T> eta_seeds(const DimensionlessParams& d, double x0, double y0, int count = 8) {
    const auto tay = tau_taylor<T>(d, {x0, y0, 0}, 2 * count + 2);
    const auto s = even_taylor_to_u(tay.y, v_of_u_by_reversion<T>(count - 1));
    return s.c;
}

// ---------------------------------------------------------------------------
// Quarter solution
// ---------------------------------------------------------------------------

enum class SeriesRoute { recurrence, composition };

struct QuarterSolution {
    DimensionlessParams params;
    int order{0};
    // Basis runs: (x0, y0) = (1, 0) -> *_x, (0, 1) -> *_y.
    PowerSeries<double> xi_x, xi_y, eta_x, eta_y;
    SeriesRoute xi_route{SeriesRoute::recurrence}, eta_route{SeriesRoute::recurrence};
    int digits{0};          // working precision (decimal digits)
    double seed_check{0};   // recurrence vs tau-series mismatch just past the seeds, relative
    double tail{0};         // largest |c_N| 2^-N over the four series
    double x0{1}, y0{0};    // initial condition of the combined solution

    PowerSeries<double> xi() const { return combine(xi_x, xi_y, x0, y0); }
    PowerSeries<double> eta() const { return combine(eta_x, eta_y, x0, y0); }

    static PowerSeries<double> combine(const PowerSeries<double>& a, const PowerSeries<double>& b, double ca,
                                       double cb) {
        PowerSeries<double> r = PowerSeries<double>::zero(std::min(a.order(), b.order()));
        for (int k = 0; k <= r.order(); ++k) r.c[k] = ca * a.c[k] + cb * b.c[k];
        return r;
    }
};

inline constexpr int seed_count_x = 5;
inline constexpr int seed_count_y = 8;
inline constexpr int max_series_order = 200;

namespace detail {

/// Smallest nonzero root modulus of a u^2 + b u + c (infinity if none).
inline double min_root_modulus(double a, double b, double c) {
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (scale == 0) return std::numeric_limits<double>::infinity();
    a /= scale, b /= scale, c /= scale;
    std::vector<std::complex<double>> roots;
    if (std::abs(a) < 1e-14) {
        if (std::abs(b) > 1e-14) roots.push_back(-c / b);
    } else {
        const std::complex<double> disc = std::sqrt(std::complex<double>(b * b - 4 * a * c));
        roots.push_back((-b + disc) / (2 * a));
        roots.push_back((-b - disc) / (2 * a));
    }
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : roots)
        if (std::abs(r) > 1e-14) m = std::min(m, std::abs(r));
    return m;
}

/// Per-coefficient growth of parasitic solutions relative to the physical one.
inline double recurrence_growth(const DimensionlessParams& d) {
    const double f = d.f, g = d.g, nu = d.nu;
    // X: u(1-u)(A(u^2 - u) + c),  A = 4 nu (f^2 - g^2), c = g (f - g nu)
    const double ax = 4 * nu * (f * f - g * g);
    double rx = std::min(1.0, min_root_modulus(ax, -ax, g * (f - g * nu)));
    // Y: (u-1) u (2u-1)^3 (4 f^2 g (u^2 - u) - f nu - g nu^2)
    const double ay = 4 * f * f * g;
    double ry = std::min(0.5, min_root_modulus(ay, -ay, -(f * nu + g * nu * nu)));
    return 1.0 / std::min(rx, ry);
}

inline int recurrence_digits(const DimensionlessParams& d, int N) {
    return 30 + static_cast<int>(std::ceil(N * std::log10(std::max(1.0, recurrence_growth(d)))));
}

inline int composition_digits(const DimensionlessParams& d) {
    const double h = d.nu + d.f + d.g;
    return 30 + static_cast<int>(std::ceil(h * std::numbers::pi / std::log(10.0)));
}

template <class T>
PowerSeries<double> to_double(const PowerSeries<T>& s) {
    return s.template cast<double>();
}

template <class T>
double rel_diff(const T& a, const T& b) {
    using std::abs;
    const T m = std::max({T(abs(a)), T(abs(b)), T(1e-300)});
    return static_cast<double>(T(abs(a - b)) / m);
}

/// Series of x (which = 0) or y (which = 1) straight from the tau-Taylor expansion.
template <class T>
PowerSeries<double> composition_series(const DimensionlessParams& d, double x0, double y0, int which, int N) {
    const auto tay = tau_taylor<T>(d, {x0, y0, 0}, 2 * N + 2);
    const auto s = even_taylor_to_u(which == 0 ? tay.x : tay.y, v_of_u_closed_form<T>(N));
    return to_double(s);
}

struct ComponentResult {
    PowerSeries<double> bx, by;
    double seed_check{0};
};

/// Recurrence for one component (0 = X, 1 = Y) for both basis initial conditions.
template <class T>
ComponentResult recurrence_component(const DimensionlessParams& d, int which, int N) {
    const int count = which == 0 ? seed_count_x : seed_count_y;
    const auto ode = which == 0 ? ode_coeffs_X<T>(d) : ode_coeffs_Y<T>(d);
    ComponentResult out;
    for (int b = 0; b < 2; ++b) {
        const double x0 = b == 0 ? 1.0 : 0.0, y0 = 1.0 - x0;
        std::vector<T> seeds =
            which == 0 ? xi_seeds<T>(d, x0, y0, count + 2) : eta_seeds<T>(d, x0, y0, count + 2);
        const std::vector<T> extra(seeds.begin() + count, seeds.end());
        seeds.resize(count);
        const auto s = recurrence_from_poly_ode(ode.p, seeds, std::max(N, count + 1));
        for (std::size_t i = 0; i < extra.size(); ++i)
            out.seed_check = std::max(out.seed_check, rel_diff(s.c[count + i], extra[i]));
        (b == 0 ? out.bx : out.by) = to_double(s).truncated(N);
    }
    return out;
}

template <class F>
auto with_precision(int digits, F&& fn) {
    if (digits <= 50) return fn.template operator()<mpfloat<50>>();
    if (digits <= 100) return fn.template operator()<mpfloat<100>>();
    if (digits <= 200) return fn.template operator()<mpfloat<200>>();
    return fn.template operator()<mpfloat<400>>();
}

inline double series_tail(const PowerSeries<double>& s) {
    const int n = s.order();
    double t = 0;
    for (int k = std::max(0, n - 1); k <= n; ++k) t = std::max(t, std::abs(s.c[k]) * std::pow(0.5, k));
    return t;
}

}  // namespace detail

/// Basis series at a fixed truncation order N.
inline QuarterSolution solve_quarter_basis(const DimensionlessParams& d, int N) {
    if (N < 1 || N > 4 * max_series_order) throw ValidationError("solve_quarter: order out of range");
    QuarterSolution q;
    q.params = d;
    q.order = N;
    const int rec_digits = detail::recurrence_digits(d, N);
    const int comp_digits = detail::composition_digits(d);
    q.digits = rec_digits;

    for (int which = 0; which < 2; ++which) {
        std::optional<detail::ComponentResult> res;
        if (rec_digits <= 400) {
            try {
                res = detail::with_precision(rec_digits, [&]<class T>() {
                    return detail::recurrence_component<T>(d, which, N);
                });
            } catch (const DegenerateError&) {
            } catch (const NumericalError&) {
            } catch (const ValidationError&) {
            }
        }
        // A large seed mismatch means the recurrence lost its footing (near-degenerate multipliers).
        if (res && res->seed_check > 1e-20) res.reset();
        if (!res) {
            if (comp_digits > 400) throw NumericalError("quarter series: required precision exceeds 400 digits");
            detail::ComponentResult c;
            detail::with_precision(comp_digits, [&]<class T>() {
                c.bx = detail::composition_series<T>(d, 1.0, 0.0, which, N);
                c.by = detail::composition_series<T>(d, 0.0, 1.0, which, N);
                return 0;
            });
            res = c;
            (which == 0 ? q.xi_route : q.eta_route) = SeriesRoute::composition;
            q.digits = std::max(q.digits, comp_digits);
        }
        q.seed_check = std::max(q.seed_check, res->seed_check);
        if (which == 0) {
            q.xi_x = res->bx;
            q.xi_y = res->by;
        } else {
            q.eta_x = res->bx;
            q.eta_y = res->by;
        }
    }
    for (const auto* s : {&q.xi_x, &q.xi_y, &q.eta_x, &q.eta_y}) q.tail = std::max(q.tail, detail::series_tail(*s));
    return q;
}

/// Adaptive order: start at 40 and raise until the last coefficients at
/// u = 1/2 drop below 1e-12 or the order reaches 200.
inline QuarterSolution solve_quarter(const DimensionlessParams& d, double x0 = 1.0, double y0 = 0.0, int N = 0) {
    QuarterSolution q;
    if (N > 0) {
        q = solve_quarter_basis(d, N);
    } else {
        for (int n : {40, 80, 120, 160, max_series_order}) {
            q = solve_quarter_basis(d, n);
            if (q.tail < 1e-12) break;
        }
    }
    q.x0 = x0;
    q.y0 = y0;
    return q;
}

enum class Component { x, y };

/// x(tau) or y(tau) of the combined solution for tau in [0, pi/2].
inline double evaluate_component(const QuarterSolution& qs, Component which, double tau) {
    if (!(tau >= -1e-14 && tau <= std::numbers::pi / 2 + 1e-12))
        throw ValidationError("evaluate_component: tau outside [0, pi/2]");
    const double s = std::sin(tau / 2);
    const double u = std::min(0.5, s * s);
    return series_evaluate(which == Component::x ? qs.xi() : qs.eta(), u).value;
}

}  // namespace rabi
