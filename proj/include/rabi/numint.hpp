#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "rabi/core.hpp"

namespace rabi {

// Adaptive Dormand-Prince 5(4) with dense output. No renormalization:
// norm drift is reported as a diagnostic.

inline constexpr double default_ode_tol = 1e-11;

struct Trajectory {
    std::vector<double> tau;
    std::vector<SpinVector> spin;
    std::size_t steps{0};
    double max_norm_drift{0};
};

struct QuantumState {
    std::complex<double> psi1{1}, psi2{0};
};

struct QuantumTrajectory {
    std::vector<double> tau;
    std::vector<QuantumState> state;
    std::size_t steps{0};
    double max_norm_drift{0};
};

namespace detail {

inline void check_tol(double tol) {
    if (!(tol > 1e-14 && tol < 1e-3)) throw ValidationError("integrator tolerance must lie in (1e-14, 1e-3)");
}

inline std::vector<double> uniform_times(double t0, double t1, int samples) {
    if (samples < 2) throw ValidationError("need at least two samples");
    std::vector<double> t(samples);
    for (int i = 0; i < samples; ++i) t[i] = t0 + (t1 - t0) * i / (samples - 1);
    t.back() = t1;
    return t;
}

/// Integrate from times.front() and call obs(state, t) at every entry of times
/// (monotone, forward or backward). Returns the number of steps.
template <class State, class Rhs, class Obs>
std::size_t integrate_at(Rhs rhs, State& x, const std::vector<double>& times, double tol, Obs obs) {
    namespace ode = boost::numeric::odeint;
    check_tol(tol);
    if (times.size() == 1) {
        obs(x, times.front());
        return 0;
    }
    const double span = times.back() - times.front();
    if (span == 0) {
        for (double t : times) obs(x, t);
        return 0;
    }
    auto stepper = ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<State>());
    const double dt0 = std::copysign(std::min(1e-3, std::abs(span)), span);
    try {
        return ode::integrate_times(stepper, rhs, x, times.begin(), times.end(), dt0, obs,
                                    ode::max_step_checker(2'000'000));
    } catch (const std::exception& e) {
        throw NumericalError(std::string("integrator failure: ") + e.what());
    }
}

using State3 = std::array<double, 3>;
using State9 = std::array<double, 9>;
using State4 = std::array<double, 4>;

}  // namespace detail

/// S' = h(tau) x S from tau = tau0, sampled at the given times (times.front()
/// must equal the start time).
inline Trajectory integrate_classical_at(const DimensionlessParams& d, SpinVector s0, const std::vector<double>& times,
                                         double tol = default_ode_tol) {
    auto rhs = [d](const detail::State3& s, detail::State3& ds, double tau) {
        const SpinVector h = field_at(d, tau);
        ds[0] = h.y * s[2] - h.z * s[1];
        ds[1] = h.z * s[0] - h.x * s[2];
        ds[2] = h.x * s[1] - h.y * s[0];
    };
    Trajectory out;
    const double n0 = norm(s0);
    detail::State3 x{s0.x, s0.y, s0.z};
    out.steps = detail::integrate_at(rhs, x, times, tol, [&](const detail::State3& s, double t) {
        SpinVector v{s[0], s[1], s[2]};
        out.tau.push_back(t);
        out.spin.push_back(v);
        out.max_norm_drift = std::max(out.max_norm_drift, std::abs(norm(v) - n0));
    });
    return out;
}

/// Trajectory on [0, tau_end] (tau_end may be negative) at `samples` uniform points.
inline Trajectory integrate_classical(const DimensionlessParams& d, SpinVector s0, double tau_end,
                                      double tol = default_ode_tol, int samples = 201) {
    return integrate_classical_at(d, s0, detail::uniform_times(0.0, tau_end, samples), tol);
}

/// R(tau1, tau0): columns are solutions started from the unit vectors at tau0.
inline Rotation3 propagator_numeric(const DimensionlessParams& d, double tau0, double tau1,
                                    double tol = default_ode_tol) {
    auto rhs = [d](const detail::State9& s, detail::State9& ds, double tau) {
        const SpinVector h = field_at(d, tau);
        for (int j = 0; j < 3; ++j) {
            const double x = s[j], y = s[3 + j], z = s[6 + j];
            ds[j] = h.y * z - h.z * y;
            ds[3 + j] = h.z * x - h.x * z;
            ds[6 + j] = h.x * y - h.y * x;
        }
    };
    detail::State9 x{1, 0, 0, 0, 1, 0, 0, 0, 1};
    detail::integrate_at(rhs, x, {tau0, tau1}, tol, [](const detail::State9&, double) {});
    Rotation3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i][j] = x[3 * i + j];
    return r;
}

inline Rotation3 monodromy_numeric(const DimensionlessParams& d, double tau, double tol = default_ode_tol) {
    return propagator_numeric(d, 0.0, tau, tol);
}

// ---------------------------------------------------------------------------
// Spin-1/2 Schroedinger equation  i psi' = (1/2)(nu s1 + g cos(tau) s2 + f sin(tau) s3) psi
// ---------------------------------------------------------------------------

namespace detail {
inline auto schrodinger_rhs(const DimensionlessParams& d) {
    // psi = (a + i b, c + i e) packed as (a, b, c, e)
    return [d](const State4& s, State4& ds, double tau) {
        const std::complex<double> p1(s[0], s[1]), p2(s[2], s[3]);
        const double h3 = d.f * std::sin(tau);
        const std::complex<double> off(d.nu, -d.g * std::cos(tau));  // <1|H|2> * 2
        const std::complex<double> minus_i(0, -1);
        const std::complex<double> d1 = minus_i * 0.5 * (h3 * p1 + off * p2);
        const std::complex<double> d2 = minus_i * 0.5 * (std::conj(off) * p1 - h3 * p2);
        ds = {d1.real(), d1.imag(), d2.real(), d2.imag()};
    };
}
}  // namespace detail

inline QuantumTrajectory integrate_schrodinger(const DimensionlessParams& d, QuantumState psi0, double tau_end,
                                               double tol = default_ode_tol, int samples = 201) {
    const double n0 = std::norm(psi0.psi1) + std::norm(psi0.psi2);
    if (std::abs(n0 - 1) > 1e-12) throw ValidationError("integrate_schrodinger: initial state must be normalized");
    detail::State4 x{psi0.psi1.real(), psi0.psi1.imag(), psi0.psi2.real(), psi0.psi2.imag()};
    QuantumTrajectory out;
    out.steps = detail::integrate_at(detail::schrodinger_rhs(d), x, detail::uniform_times(0.0, tau_end, samples), tol,
                                     [&](const detail::State4& s, double t) {
                                         QuantumState q{{s[0], s[1]}, {s[2], s[3]}};
                                         out.tau.push_back(t);
                                         out.state.push_back(q);
                                         const double nn = std::norm(q.psi1) + std::norm(q.psi2);
                                         out.max_norm_drift = std::max(out.max_norm_drift, std::abs(nn - 1));
                                     });
    return out;
}

/// 2x2 propagator U(tau, 0), row-major.
using Unitary2 = std::array<std::complex<double>, 4>;

inline Unitary2 quantum_propagator(const DimensionlessParams& d, double tau, double tol = default_ode_tol) {
    Unitary2 u{};
    for (int col = 0; col < 2; ++col) {
        detail::State4 x = col == 0 ? detail::State4{1, 0, 0, 0} : detail::State4{0, 0, 1, 0};
        detail::integrate_at(detail::schrodinger_rhs(d), x, {0.0, tau}, tol, [](const detail::State4&, double) {});
        u[col] = {x[0], x[1]};
        u[2 + col] = {x[2], x[3]};
    }
    return u;
}

/// (<s1>, <s2>, <s3>) for a pure state.
inline SpinVector projector_bloch(const QuantumState& psi) {
    const std::complex<double> c = std::conj(psi.psi1) * psi.psi2;
    return {2 * c.real(), 2 * c.imag(), std::norm(psi.psi1) - std::norm(psi.psi2)};
}

// ---------------------------------------------------------------------------
// (r, alpha) read off numerically integrated monodromies
// ---------------------------------------------------------------------------

/// Fit the full-period monodromy to its (r, alpha) form. The full matrix is
/// invariant under (r, alpha) -> (sqrt(1 - r^2), alpha + pi); the sign of the
/// half-period (3,3) entry 1 - 2 r^2 picks the branch.
inline MonodromyParams fit_full_monodromy(const Rotation3& full, double half_33) {
    const double c = std::clamp((full.trace() - 1) / 2, -1.0, 1.0);  // 8 r^4 - 8 r^2 + 1
    const double s = std::sqrt((1 + c) / 2);
    const double r2 = half_33 >= 0 ? (1 - s) / 2 : (1 + s) / 2;
    const double r = std::sqrt(std::clamp(r2, 0.0, 1.0));
    // 13 and 23 entries: 4 r sqrt(1-r^2)(2r^2-1) sin(alpha), 4 r sqrt(1-r^2)(1-2r^2) cos(alpha)
    const double k = 4 * r * std::sqrt(1 - r * r) * (1 - 2 * r * r);
    double alpha;
    if (std::abs(k) > 1e-6) {
        alpha = std::atan2(-full(0, 2) / k, full(1, 2) / k);
    } else {
        // Fall back to the fixed axis (cos a, sin a, 0): column space of R - I is orthogonal to it.
        const double sin2a = 2 * full(0, 1), cos2a = full(0, 0) - full(1, 1);
        alpha = 0.5 * std::atan2(sin2a, cos2a);
    }
    return MonodromyParams(r, alpha);
}

/// (r, alpha) from the half-period propagator's third column.
inline MonodromyParams params_from_half(const Rotation3& half) {
    const double r = std::sqrt(std::clamp((1 - half(2, 2)) / 2, 0.0, 1.0));
    const double k = 2 * r * std::sqrt(std::max(0.0, 1 - r * r));
    if (k < 1e-9) {
        // r = 0 or 1: the upper block is a rotation by -2 alpha (r=0) or a reflection (r=1).
        const double a = r < 0.5 ? 0.5 * std::atan2(half(0, 1), half(0, 0)) : 0.5 * std::atan2(half(0, 1), -half(1, 1));
        return MonodromyParams(std::clamp(r, 0.0, 1.0), a);
    }
    return MonodromyParams(r, std::atan2(half(0, 2), half(1, 2)));
}

inline MonodromyParams monodromy_params_numeric(const DimensionlessParams& d, double tol = default_ode_tol) {
    return params_from_half(monodromy_numeric(d, std::numbers::pi, tol));
}

/// (r, alpha) from the spin-1/2 monodromy U(2 pi) = [[1-2r^2, 2 i r s e^{-i a}], [2 i r s e^{i a}, 1-2r^2]].
inline MonodromyParams fit_quantum_monodromy(const Unitary2& u) {
    const double d = 0.5 * (u[0].real() + u[3].real());
    const double r = std::sqrt(std::clamp((1 - d) / 2, 0.0, 1.0));
    const std::complex<double> e = u[2] / std::complex<double>(0, 1);  // 2 r s e^{i a}
    const double a = std::abs(e) > 1e-12 ? std::arg(e) : 0.0;
    return MonodromyParams(r, a);
}

}  // namespace rabi
