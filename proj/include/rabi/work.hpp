#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <exception>
#include <numbers>
#include <thread>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "rabi/core.hpp"
#include "rabi/floquet.hpp"
#include "rabi/numint.hpp"

namespace rabi {

// Two-point energy measurement at tau = 0 and tau = 2 pi on a thermal initial
// state of H(0) = (nu/2) sigma_1. beta is dimensionless: hbar omega / k_B T.

struct WorkStatistics {
    // p[i][j]: first outcome i, second outcome j (0 -> +nu/2, 1 -> -nu/2)
    std::array<std::array<double, 2>, 2> p{};
    double mean_work{0};  // units of omega0
    double beta{0};

    double p11() const { return p[0][0]; }
    double p12() const { return p[0][1]; }
    double p21() const { return p[1][0]; }
    double p22() const { return p[1][1]; }
    double total() const { return p[0][0] + p[0][1] + p[1][0] + p[1][1]; }

    /// Probabilities of w = -omega0, 0, +omega0.
    std::array<double, 3> outcome_law() const { return {p12(), p11() + p22(), p21()}; }
};

/// U(2 pi, 0) from (r, alpha); same layout as fit_quantum_monodromy expects.
inline Unitary2 quantum_monodromy_from_params(const MonodromyParams& mp) {
    const double r = mp.r, s = std::sqrt(std::max(0.0, 1 - r * r));
    const std::complex<double> i(0, 1);
    const std::complex<double> off = 2.0 * i * r * s;
    return {1 - 2 * r * r, off * std::exp(-i * mp.alpha), off * std::exp(i * mp.alpha), 1 - 2 * r * r};
}

/// 4 r^2 (1 - r^2) sin^2(alpha) tanh(beta nu / 2), in units of omega0.
inline double mean_work_closed_form(const MonodromyParams& mp, double nu, double beta) {
    const double r2 = mp.r * mp.r, sa = std::sin(mp.alpha);
    return 4 * r2 * (1 - r2) * sa * sa * std::tanh(beta * nu / 2);
}

inline WorkStatistics work_statistics(const MonodromyParams& mp, double nu, double beta) {
    if (!(beta >= 0) || !std::isfinite(beta)) throw ValidationError("beta must be finite and >= 0");
    const Unitary2 u = quantum_monodromy_from_params(mp);
    // Eigenvectors of sigma_1: (1, 1)/sqrt2 and (1, -1)/sqrt2.
    const double sgn[2] = {1, -1};
    // Thermal weights e^{-beta E_i}/Z, written to stay finite for large beta nu.
    const double x = std::tanh(beta * nu / 2);
    const double weight[2] = {(1 - x) / 2, (1 + x) / 2};
    WorkStatistics w;
    w.beta = beta;
    for (int i = 0; i < 2; ++i) {
        const std::complex<double> ui0 = (u[0] + sgn[i] * u[1]) / std::numbers::sqrt2;
        const std::complex<double> ui1 = (u[2] + sgn[i] * u[3]) / std::numbers::sqrt2;
        for (int j = 0; j < 2; ++j) {
            const std::complex<double> amp = (ui0 + sgn[j] * ui1) / std::numbers::sqrt2;
            w.p[i][j] = weight[i] * std::norm(amp);
        }
    }
    w.mean_work = w.p21() - w.p12();
    return w;
}

/// mean_work in units of omega0.
inline WorkStatistics work_statistics(const DimensionlessParams& d, double beta) {
    if (!(beta >= 0) || !std::isfinite(beta)) throw ValidationError("beta must be finite and >= 0");
    return work_statistics(monodromy_params(d), d.nu, beta);
}

/// mean_work in physical units (omega0 times the dimensionless value).
inline WorkStatistics work_statistics(const DriveParams& p, double beta) {
    WorkStatistics w = work_statistics(to_dimensionless(p), beta);
    w.mean_work *= p.omega0;
    return w;
}

/// Lowest-order small-amplitude mean work.
inline double small_amplitude_work(const DriveParams& p, double beta) {
    if (!(beta >= 0) || !std::isfinite(beta)) throw ValidationError("beta must be finite and >= 0");
    const double w = p.omega, w0 = p.omega0;
    const double den = w * w - w0 * w0;
    if (den == 0) throw ValidationError("small_amplitude_work: pole at omega = omega0");
    const double s = std::sin(std::numbers::pi * w0 / w);
    const double a = p.F * w + p.G * w0;
    return 4 * w0 / (den * den) * s * s * std::tanh(beta * (w0 / w) / 2) * a * a;
}

// ---------------------------------------------------------------------------
// Frequency scans
// ---------------------------------------------------------------------------

struct WorkScanPoint {
    double omega{0};
    WorkStatistics stats;
};

struct WorkScan {
    std::vector<WorkScanPoint> points;
    double argmax_omega{0};  // refined
    double max_work{0};
    std::size_t grid_argmax{0};
};

/// Evaluate fn(i) for i in [0, n) on up to `threads` workers; results keep index order.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, unsigned threads, Fn fn) {
    std::vector<T> out(n);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) {
                try {
                    out[i] = fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

/// Mean work over the given omega grid (ascending) with the maximum refined by
/// a parabola through the best grid point and then Brent's method.
inline WorkScan work_scan(double omega0, double F, double G, double beta, const std::vector<double>& omegas,
                          unsigned threads = 1) {
    if (omegas.size() < 3) throw ValidationError("work_scan: need at least three omega values");
    if (!std::is_sorted(omegas.begin(), omegas.end())) throw ValidationError("work_scan: omega grid must be ascending");
    auto eval = [&](double w) { return work_statistics(DriveParams(omega0, F, G, w), beta); };
    WorkScan s;
    s.points = parallel_map<WorkScanPoint>(omegas.size(), threads, [&](std::size_t i) {
        return WorkScanPoint{omegas[i], eval(omegas[i])};
    });
    std::size_t k = 0;
    for (std::size_t i = 1; i < s.points.size(); ++i)
        if (s.points[i].stats.mean_work > s.points[k].stats.mean_work) k = i;
    s.grid_argmax = k;
    s.argmax_omega = s.points[k].omega;
    s.max_work = s.points[k].stats.mean_work;
    if (k == 0 || k + 1 == s.points.size()) return s;

    const double a = s.points[k - 1].omega, b = s.points[k].omega, c = s.points[k + 1].omega;
    const double fa = s.points[k - 1].stats.mean_work, fb = s.max_work, fc = s.points[k + 1].stats.mean_work;
    double guess = b;
    const double den = (b - a) * (fb - fc) - (b - c) * (fb - fa);
    if (den != 0) {
        guess = b - 0.5 * ((b - a) * (b - a) * (fb - fc) - (b - c) * (b - c) * (fb - fa)) / den;
        guess = std::clamp(guess, a, c);
    }
    auto neg = [&](double w) { return -eval(w).mean_work; };
    std::uintmax_t iters = 100;
    const auto r = boost::math::tools::brent_find_minima(neg, a, c, 40, iters);
    double best = r.first, best_val = -r.second;
    if (const double gv = eval(guess).mean_work; gv > best_val) best = guess, best_val = gv;
    if (best_val >= s.max_work) {
        s.argmax_omega = best;
        s.max_work = best_val;
    }
    return s;
}

}  // namespace rabi
