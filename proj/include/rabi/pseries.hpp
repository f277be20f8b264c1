#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rabi/core.hpp"

namespace rabi {

/// Dense polynomial, c[k] multiplies u^k. Trailing zeros are trimmed.
template <class T>
struct Polynomial {
    std::vector<T> c;

    Polynomial() = default;
    Polynomial(std::vector<T> coeffs) : c(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<T> coeffs) : c(coeffs) { trim(); }

    void trim() {
        while (!c.empty() && c.back() == T(0)) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    T operator[](std::size_t k) const { return k < c.size() ? c[k] : T(0); }

    T operator()(const T& u) const {
        T s(0);
        for (std::size_t k = c.size(); k-- > 0;) s = s * u + c[k];
        return s;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
        for (std::size_t k = 0; k < a.c.size(); ++k) r[k] += a.c[k];
        for (std::size_t k = 0; k < b.c.size(); ++k) r[k] += b.c[k];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator-(const Polynomial& a) {
        Polynomial r = a;
        for (auto& v : r.c) v = -v;
        return r;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.c.empty() || b.c.empty()) return {};
        std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(const T& s, const Polynomial& a) { return Polynomial({s}) * a; }
};

/// Truncated power series c_0 + c_1 u + ... + c_N u^N about u = 0.
template <class T>
struct PowerSeries {
    std::vector<T> c;

    PowerSeries() = default;
    explicit PowerSeries(std::vector<T> coeffs) : c(std::move(coeffs)) {}
    static PowerSeries zero(int order) { return PowerSeries(std::vector<T>(order + 1, T(0))); }

    int order() const { return static_cast<int>(c.size()) - 1; }
    T operator[](std::size_t k) const { return c[k]; }
    T& operator[](std::size_t k) { return c[k]; }

    PowerSeries truncated(int order) const {
        PowerSeries r = *this;
        r.c.resize(order + 1, T(0));
        return r;
    }

    template <class U>
    PowerSeries<U> cast() const {
        std::vector<U> out;
        out.reserve(c.size());
        for (const auto& v : c) out.push_back(static_cast<U>(v));
        return PowerSeries<U>(std::move(out));
    }
};

template <class T>
PowerSeries<T> series_multiply(const PowerSeries<T>& a, const PowerSeries<T>& b) {
    const int n = std::min(a.order(), b.order());
    PowerSeries<T> r = PowerSeries<T>::zero(n);
    for (int i = 0; i <= n; ++i) {
        if (a.c[i] == T(0)) continue;
        for (int j = 0; i + j <= n; ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
}

template <class T>
PowerSeries<T> series_add(const PowerSeries<T>& a, const PowerSeries<T>& b, T sb = T(1)) {
    const int n = std::min(a.order(), b.order());
    PowerSeries<T> r = PowerSeries<T>::zero(n);
    for (int k = 0; k <= n; ++k) r.c[k] = a.c[k] + sb * b.c[k];
    return r;
}

template <class T>
PowerSeries<T> series_derivative(const PowerSeries<T>& s) {
    if (s.order() < 1) return PowerSeries<T>::zero(0);
    PowerSeries<T> r = PowerSeries<T>::zero(s.order() - 1);
    for (int k = 1; k <= s.order(); ++k) r.c[k - 1] = T(k) * s.c[k];
    return r;
}

/// outer(inner(u)); inner must have zero constant term.
template <class T>
PowerSeries<T> series_compose(const PowerSeries<T>& outer, const PowerSeries<T>& inner) {
    if (inner.c.empty() || inner.c[0] != T(0))
        throw ValidationError("series_compose: inner series needs a zero constant term");
    const int n = std::min(outer.order(), inner.order());
    PowerSeries<T> acc = PowerSeries<T>::zero(n);
    const PowerSeries<T> in = inner.truncated(n);
    for (int k = n; k >= 0; --k) {
        acc = series_multiply(acc, in);
        acc.c[0] += outer.c[k];
    }
    return acc;
}

/// Compositional inverse: returns r with s(r(u)) = u to the order of s.
template <class T>
PowerSeries<T> series_revert(const PowerSeries<T>& s) {
    if (s.order() < 1 || s.c[0] != T(0)) throw ValidationError("series_revert: need s(0) = 0");
    if (s.c[1] == T(0)) throw ValidationError("series_revert: zero linear coefficient");
    const int n = s.order();
    PowerSeries<T> r = PowerSeries<T>::zero(n);
    r.c[1] = T(1) / s.c[1];
    for (int k = 2; k <= n; ++k) {
        // With r known through u^{k-1}, the u^k coefficient of s(r) is
        // s_1 r_k + (terms independent of r_k); make it vanish.
        const PowerSeries<T> comp = series_compose(s.truncated(k), r.truncated(k));
        r.c[k] = -comp.c[k] / s.c[1];
    }
    return r;
}

struct SeriesValue {
    double value;
    double tail_estimate;
};

/// Horner evaluation with a ratio-test tail estimate. |u| <= 1/2 unless
/// allow_outside is set (the quarter-period series are not trusted beyond).
template <class T>
SeriesValue series_evaluate(const PowerSeries<T>& s, double u, bool allow_outside = false) {
    if (!allow_outside && std::abs(u) > 0.5 + 1e-15)
        throw ValidationError("series_evaluate: |u| > 1/2 without override");
    double v = 0;
    for (int k = s.order(); k >= 0; --k) v = v * u + static_cast<double>(s.c[k]);
    const int n = s.order();
    const double last = std::abs(static_cast<double>(s.c[n])) * std::pow(std::abs(u), n);
    double tail = last;
    if (n >= 1 && s.c[n - 1] != T(0)) {
        const double ratio = std::abs(static_cast<double>(s.c[n] / s.c[n - 1]));
        const double q = std::abs(u) * ratio;
        if (q < 1) tail = last / (1 - q);
    }
    return {v, tail};
}

// ---------------------------------------------------------------------------
// Recurrence engine for sum_n p_n(u) X^(n)(u) = 0, n = 0..3
// ---------------------------------------------------------------------------

struct IndicialDegeneracy : DegenerateError {
    int m;
    explicit IndicialDegeneracy(int m_)
        : DegenerateError("recurrence: vanishing leading multiplier at equation m=" + std::to_string(m_)), m(m_) {}
};

struct InsufficientSeeds : NumericalError {
    InsufficientSeeds(int needed, int given)
        : NumericalError("recurrence: need " + std::to_string(needed) + " seeds, got " + std::to_string(given)) {}
};

struct RecurrenceReport {
    int band{0};               // equation m determines c_{m+band}
    double max_seed_residual{0};  // consistency equations among seeds, relative
};

namespace detail {
template <class T>
T rising(const T& a, int n) {
    T r(1);
    for (int i = 0; i < n; ++i) r *= a + T(i);
    return r;
}

/// Multipliers of c_k in the u^m coefficient of sum_n p_n X^(n).
template <class T>
std::vector<std::pair<int, T>> equation_terms(const std::array<Polynomial<T>, 4>& p, int m) {
    std::vector<std::pair<int, T>> terms;
    for (int n = 0; n < 4; ++n)
        for (int j = 0; j <= p[n].degree(); ++j) {
            if (m - j < 0 || p[n].c[j] == T(0)) continue;
            const int k = m - j + n;
            const T w = p[n].c[j] * rising(T(m - j + 1), n);
            auto it = std::find_if(terms.begin(), terms.end(), [k](const auto& t) { return t.first == k; });
            if (it == terms.end())
                terms.emplace_back(k, w);
            else
                it->second += w;
        }
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return terms;
}

template <class T>
T abs_value(const T& v) {
    return v < T(0) ? T(-v) : v;
}
}  // namespace detail

/// Band offset b: equation m involves c_k with k <= m + b.
template <class T>
int recurrence_band(const std::array<Polynomial<T>, 4>& p) {
    int b = -1000000;
    for (int n = 0; n < 4; ++n) {
        if (p[n].is_zero()) continue;
        int low = 0;
        while (p[n].c[low] == T(0)) ++low;
        b = std::max(b, n - low);
    }
    return b;
}

/// Forward recurrence for the u-series coefficients. Seeds fix c_0..c_{s-1};
/// equations whose highest index is already known are consistency checks.
template <class T>
PowerSeries<T> recurrence_from_poly_ode(const std::array<Polynomial<T>, 4>& p, const std::vector<T>& seeds, int N,
                                        RecurrenceReport* report = nullptr) {
    if (p[3].is_zero()) throw ValidationError("recurrence: leading polynomial vanishes identically");
    if (seeds.empty()) throw InsufficientSeeds(1, 0);
    const int band = recurrence_band(p);
    const T zero_rel = T(1e-12);

    std::vector<T> c(std::max<int>(N + 1, static_cast<int>(seeds.size())), T(0));
    std::copy(seeds.begin(), seeds.end(), c.begin());
    int known = static_cast<int>(seeds.size());
    double seed_res = 0;

    for (int m = 0; known <= N; ++m) {
        const auto terms = detail::equation_terms(p, m);
        T scale(0);
        for (const auto& t : terms) scale = std::max(scale, detail::abs_value(t.second));
        int kmax = -1;
        for (const auto& t : terms)
            if (detail::abs_value(t.second) > zero_rel * scale) kmax = std::max(kmax, t.first);
        if (kmax < 0) {
            if (m + band >= known) throw IndicialDegeneracy(m);
            continue;
        }
        if (kmax < known) {
            if (m + band >= known) throw IndicialDegeneracy(m);
            T res(0), mag(0);
            for (const auto& [k, w] : terms) {
                res += w * c[k];
                mag = std::max(mag, detail::abs_value(T(w * c[k])));
            }
            if (mag > T(0)) seed_res = std::max(seed_res, static_cast<double>(detail::abs_value(res) / mag));
            continue;
        }
        if (kmax > known) throw InsufficientSeeds(kmax, known);
        T lead(0), rest(0);
        for (const auto& [k, w] : terms) {
            if (k == kmax)
                lead += w;
            else
                rest += w * c[k];
        }
        c[kmax] = -rest / lead;
        ++known;
    }
    c.resize(N + 1);
    if (report) {
        report->band = band;
        report->max_seed_residual = seed_res;
    }
    return PowerSeries<T>(std::move(c));
}

/// u^m coefficients of sum_n p_n X^(n) for every m whose terms stay within
/// the truncation order.
template <class T>
std::vector<T> ode_residual(const std::array<Polynomial<T>, 4>& p, const PowerSeries<T>& x) {
    const int band = recurrence_band(p);
    std::vector<T> out;
    for (int m = 0; m + band <= x.order(); ++m) {
        T s(0);
        for (const auto& [k, w] : detail::equation_terms(p, m)) s += w * x.c[k];
        out.push_back(s);
    }
    return out;
}

}  // namespace rabi
