// rabi: command-line front end. Every subcommand writes one table (CSV with a
// "# key=value" header block, or JSON) to stdout or --output.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rabi/core.hpp"
#include "rabi/floquet.hpp"
#include "rabi/io.hpp"
#include "rabi/limits.hpp"
#include "rabi/numint.hpp"
#include "rabi/resonance.hpp"
#include "rabi/work.hpp"

namespace {

using rabi::io::Range;
using rabi::io::Table;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr const char* tool_version = "1.0.0";

struct RunConfig {
    std::string subcommand;
    std::string omega0, F, G, omega, beta;  // raw flag text; empty = not given
    int order{0};
    int harmonics{rabi::default_harmonics};
    double tol{rabi::default_ode_tol};
    std::string format{"csv"};
    std::string output;
    unsigned threads{0};
    bool seeded{false};

    // subcommand specific
    std::string s0{"1,0,0"};
    int samples{201};
    double tau_end{2 * std::numbers::pi};
    int n_max{3};
    int branches{0};
    std::string kind{"adiabatic"};
};

// Defaults used by --seeded-defaults, per subcommand: omega0, F, G, omega, beta.
struct Seed {
    const char *omega0, *F, *G, *omega, *beta;
};

Seed seed_for(const std::string& cmd, const std::string& kind) {
    if (cmd == "quasienergy") return {"1", "1", "0.5", "0.5:1.5:101", "0"};
    if (cmd == "trajectory") return {"1", "1", "0.5", "1", "0"};
    if (cmd == "resonance") return {"1", "0.1", "0.05", "", "0"};
    if (cmd == "zero_curve") return {"1", "1", "", "0.65:1:36", "0"};
    if (cmd == "work") return {"1", "0.5", "0.1", "0.5:1.5:201", "10"};
    if (kind == "adiabatic") return {"1", "3", "2", "0.02:0.2:10", "0"};
    if (kind == "ft") return {"0.3", "0.05", "0.05", "1", "0"};
    if (kind == "bessel") return {"0", "0", "1", "1", "0"};
    if (kind == "near_linear") return {"0", "0.25", "1", "1", "0"};
    return {"0", "1", "0.75", "1", "0"};  // near_circular
}

std::string resolve(const std::string& given, const char* seeded, bool use_seed, const std::string& flag) {
    if (!given.empty()) return given;
    if (use_seed) return seeded;
    throw rabi::ValidationError("missing required flag --" + flag + " (or pass --seeded-defaults)");
}

struct Resolved {
    double omega0{0}, F{0}, G{0}, beta{0};
    Range omega, Grange;
};

/// Flags a subcommand does not use are neither required nor echoed in the header.
Resolved resolve_all(RunConfig& c, bool need_beta, bool need_G = true, bool need_omega = true) {
    const Seed s = seed_for(c.subcommand, c.kind);
    c.omega0 = resolve(c.omega0, s.omega0, c.seeded, "omega0");
    c.F = resolve(c.F, s.F, c.seeded, "F");
    if (need_G) c.G = resolve(c.G, s.G, c.seeded, "G");
    if (need_omega) c.omega = resolve(c.omega, s.omega, c.seeded, "omega");
    if (need_beta) c.beta = resolve(c.beta, s.beta, c.seeded, "beta");
    Resolved r;
    auto scalar = [](const std::string& text, const std::string& name) {
        const Range rg = rabi::io::parse_range(text, name);
        if (rg.is_scan()) throw rabi::ValidationError("--" + name + " takes a single value here");
        if (rg.lo < 0) throw rabi::ValidationError("--" + name + " must be >= 0");
        return rg.lo;
    };
    r.omega0 = scalar(c.omega0, "omega0");
    r.F = scalar(c.F, "F");
    if (need_G) {
        r.Grange = rabi::io::parse_range(c.G, "G");
        if (r.Grange.lo < 0) throw rabi::ValidationError("--G must be >= 0");
        r.G = r.Grange.lo;
    }
    if (need_omega) {
        r.omega = rabi::io::parse_range(c.omega, "omega");
        if (!(r.omega.lo > 0)) throw rabi::ValidationError("--omega must be > 0");
    }
    if (need_beta) r.beta = scalar(c.beta, "beta");
    return r;
}

void add_config_meta(Table& t, const RunConfig& c) {
    t.add_meta("tool", std::string("rabi ") + tool_version);
    t.add_meta("subcommand", c.subcommand);
    t.add_meta("omega0", c.omega0);
    t.add_meta("F", c.F);
    if (!c.G.empty()) t.add_meta("G", c.G);
    if (!c.omega.empty()) t.add_meta("omega", c.omega);
    if (!c.beta.empty()) t.add_meta("beta", c.beta);
    t.add_meta("order", std::to_string(c.order));
    t.add_meta("harmonics", std::to_string(c.harmonics));
    t.add_meta("tol", c.tol);
    t.add_meta("format", c.format);
    t.add_meta("seeded_defaults", c.seeded ? "true" : "false");
}

/// Rows evaluated in parallel; a NumericalError in one point yields a NaN row.
Table scan_rows(Table t, std::size_t n, unsigned threads, const std::function<std::vector<double>(std::size_t)>& row) {
    const std::size_t width = t.columns.size();
    std::size_t failures = 0;
    auto rows = rabi::parallel_map<std::optional<std::vector<double>>>(n, threads, [&](std::size_t i) {
        try {
            return std::optional<std::vector<double>>(row(i));
        } catch (const rabi::ValidationError&) {
            throw;
        } catch (const rabi::NumericalError&) {
            return std::optional<std::vector<double>>();
        }
    });
    for (auto& r : rows) {
        if (!r) {
            ++failures;
            r = std::vector<double>(width, nan);
        }
        t.rows.push_back(std::move(*r));
    }
    t.add_meta("failed_points", std::to_string(failures));
    if (failures == n) throw rabi::NumericalError("every point of the scan failed");
    return t;
}

rabi::SpinVector parse_vector(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) v.push_back(rabi::io::parse_number(part, "--s0"));
    if (v.size() != 3) throw rabi::ValidationError("--s0 must be x,y,z or 'periodic'");
    return {v[0], v[1], v[2]};
}

// ---------------------------------------------------------------------------

Table cmd_quasienergy(RunConfig& c) {
    const Resolved r = resolve_all(c, false);
    Table t;
    add_config_meta(t, c);
    t.add_meta("branches", std::to_string(c.branches));
    t.columns = {"omega", "G", "E", "E_geometric", "E_dynamical", "r", "alpha", "route_mismatch"};
    for (int k = 0; k < 4 * c.branches + 2 && c.branches > 0; ++k) t.columns.push_back("branch_" + std::to_string(k));
    const auto ws = r.omega.values(), gs = r.Grange.values();
    return scan_rows(std::move(t), ws.size() * gs.size(), c.threads, [&](std::size_t i) {
        const double w = ws[i % ws.size()], G = gs[i / ws.size()];
        const auto d = rabi::to_dimensionless(rabi::DriveParams(r.omega0, r.F, G, w));
        const auto q = rabi::quasienergy(d, c.tol);
        std::vector<double> row{w,         G,       w * q.eps_qu, w * q.split.geometric, w * q.split.dynamical,
                                q.r,       q.alpha, q.route_mismatch};
        if (c.branches > 0)
            for (double b : rabi::quasienergy_branches(rabi::physical_quasienergy(q.eps_qu, w), w, c.branches))
                row.push_back(b);
        return row;
    });
}

Table cmd_trajectory(RunConfig& c) {
    const Resolved r = resolve_all(c, false);
    if (r.omega.is_scan() || r.Grange.is_scan()) throw rabi::ValidationError("trajectory takes single parameter values");
    if (c.samples < 2) throw rabi::ValidationError("--samples must be >= 2");
    const auto d = rabi::to_dimensionless(rabi::DriveParams(r.omega0, r.F, r.G, r.omega.lo));
    const rabi::SeriesPropagator p = rabi::build_propagator(d, c.order);
    rabi::SpinVector s0;
    if (c.s0 == "periodic") {
        const auto mp = rabi::monodromy_params(p);
        s0 = {std::cos(mp.alpha), std::sin(mp.alpha), 0};
    } else {
        s0 = parse_vector(c.s0);
    }
    const rabi::Trajectory rk = rabi::integrate_classical(d, s0, c.tau_end, c.tol, c.samples);
    Table t;
    add_config_meta(t, c);
    t.add_meta("s0", rabi::io::format_number(s0.x) + "," + rabi::io::format_number(s0.y) + "," +
                         rabi::io::format_number(s0.z));
    t.add_meta("tau_end", c.tau_end);
    t.add_meta("series_order", std::to_string(p.qs.order));
    t.columns = {"tau", "x_series", "y_series", "z_series", "x_rk", "y_rk", "z_rk", "max_diff"};
    double worst = 0;
    for (std::size_t i = 0; i < rk.tau.size(); ++i) {
        const rabi::SpinVector a = p.spin(s0, rk.tau[i]), b = rk.spin[i];
        const double diff = rabi::max_abs_diff(a, b);
        worst = std::max(worst, diff);
        t.rows.push_back({rk.tau[i], a.x, a.y, a.z, b.x, b.y, b.z, diff});
    }
    t.add_meta("max_diff", worst);
    return t;
}

Table cmd_resonance(RunConfig& c) {
    const Resolved r = resolve_all(c, false, true, false);
    if (c.n_max < 1 || c.n_max > 50) throw rabi::ValidationError("--n-max must lie in [1, 50]");
    if (!(r.omega0 > 0)) throw rabi::ValidationError("resonance needs omega0 > 0");
    Table t;
    add_config_meta(t, c);
    t.add_meta("n_max", std::to_string(c.n_max));
    t.columns = {"G", "n", "omega_res", "omega_series", "series_order", "omega_circular"};
    const auto gs = r.Grange.values();
    const std::size_t nn = static_cast<std::size_t>(c.n_max);
    return scan_rows(std::move(t), gs.size() * nn, c.threads, [&](std::size_t i) {
        const double G = gs[i / nn];
        const int n = static_cast<int>(i % nn) + 1;
        const double root = rabi::resonance_frequency(r.omega0, r.F, G, n);
        const double series = rabi::resonance_series_eval(n, r.F, G, r.omega0);
        const int order = n <= 3 ? rabi::resonance_table(n).complete_order : 2;
        const double circ = r.F == G ? r.omega0 * rabi::resonance_circular(n, r.F / r.omega0) : nan;
        return std::vector<double>{G, double(n), root, series, double(order), circ};
    });
}

Table cmd_zero_curve(RunConfig& c) {
    const Resolved r = resolve_all(c, false, false, true);
    Table t;
    add_config_meta(t, c);
    t.columns = {"omega", "G_zero", "G_first_order", "G_series"};
    const bool unit = r.omega0 == 1 && r.F == 1;
    const auto ws = r.omega.values();
    return scan_rows(std::move(t), ws.size(), c.threads, [&](std::size_t i) {
        const double w = ws[i];
        const double g = rabi::zero_quasienergy_G(r.omega0, r.F, w);
        const double first = r.omega0 > 0 && r.F > 0 ? rabi::zero_curve_first_order_G(r.omega0, r.F, w) : nan;
        return std::vector<double>{w, g, first, unit ? rabi::zero_curve_series_G(w) : nan};
    });
}

Table cmd_work(RunConfig& c) {
    const Resolved r = resolve_all(c, true);
    if (!r.omega.is_scan()) {
        const auto ws = rabi::work_statistics(rabi::DriveParams(r.omega0, r.F, r.G, r.omega.lo), r.beta);
        Table t;
        add_config_meta(t, c);
        t.columns = {"omega", "mean_work", "p_minus", "p_zero", "p_plus", "small_amplitude"};
        const auto law = ws.outcome_law();
        double small = nan;
        if (r.omega.lo != r.omega0) small = rabi::small_amplitude_work(rabi::DriveParams(r.omega0, r.F, r.G, r.omega.lo), r.beta);
        t.rows.push_back({r.omega.lo, ws.mean_work, law[0], law[1], law[2], small});
        return t;
    }
    const rabi::WorkScan s = rabi::work_scan(r.omega0, r.F, r.G, r.beta, r.omega.values(), c.threads);
    Table t;
    add_config_meta(t, c);
    t.add_meta("argmax_omega", s.argmax_omega);
    t.add_meta("max_work", s.max_work);
    t.columns = {"omega", "mean_work", "p_minus", "p_zero", "p_plus", "small_amplitude"};
    for (const auto& pt : s.points) {
        const auto law = pt.stats.outcome_law();
        double small = nan;
        if (pt.omega != r.omega0) small = rabi::small_amplitude_work(rabi::DriveParams(r.omega0, r.F, r.G, pt.omega), r.beta);
        t.rows.push_back({pt.omega, pt.stats.mean_work, law[0], law[1], law[2], small});
    }
    return t;
}

Table cmd_limits(RunConfig& c) {
    const Resolved r = resolve_all(c, false);
    Table t;
    add_config_meta(t, c);
    t.add_meta("kind", c.kind);
    if (c.kind == "adiabatic") {
        const auto a = rabi::adiabatic_quasienergy(r.omega0, r.F, r.G);
        t.add_meta("E0", a.E0);
        t.add_meta("E1", a.E1);
        t.add_meta("E2", a.E2);
        t.columns = {"omega", "E_exact", "E_adiabatic"};
        const auto ws = r.omega.values();
        return scan_rows(std::move(t), ws.size(), c.threads, [&](std::size_t i) {
            const double w = ws[i], approx = a.E0 + w * a.E1 + w * w * a.E2;
            const double exact = rabi::quasienergy_branch_near(rabi::DriveParams(r.omega0, r.F, r.G, w), approx, c.tol);
            return std::vector<double>{w, exact, approx};
        });
    }
    if (r.omega.is_scan() || r.Grange.is_scan()) throw rabi::ValidationError("limits " + c.kind + " takes single values");
    const rabi::DriveParams p(r.omega0, r.F, r.G, r.omega.lo);
    const auto d = rabi::to_dimensionless(p);
    const double period = 2 * std::numbers::pi / p.omega;
    std::vector<double> ts(c.samples);
    for (int i = 0; i < c.samples; ++i) ts[i] = period * i / (c.samples - 1);
    std::function<rabi::SpinVector(double)> approx;
    std::optional<rabi::FTSeries> ft;
    if (c.kind == "ft") {
        ft = rabi::ft_build(p, c.order > 0 ? c.order : 8);
        const auto fq = rabi::ft_quasienergy(*ft);
        t.add_meta("E_ft", fq.total);
        t.add_meta("E_ft_geometric", fq.geometric);
        t.add_meta("E_ft_dynamical", fq.dynamical);
        t.add_meta("E_pipeline", rabi::quasienergy_physical(p));
        approx = [&](double tt) {
            const auto v = rabi::ft_evaluate(*ft, tt);
            return (1.0 / rabi::norm(v)) * v;
        };
    } else if (c.kind == "bessel") {
        if (p.omega0 != 0 || p.F != 0) throw rabi::ValidationError("limits bessel needs omega0 = F = 0");
        approx = [&](double tt) { return rabi::zero_field_solution_bessel(d.g, p.omega * tt); };
    } else if (c.kind == "near_linear") {
        approx = [&](double tt) { return rabi::near_linear_solution(p, tt); };
    } else if (c.kind == "near_circular") {
        approx = [&](double tt) {
            const auto v = rabi::near_circular_solution(p, tt);
            return (1.0 / rabi::norm(v)) * v;
        };
    } else {
        throw rabi::ValidationError("--kind must be adiabatic, ft, bessel, near_linear or near_circular");
    }
    std::vector<double> taus(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) taus[i] = p.omega * ts[i];
    const auto rk = rabi::integrate_classical_at(d, approx(0.0), taus, c.tol);
    t.columns = {"t", "x_approx", "y_approx", "z_approx", "x_rk", "y_rk", "z_rk", "max_diff"};
    double worst = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto a = approx(ts[i]), b = rk.spin[i];
        const double diff = rabi::max_abs_diff(a, b);
        worst = std::max(worst, diff);
        t.rows.push_back({ts[i], a.x, a.y, a.z, b.x, b.y, b.z, diff});
    }
    t.add_meta("max_diff", worst);
    return t;
}

void emit(const Table& t, const RunConfig& c) {
    std::ostringstream os;
    if (c.format == "json")
        rabi::io::write_json(os, t);
    else
        rabi::io::write_csv(os, t);
    if (c.output.empty()) {
        std::cout << os.str();
        std::cout.flush();
        return;
    }
    std::ofstream f(c.output, std::ios::binary);
    if (!f) throw rabi::ValidationError("cannot open output file " + c.output);
    f << os.str();
    if (!f) throw rabi::ValidationError("cannot write output file " + c.output);
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"Rabi problem with elliptical polarization: quasienergies, trajectories, resonances, work."};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--omega0", c.omega0, "level splitting omega0 (>= 0)");
        sub->add_option("--F", c.F, "drive amplitude along z (>= 0)");
        sub->add_option("--G", c.G, "drive amplitude along y (>= 0); value or min:max:steps");
        sub->add_option("--omega", c.omega, "drive frequency; value or min:max:steps");
        sub->add_option("--beta", c.beta, "dimensionless inverse temperature hbar*omega/(k_B T)");
        sub->add_option("--order", c.order, "series truncation order (0 = adaptive)")->check(CLI::Range(0, 200));
        sub->add_option("--harmonics", c.harmonics, "minimum number of Fourier harmonics")->check(CLI::Range(1, 200));
        sub->add_option("--tol", c.tol, "integrator tolerance")->check(CLI::Range(1e-14, 1e-3));
        sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output", c.output, "output file (default stdout)");
        sub->add_option("--threads", c.threads, "worker threads (default: hardware concurrency)");
        sub->add_flag("--seeded-defaults", c.seeded, "fill unspecified parameters with built-in defaults");
    };

    auto* q = app.add_subcommand("quasienergy", "quasienergy and its geometric/dynamical split over omega and G");
    common(q);
    q->add_option("--branches", c.branches, "also list branches n*omega +- E for |n| <= N")->check(CLI::Range(0, 20));
    auto* tr = app.add_subcommand("trajectory", "spin trajectory from the series pipeline and the integrator");
    common(tr);
    tr->add_option("--s0", c.s0, "initial spin x,y,z or 'periodic'");
    tr->add_option("--samples", c.samples, "number of samples")->check(CLI::Range(2, 1000000));
    tr->add_option("--tau-end", c.tau_end, "final dimensionless time");
    auto* rs = app.add_subcommand("resonance", "resonance frequencies from det Xi = 0 and the stored series");
    common(rs);
    rs->add_option("--n-max", c.n_max, "resonances n = 1..N");
    auto* zc = app.add_subcommand("zero_curve", "G on the zero-quasienergy curve over omega");
    common(zc);
    auto* wk = app.add_subcommand("work", "two-point-measurement work statistics");
    common(wk);
    auto* lm = app.add_subcommand("limits", "limiting-case approximations against exact results");
    common(lm);
    lm->add_option("--kind", c.kind, "adiabatic, ft, bessel, near_linear, near_circular");
    lm->add_option("--samples", c.samples, "number of time samples")->check(CLI::Range(2, 1000000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << rabi::io::error_line("validation", e.what()) << '\n';
        return 2;
    }

    if (c.threads == 0) c.threads = std::max(1u, std::thread::hardware_concurrency());
    c.subcommand = app.get_subcommands().front()->get_name();
    try {
        Table t;
        if (c.subcommand == "quasienergy") t = cmd_quasienergy(c);
        else if (c.subcommand == "trajectory") t = cmd_trajectory(c);
        else if (c.subcommand == "resonance") t = cmd_resonance(c);
        else if (c.subcommand == "zero_curve") t = cmd_zero_curve(c);
        else if (c.subcommand == "work") t = cmd_work(c);
        else t = cmd_limits(c);
        emit(t, c);
    } catch (const rabi::ValidationError& e) {
        std::cerr << rabi::io::error_line("validation", e.what()) << '\n';
        return 2;
    } catch (const rabi::NumericalError& e) {
        std::cerr << rabi::io::error_line("numerical", e.what()) << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << rabi::io::error_line("numerical", e.what()) << '\n';
        return 3;
    }
    return 0;
}
