#pragma once

// Command-line front end: config ingestion, commands, CSV/SVG writers.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "keen_delay/delay_spectrum.hpp"
#include "keen_delay/equilibria.hpp"
#include "keen_delay/errors.hpp"
#include "keen_delay/linearize.hpp"
#include "keen_delay/model.hpp"
#include "keen_delay/normal_form.hpp"
#include "keen_delay/params.hpp"
#include "keen_delay/simulation.hpp"

namespace keen::app {

using nlohmann::json;

enum ExitCode : int {
    Ok = 0,
    ConfigError = 2,
    MissingEquilibrium = 3,
    HypothesisFailure = 4,
    IntegrationEvent = 5,
};

/// Carries an exit code out of a command.
struct app_error : std::runtime_error {
    int code;
    app_error(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

struct AnalysisConfig {
    double tau = 0.85;
    std::optional<double> dt;
    double t_end = 400.0;
    std::optional<State> initial;
    int j_max = 3;
    Region region{};
    NewtonGrid grid{};
    double tol_residual = 1e-9;
};

struct OutputConfig {
    std::string dir = ".";
    bool svg = false;
};

struct RunConfig {
    ModelParams model{};
    AnalysisConfig analysis{};
    OutputConfig output{};
};

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace detail {

inline void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                           const std::string& where) {
    if (!obj.is_object()) throw config_error(where + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw config_error("unknown key " + where + "." + key);
        }
    }
}

inline double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw config_error(where + " must be a number");
    return j.get<double>();
}

inline int integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw config_error(where + " must be an integer");
    return j.get<int>();
}

inline void read(const json& obj, const char* key, double& dst, const std::string& where) {
    if (obj.contains(key)) dst = number(obj.at(key), where + "." + key);
}

inline void read(const json& obj, const char* key, int& dst, const std::string& where) {
    if (obj.contains(key)) dst = integer(obj.at(key), where + "." + key);
}

/// JSON scalar from a --set value: JSON literal if it parses, else a string.
inline json parse_value(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        return json(text);
    }
}

}  // namespace detail

/// Apply "a.b.c=value" to a JSON document, creating objects as needed.
inline void apply_set(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw config_error("--set expects key=value, got '" + assignment + "'");
    }
    const std::string path = assignment.substr(0, eq);
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) throw config_error("--set: empty path segment in '" + path + "'");
        if (!node->is_object()) throw config_error("--set: '" + path + "' descends into a non-object");
        if (dot == std::string::npos) {
            (*node)[key] = detail::parse_value(assignment.substr(eq + 1));
            return;
        }
        node = &(*node)[key];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
}

[[nodiscard]] inline RunConfig parse_config(const json& doc) {
    using detail::read;
    detail::reject_unknown(doc, {"model", "analysis", "output"}, "config");
    RunConfig cfg;
    if (!doc.contains("model")) throw config_error("config.model is required");
    const json& m = doc.at("model");
    const std::vector<std::string> model_keys{"alpha", "beta",  "delta",  "nu",     "r",
                                              "gamma", "eta_p", "xi",     "phi0",   "phi1",
                                              "kappa0", "kappa1", "kappa2"};
    detail::reject_unknown(m, model_keys, "model");
    for (const auto& k : model_keys) {
        if (!m.contains(k)) throw config_error("model." + k + " is required");
    }
    auto& p = cfg.model;
    read(m, "alpha", p.alpha, "model");
    read(m, "beta", p.beta, "model");
    read(m, "delta", p.delta, "model");
    read(m, "nu", p.nu, "model");
    read(m, "r", p.r, "model");
    read(m, "gamma", p.gamma, "model");
    read(m, "eta_p", p.eta_p, "model");
    read(m, "xi", p.xi, "model");
    read(m, "phi0", p.phi0, "model");
    read(m, "phi1", p.phi1, "model");
    read(m, "kappa0", p.kappa0, "model");
    read(m, "kappa1", p.kappa1, "model");
    read(m, "kappa2", p.kappa2, "model");
    p.validate();

    if (doc.contains("analysis")) {
        const json& a = doc.at("analysis");
        detail::reject_unknown(a, {"tau", "dt", "t_end", "initial", "j_max", "newton", "tol"},
                               "analysis");
        auto& an = cfg.analysis;
        read(a, "tau", an.tau, "analysis");
        if (a.contains("dt") && !a.at("dt").is_null()) an.dt = detail::number(a.at("dt"), "analysis.dt");
        read(a, "t_end", an.t_end, "analysis");
        if (a.contains("initial") && !a.at("initial").is_null()) {
            const json& v = a.at("initial");
            if (!v.is_array() || v.size() != 3) {
                throw config_error("analysis.initial must be [omega, lambda, b]");
            }
            an.initial = State{detail::number(v[0], "analysis.initial[0]"),
                               detail::number(v[1], "analysis.initial[1]"),
                               detail::number(v[2], "analysis.initial[2]")};
        }
        read(a, "j_max", an.j_max, "analysis");
        if (an.j_max < 0) throw config_error("analysis.j_max must be >= 0");
        if (a.contains("newton")) {
            const json& n = a.at("newton");
            detail::reject_unknown(n, {"re_min", "re_max", "im_min", "im_max", "nx", "ny"},
                                   "analysis.newton");
            read(n, "re_min", an.region.re_min, "analysis.newton");
            read(n, "re_max", an.region.re_max, "analysis.newton");
            read(n, "im_min", an.region.im_min, "analysis.newton");
            read(n, "im_max", an.region.im_max, "analysis.newton");
            read(n, "nx", an.grid.nx, "analysis.newton");
            read(n, "ny", an.grid.ny, "analysis.newton");
            if (an.grid.nx < 1 || an.grid.ny < 1) throw config_error("analysis.newton grid must be >= 1");
            if (!(an.region.re_max > an.region.re_min) || !(an.region.im_max >= an.region.im_min)) {
                throw config_error("analysis.newton region is empty");
            }
        }
        if (a.contains("tol")) {
            const json& t = a.at("tol");
            detail::reject_unknown(t, {"residual", "root"}, "analysis.tol");
            read(t, "residual", an.tol_residual, "analysis.tol");
            read(t, "root", an.grid.accept_tol, "analysis.tol");
            if (!(an.tol_residual > 0.0) || !(an.grid.accept_tol > 0.0)) {
                throw config_error("analysis.tol values must be positive");
            }
        }
        if (!(an.tau >= 0.0)) throw config_error("analysis.tau must be >= 0");
        if (!(an.t_end > 0.0)) throw config_error("analysis.t_end must be positive");
    }
    if (doc.contains("output")) {
        const json& o = doc.at("output");
        detail::reject_unknown(o, {"dir", "svg"}, "output");
        if (o.contains("dir")) {
            if (!o.at("dir").is_string()) throw config_error("output.dir must be a string");
            cfg.output.dir = o.at("dir").get<std::string>();
        }
        if (o.contains("svg")) {
            if (!o.at("svg").is_boolean()) throw config_error("output.svg must be a boolean");
            cfg.output.svg = o.at("svg").get<bool>();
        }
    }
    return cfg;
}

[[nodiscard]] inline RunConfig load_config(const std::string& path,
                                           const std::vector<std::string>& sets) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("malformed JSON: ") + e.what());
    }
    for (const auto& s : sets) apply_set(doc, s);
    return parse_config(doc);
}

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

[[nodiscard]] inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

[[nodiscard]] inline std::string fmt(cplx z) {
    const double im = z.imag();
    return fmt(z.real()) + (std::signbit(im) ? " - " : " + ") + fmt(std::abs(im)) + "i";
}

inline std::ofstream open_output(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream f(path);
    if (!f) throw config_error("cannot write " + path.string());
    return f;
}

/// Three stacked polylines, each scaled to its own range.
inline void write_svg(std::ostream& os, const Trajectory& tr) {
    constexpr double width = 800.0, panel = 200.0, pad = 20.0;
    const std::array<const char*, 3> names{"omega", "lambda", "b"};
    const std::array<const char*, 3> colors{"#1f77b4", "#d62728", "#2ca02c"};
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << 3 * panel << "\">\n";
    if (tr.size() < 2) {
        os << "</svg>\n";
        return;
    }
    const double t0 = tr.times.front(), t1 = tr.times.back();
    for (int s = 0; s < 3; ++s) {
        auto get = [&](const State& u) { return s == 0 ? u.omega : s == 1 ? u.lambda : u.b; };
        double lo = get(tr.states[0]), hi = lo;
        for (const auto& u : tr.states) {
            lo = std::min(lo, get(u));
            hi = std::max(hi, get(u));
        }
        if (hi - lo < 1e-300) hi = lo + 1.0;
        const double top = s * panel;
        os << "<text x=\"4\" y=\"" << top + 14 << "\" font-size=\"12\">" << names[s] << "</text>\n";
        os << "<polyline fill=\"none\" stroke=\"" << colors[s] << "\" points=\"";
        const std::size_t stride = std::max<std::size_t>(1, tr.size() / 4000);
        for (std::size_t i = 0; i < tr.size(); i += stride) {
            const double x = pad + (width - 2 * pad) * (tr.times[i] - t0) / (t1 - t0);
            const double y = top + panel - pad - (panel - 2 * pad) * (get(tr.states[i]) - lo) / (hi - lo);
            os << fmt(x) << ',' << fmt(y) << ' ';
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct Selection {
    std::vector<Equilibrium> e4;
    std::size_t index = 0;
    LinearizationConstants k{};
};

/// E4 list in ascending omega*; default index is the first one passing Routh-Hurwitz.
[[nodiscard]] inline Selection select_e4(const Model& m, std::optional<int> index) {
    Selection s;
    try {
        s.e4 = find_e4(m);
    } catch (const no_root_error& e) {
        throw app_error(MissingEquilibrium, e.what());
    }
    std::erase_if(s.e4, [](const Equilibrium& e) { return !e.admissible; });
    if (s.e4.empty()) throw app_error(MissingEquilibrium, "no admissible E4 equilibrium");
    if (index) {
        if (*index < 0 || static_cast<std::size_t>(*index) >= s.e4.size()) {
            throw app_error(MissingEquilibrium, "equilibrium index " + std::to_string(*index) +
                                                    " out of range (" +
                                                    std::to_string(s.e4.size()) + " E4 points)");
        }
        s.index = static_cast<std::size_t>(*index);
    } else {
        s.index = 0;
        for (std::size_t i = 0; i < s.e4.size(); ++i) {
            if (routh_hurwitz(k_constants(m, s.e4[i])).satisfied) {
                s.index = i;
                break;
            }
        }
    }
    s.k = k_constants(m, s.e4[s.index]);
    return s;
}

inline void print_selected(std::ostream& out, const Selection& s) {
    const auto& e = s.e4[s.index];
    out << "equilibrium E4[" << s.index << "]: omega* = " << fmt(e.omega_star)
        << ", lambda* = " << fmt(e.lambda_star) << ", b* = " << fmt(e.b_star) << "\n";
}

inline int cmd_equilibria(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Model m(cfg.model);
    std::vector<Equilibrium> all;
    try {
        all = find_all(m);
    } catch (const no_root_error& e) {
        throw app_error(MissingEquilibrium, e.what());
    }
    if (all.empty()) throw app_error(MissingEquilibrium, "no equilibrium found");
    auto csv = open_output(cfg.output.dir, "equilibria.csv");
    csv << "kind,omega,lambda,b,pi,z,admissible,residual\n";
    out << "kind  omega             lambda            b                 pi                "
           "Z(omega)          admissible  residual\n";
    for (const auto& e : all) {
        const double lam = e.lambda_free ? std::numeric_limits<double>::quiet_NaN() : e.lambda_star;
        const double z = m.inflation(e.omega_star);
        csv << to_string(e.kind) << ',' << fmt(e.omega_star) << ',' << fmt(lam) << ','
            << fmt(e.b_star) << ',' << fmt(e.pi_star) << ',' << fmt(z) << ','
            << (e.admissible ? 1 : 0) << ',' << fmt(e.residual) << '\n';
        char line[256];
        std::snprintf(line, sizeof line, "%-5s %-17.10g %-17s %-17.10g %-17.10g %-17.6g %-11s %.3g",
                      to_string(e.kind), e.omega_star,
                      e.lambda_free ? "free" : fmt(e.lambda_star).c_str(), e.b_star, e.pi_star, z,
                      e.admissible ? "yes" : "no", e.residual);
        out << line;
        if (!e.note.empty()) out << "  (" << e.note << ")";
        out << '\n';
        if (e.residual > cfg.analysis.tol_residual) {
            err << "warning: " << to_string(e.kind) << " residual " << fmt(e.residual)
                << " exceeds tolerance " << fmt(cfg.analysis.tol_residual) << '\n';
        }
    }
    return Ok;
}

inline int cmd_stability(const RunConfig& cfg, std::optional<int> index, std::ostream& out) {
    const Model m(cfg.model);
    const auto s = select_e4(m, index);
    print_selected(out, s);
    const auto& k = s.k;
    const std::array<double, 12> ks{k.k0, k.k1, k.k2, k.k3, k.k4,  k.k5,
                                    k.k6, k.k7, k.k8, k.k9, k.k10, k.k11};
    for (std::size_t i = 0; i < ks.size(); ++i) out << "K" << i << " = " << fmt(ks[i]) << '\n';
    const auto rh = routh_hurwitz(k);
    out << "K0 + K4 = " << fmt(rh.trace) << " (must be < 0)\n";
    out << "K1 K2 K5 = " << fmt(rh.constant) << " (must be > 0)\n";
    out << "K1 K2 K5 + (K0 + K4)(K0 K4 + K1 K2) = " << fmt(rh.hurwitz) << " (must be < 0)\n";
    out << "Routh-Hurwitz: " << (rh.satisfied ? "satisfied" : "violated")
        << (rh.marginal ? " (marginal)" : "") << '\n';
    out << "cubic roots at tau = 0:\n";
    for (const auto& r : char_cubic(k).roots()) out << "  " << fmt(r) << '\n';
    return Ok;
}

[[nodiscard]] inline StabilityVerdict verdict_or_exit(const LinearizationConstants& k, int j_max) {
    try {
        return stability_verdict(k, j_max);
    } catch (const hypothesis_error& e) {
        throw app_error(HypothesisFailure, e.what());
    }
}

inline int cmd_critical_delay(const RunConfig& cfg, std::optional<int> index,
                              std::ostream& out) {
    const Model m(cfg.model);
    const auto s = select_e4(m, index);
    print_selected(out, s);
    const auto v = verdict_or_exit(s.k, cfg.analysis.j_max);
    const auto hz = hz_coefficients(s.k);
    out << "h(z) = z^3 + p z^2 + q z + r: p = " << fmt(hz.p) << ", q = " << fmt(hz.q)
        << ", r = " << fmt(hz.r_tilde) << '\n';
    const auto pr = positive_roots(hz);
    out << "case: " << to_string(pr.which) << '\n';
    out << "roots of h:";
    for (const auto& z : pr.all_roots) out << ' ' << fmt(z);
    out << '\n';
    auto csv = open_output(cfg.output.dir, "critical_delays.csv");
    csv << "mu,z,j,tau,residual\n";
    if (v.which == VerdictCase::NoSwitch) {
        out << "no positive root of h: " << v.text << '\n';
        return Ok;
    }
    const auto cds = critical_delays(s.k, pr.roots, cfg.analysis.j_max);
    out << "critical delays:\n";
    for (const auto& cd : cds.entries) {
        out << "  mu = " << fmt(cd.mu) << ", z = " << fmt(cd.z) << ":";
        for (std::size_t j = 0; j < cd.taus.size(); ++j) {
            out << ' ' << fmt(cd.taus[j]);
            csv << fmt(cd.mu) << ',' << fmt(cd.z) << ',' << j << ',' << fmt(cd.taus[j]) << ','
                << fmt(cd.residuals[j]) << '\n';
        }
        out << '\n';
    }
    out << "tau0 = " << fmt(*v.tau0) << '\n';
    out << "mu0 = " << fmt(*v.mu0) << '\n';
    out << "h'(z0) = " << fmt(v.crossing->hprime) << '\n';
    out << "verdict: " << v.text << '\n';
    if (v.crossing->degenerate) throw app_error(HypothesisFailure, "h'(z0) vanishes");
    return Ok;
}

inline void print_result(std::ostream& out, const char* label, const NormalFormResult& r) {
    out << label << ":\n";
    out << "  c1(0) = " << fmt(r.c1) << '\n';
    out << "  mu2 = " << fmt(r.mu_bar2) << '\n';
    out << "  beta2 = " << fmt(r.beta2) << '\n';
    out << "  T2 = " << fmt(r.t2) << '\n';
    out << "  direction: " << to_string(r.direction) << '\n';
    out << "  periodic solutions " << to_string(r.orbit_stability) << '\n';
    out << "  period " << (r.period_trend == PeriodTrend::Increasing ? "increases" : "decreases")
        << '\n';
}

inline int cmd_normal_form(const RunConfig& cfg, std::optional<int> index, FormulaRoute route,
                           std::ostream& out) {
    const Model m(cfg.model);
    const auto s = select_e4(m, index);
    print_selected(out, s);
    const auto v = verdict_or_exit(s.k, cfg.analysis.j_max);
    if (v.which == VerdictCase::NoSwitch) {
        throw app_error(HypothesisFailure, "no critical delay: " + v.text);
    }
    if (v.crossing->degenerate) throw app_error(HypothesisFailure, "h'(z0) vanishes");
    HopfAnalysis h;
    try {
        h = analyze_hopf(s.k, *v.mu0, *v.tau0);
    } catch (const degenerate_error& e) {
        throw app_error(HypothesisFailure, e.what());
    } catch (const singular_error& e) {
        throw app_error(HypothesisFailure, e.what());
    } catch (const no_root_error& e) {
        throw app_error(HypothesisFailure, e.what());
    }
    const auto& nf = route == FormulaRoute::Derived ? h.derived : h.printed;
    out << "tau0 = " << fmt(h.tau0) << ", mu0 = " << fmt(h.mu0) << '\n';
    out << "x0'(tau0) = " << fmt(h.dx_dtau) << " (Re x0' "
        << (h.dx_dtau.real() > 0.0 ? "> 0" : "< 0") << ")\n";
    out << "route: " << to_string(route) << '\n';
    out << "B = " << fmt(nf.b_bar) << '\n';
    out << "g20 = " << fmt(nf.g20) << '\n';
    out << "g11 = " << fmt(nf.g11) << '\n';
    out << "g02 = " << fmt(nf.g02) << '\n';
    out << "g21 = " << fmt(nf.g21) << '\n';
    out << "eigen residual = " << fmt(nf.eigen_residual)
        << ", adjoint residual = " << fmt(nf.adjoint_residual) << '\n';
    out << "E1 residual = " << fmt(nf.e1_residual) << " (condition " << fmt(nf.e1_condition)
        << "), E2 residual = " << fmt(nf.e2_residual) << " (condition " << fmt(nf.e2_condition)
        << ")\n";
    const auto& main = route == FormulaRoute::Derived ? h.result : h.printed_result;
    const auto& other = route == FormulaRoute::Derived ? h.printed_result : h.result;
    print_result(out, "result", main);
    print_result(out, route == FormulaRoute::Derived ? "printed route" : "derived route", other);
    print_result(out, "derived route with cubic Taylor terms", h.with_cubic);
    out << "discrepancy log (printed vs derived):\n";
    for (const auto& d : h.log) {
        out << "  " << (d.agrees() ? "agree  " : "DIFFER ") << d.quantity
            << ": printed " << fmt(d.printed) << ", derived " << fmt(d.derived)
            << ", rel " << fmt(d.rel_diff()) << '\n';
    }
    return Ok;
}

inline int cmd_simulate(const RunConfig& cfg, std::optional<int> index, std::ostream& out,
                        std::ostream& err) {
    const Model m(cfg.model);
    std::optional<Selection> sel;
    try {
        sel = select_e4(m, index);
    } catch (const app_error&) {
        if (!cfg.analysis.initial) throw;
    }
    SimConfig sc;
    sc.tau = cfg.analysis.tau;
    sc.dt = cfg.analysis.dt;
    sc.t_end = cfg.analysis.t_end;
    if (cfg.analysis.initial) {
        sc.initial = *cfg.analysis.initial;
    } else {
        sc.initial = sel->e4[sel->index].state();
        sc.initial.omega += 1e-3;
    }
    const auto tr = simulate(m, sc);
    auto csv = open_output(cfg.output.dir, "trajectory.csv");
    csv << "t,omega,lambda,b\n";
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const auto& u = tr.states[i];
        csv << fmt(tr.times[i]) << ',' << fmt(u.omega) << ',' << fmt(u.lambda) << ','
            << fmt(u.b) << '\n';
    }
    csv.close();
    if (cfg.output.svg) {
        auto svg = open_output(cfg.output.dir, "trajectory.svg");
        write_svg(svg, tr);
    }
    out << "tau = " << fmt(sc.tau) << ", dt = " << fmt(tr.dt) << ", nodes = " << tr.size() << '\n';
    if (!tr.states.empty()) {
        const auto& u = tr.states.back();
        out << "final state: " << fmt(u.omega) << ", " << fmt(u.lambda) << ", " << fmt(u.b) << '\n';
    }
    if (sel && tr.size() >= 5) {
        const auto eq = sel->e4[sel->index].state();
        out << "distance to E4[" << sel->index << "]: initial " << fmt((sc.initial - eq).norm())
            << ", final " << fmt((tr.states.back() - eq).norm()) << '\n';
        const auto om = oscillation_metrics(tr, eq);
        out << "window amplitudes:";
        for (double a : om.amplitude) out << ' ' << fmt(a);
        out << '\n';
        const bool growing = om.amplitude.back() > om.amplitude[om.amplitude.size() - 2];
        out << "envelope: " << (growing ? "growing" : "decaying") << '\n';
        if (om.period) {
            out << "period = " << fmt(*om.period) << " (" << om.crossings << " crossings)\n";
        } else {
            out << "insufficient oscillation (" << om.crossings << " crossings)\n";
        }
    }
    if (tr.halted()) {
        const auto& e = tr.events.front();
        err << "integration halted at t = " << fmt(e.time) << ": " << to_string(e.kind) << " ("
            << e.message << ")\n";
        return IntegrationEvent;
    }
    return Ok;
}

struct ScanRange {
    double tau_min = 0.0;
    double tau_max = 1.2;
    int steps = 121;
};

inline int cmd_scan(const RunConfig& cfg, std::optional<int> index, const ScanRange& range,
                    std::ostream& out) {
    if (range.steps < 2 || !(range.tau_max > range.tau_min) || range.tau_min < 0.0) {
        throw config_error("scan: need steps >= 2 and 0 <= tau-min < tau-max");
    }
    const Model m(cfg.model);
    const auto s = select_e4(m, index);
    print_selected(out, s);
    if (!routh_hurwitz(s.k).satisfied) {
        throw app_error(HypothesisFailure, "Routh-Hurwitz conditions fail at tau = 0");
    }
    auto csv = open_output(cfg.output.dir, "scan.csv");
    csv << "tau,max_re,im_at_max\n";
    std::optional<double> prev_tau, prev_re;
    for (int i = 0; i < range.steps; ++i) {
        const double tau = range.tau_min + (range.tau_max - range.tau_min) * i / (range.steps - 1);
        const auto roots = rightmost_roots(s.k, tau, cfg.analysis.region, cfg.analysis.grid);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double re = roots.empty() ? nan : roots.front().real();
        const double im = roots.empty() ? nan : roots.front().imag();
        csv << fmt(tau) << ',' << fmt(re) << ',' << fmt(im) << '\n';
        if (prev_re && std::isfinite(re) && (*prev_re < 0.0) != (re < 0.0)) {
            out << "max_re changes sign in (" << fmt(*prev_tau) << ", " << fmt(tau) << ")\n";
        }
        prev_tau = tau;
        if (std::isfinite(re)) prev_re = re;
    }
    return Ok;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Parse arguments and run one command; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App cli{"Analysis of the delayed Keen model with inflation"};
    cli.require_subcommand(1);
    std::string config_path;
    std::vector<std::string> sets;
    std::optional<std::string> out_dir;
    std::optional<int> eq_index;
    std::string route_name = "derived";
    ScanRange range;

    auto common = [&](CLI::App* sub, bool with_eq) {
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--set", sets, "override a config value, key.path=value");
        sub->add_option("--out", out_dir, "output directory");
        if (with_eq) sub->add_option("--eq", eq_index, "index into E4 points sorted by omega*");
    };
    auto* c_eq = cli.add_subcommand("equilibria", "all equilibria");
    common(c_eq, false);
    auto* c_st = cli.add_subcommand("stability", "K constants and Routh-Hurwitz test");
    common(c_st, true);
    auto* c_cd = cli.add_subcommand("critical-delay", "h(z) roots and critical delays");
    common(c_cd, true);
    auto* c_nf = cli.add_subcommand("normal-form", "Hopf classification at tau0");
    common(c_nf, true);
    c_nf->add_option("--route", route_name, "derived or printed")
        ->check(CLI::IsMember({"derived", "printed"}));
    auto* c_sim = cli.add_subcommand("simulate", "integrate the delayed system");
    common(c_sim, true);
    auto* c_scan = cli.add_subcommand("scan", "rightmost root real part against tau");
    common(c_scan, true);
    c_scan->add_option("--tau-min", range.tau_min, "first delay");
    c_scan->add_option("--tau-max", range.tau_max, "last delay");
    c_scan->add_option("--steps", range.steps, "number of grid points");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << cli.help();
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return ConfigError;
    }

    try {
        RunConfig cfg = load_config(config_path, sets);
        if (out_dir) cfg.output.dir = *out_dir;
        if (c_eq->parsed()) return cmd_equilibria(cfg, out, err);
        if (c_st->parsed()) return cmd_stability(cfg, eq_index, out);
        if (c_cd->parsed()) return cmd_critical_delay(cfg, eq_index, out);
        if (c_nf->parsed()) {
            const auto route = route_name == "printed" ? FormulaRoute::Printed : FormulaRoute::Derived;
            return cmd_normal_form(cfg, eq_index, route, out);
        }
        if (c_sim->parsed()) return cmd_simulate(cfg, eq_index, out, err);
        return cmd_scan(cfg, eq_index, range, out);
    } catch (const app_error& e) {
        err << "error: " << e.what() << '\n';
        return e.code;
    } catch (const config_error& e) {
        err << "config error: " << e.what() << '\n';
        return ConfigError;
    } catch (const hypothesis_error& e) {
        err << "error: " << e.what() << '\n';
        return HypothesisFailure;
    } catch (const degenerate_error& e) {
        err << "error: " << e.what() << '\n';
        return HypothesisFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return HypothesisFailure;
    }
}

}  // namespace keen::app
