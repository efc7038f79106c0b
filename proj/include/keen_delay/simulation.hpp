#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "keen_delay/errors.hpp"
#include "keen_delay/model.hpp"
#include "keen_delay/params.hpp"

namespace keen {

/// Right-hand side of the delayed system with the delayed wage share given.
[[nodiscard]] inline State rhs(const Model& m, const State& u, double omega_delayed) {
    if (u.lambda >= 1.0 - 1e-9) throw singular_error("rhs: lambda at the Phillips pole");
    const auto& p = m.params();
    const double pi = m.profit_share(u.omega, u.b);
    const double g = m.growth(pi);
    const double z = m.inflation(omega_delayed);
    return {u.omega * (m.phillips(u.lambda) - p.alpha - (1.0 - p.gamma) * z),
            u.lambda * (g - p.alpha - p.beta),
            m.kappa(pi) - pi - u.b * (z + g)};
}

struct SimConfig {
    double tau = 0.0;
    std::optional<double> dt;          ///< default tau/64, or 0.01 without delay
    double t_end = 100.0;
    State initial{};
    std::optional<State> history;      ///< constant history; defaults to `initial`
    double lambda_guard = 1e-6;

    /// Step actually used.
    [[nodiscard]] double step() const {
        if (dt) return *dt;
        return tau > 0.0 ? tau / 64.0 : 0.01;
    }

    /// Steps per delay (0 without delay).
    [[nodiscard]] std::size_t delay_steps() const {
        if (tau <= 0.0) return 0;
        return static_cast<std::size_t>(std::llround(tau / step()));
    }

    [[nodiscard]] std::vector<std::string> violations() const {
        std::vector<std::string> v;
        const double h = step();
        if (!(h > 0.0) || !std::isfinite(h)) v.emplace_back("dt must be positive");
        if (!(t_end > 0.0) || !std::isfinite(t_end)) v.emplace_back("t_end must be positive");
        if (tau < 0.0 || !std::isfinite(tau)) v.emplace_back("tau must be non-negative");
        if (tau > 0.0 && h > 0.0) {
            const double n = tau / h;
            if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
                v.emplace_back("tau must be an integer multiple of dt");
            } else if (std::llround(n) < 4) {
                v.emplace_back("tau/dt must be at least 4");
            }
        }
        if (!initial.finite()) v.emplace_back("initial state must be finite");
        if (history && !history->finite()) v.emplace_back("history state must be finite");
        return v;
    }

    void validate() const {
        const auto v = violations();
        if (v.empty()) return;
        std::string msg = "invalid simulation config:";
        for (const auto& s : v) msg += " " + s + ";";
        throw config_error(msg);
    }
};

enum class SimEventKind { LambdaBoundary, Nonfinite };

[[nodiscard]] inline const char* to_string(SimEventKind k) {
    return k == SimEventKind::LambdaBoundary ? "lambda-approaching-1" : "nonfinite-value";
}

struct SimEvent {
    SimEventKind kind = SimEventKind::Nonfinite;
    double time = 0.0;
    std::string message;
};

struct Trajectory {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<State> states;
    std::vector<State> derivatives;
    std::vector<SimEvent> events;

    [[nodiscard]] bool halted() const { return !events.empty(); }
    [[nodiscard]] std::size_t size() const { return times.size(); }
};

namespace detail {

inline std::optional<SimEvent> check_state(const State& u, double t, double guard) {
    if (!u.finite()) return SimEvent{SimEventKind::Nonfinite, t, "nonfinite state"};
    if (!(u.lambda > 0.0 && u.lambda < 1.0 - guard)) {
        return SimEvent{SimEventKind::LambdaBoundary, t,
                        "lambda left (0, 1 - " + std::to_string(guard) + ")"};
    }
    return std::nullopt;
}

}  // namespace detail

/// Fixed-step RK4 by the method of steps with constant history.
[[nodiscard]] inline Trajectory simulate(const Model& m, const SimConfig& cfg) {
    cfg.validate();
    const double h = cfg.step();
    const std::size_t n_delay = cfg.delay_steps();
    const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.t_end / h - 1e-9));
    const double hist_omega = cfg.history ? cfg.history->omega : cfg.initial.omega;

    Trajectory tr;
    tr.dt = h;
    tr.times.reserve(n_steps + 1);
    tr.states.reserve(n_steps + 1);
    tr.derivatives.reserve(n_steps + 1);

    // omega at node i - n_delay, its derivative, with constant history before 0
    auto delayed = [&](std::size_t i) -> std::pair<double, double> {
        if (i < n_delay) return {hist_omega, 0.0};
        const std::size_t j = i - n_delay;
        return {tr.states[j].omega, tr.derivatives[j].omega};
    };
    auto delayed_value = [&](std::size_t i) {
        return n_delay == 0 ? std::nullopt : std::optional<double>(delayed(i).first);
    };

    State u = cfg.initial;
    if (auto ev = detail::check_state(u, 0.0, cfg.lambda_guard)) {
        tr.events.push_back(*ev);
        return tr;
    }
    const auto d0 = delayed_value(0);
    tr.times.push_back(0.0);
    tr.states.push_back(u);
    tr.derivatives.push_back(rhs(m, u, d0 ? *d0 : u.omega));

    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t = static_cast<double>(i) * h;
        double wdm = 0.0, wd1 = 0.0;
        if (n_delay > 0) {
            // a step whose delayed interval ends at 0 lies entirely in the history
            const auto [y0, s0] = delayed(i);
            const auto [y1, s1] =
                i + 1 == n_delay ? std::pair<double, double>{hist_omega, 0.0} : delayed(i + 1);
            wd1 = y1;
            wdm = 0.5 * (y0 + y1) + h / 8.0 * (s0 - s1);
        }
        auto f = [&](const State& x, double wd) { return rhs(m, x, n_delay > 0 ? wd : x.omega); };
        try {
            const State q1 = tr.derivatives.back();
            const State q2 = f(u + q1 * (0.5 * h), wdm);
            const State q3 = f(u + q2 * (0.5 * h), wdm);
            const State q4 = f(u + q3 * h, wd1);
            u = u + (q1 + q2 * 2.0 + q3 * 2.0 + q4) * (h / 6.0);
        } catch (const singular_error& e) {
            tr.events.push_back({SimEventKind::LambdaBoundary, t, e.what()});
            return tr;
        }
        const double t1 = static_cast<double>(i + 1) * h;
        if (auto ev = detail::check_state(u, t1, cfg.lambda_guard)) {
            tr.events.push_back(*ev);
            return tr;
        }
        const auto dn = delayed_value(i + 1);
        tr.times.push_back(t1);
        tr.states.push_back(u);
        tr.derivatives.push_back(rhs(m, u, dn ? *dn : u.omega));
    }
    return tr;
}

struct OscillationMetrics {
    std::vector<double> window_start;
    std::vector<double> amplitude;     ///< max |u - u*| per window
    std::optional<double> period;      ///< mean spacing of upward omega crossings, last half
    std::size_t crossings = 0;
    bool insufficient = false;         ///< fewer than 3 upward crossings
};

/// Windowed deviation amplitude and dominant period about an equilibrium.
[[nodiscard]] inline OscillationMetrics oscillation_metrics(const Trajectory& tr,
                                                            const State& eq,
                                                            double window = 0.0) {
    OscillationMetrics out;
    if (tr.size() < 2) {
        out.insufficient = true;
        return out;
    }
    const double t0 = tr.times.front();
    const double span = tr.times.back() - t0;
    if (window <= 0.0) window = span / 4.0;
    if (span < 4.0 * window * (1.0 - 1e-12)) {
        throw config_error("oscillation_metrics: trajectory shorter than 4 windows");
    }
    const auto n_win = static_cast<std::size_t>(std::floor(span / window * (1.0 + 1e-12)));
    out.window_start.resize(n_win);
    out.amplitude.assign(n_win, 0.0);
    for (std::size_t w = 0; w < n_win; ++w) out.window_start[w] = t0 + w * window;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        auto w = static_cast<std::size_t>((tr.times[i] - t0) / window);
        if (w >= n_win) w = n_win - 1;
        out.amplitude[w] = std::max(out.amplitude[w], (tr.states[i] - eq).norm());
    }

    const double half = t0 + 0.5 * span;
    std::vector<double> up;
    for (std::size_t i = 1; i < tr.size(); ++i) {
        if (tr.times[i - 1] < half) continue;
        const double a = tr.states[i - 1].omega - eq.omega;
        const double b = tr.states[i].omega - eq.omega;
        if (a < 0.0 && b >= 0.0) {
            up.push_back(tr.times[i - 1] + (tr.times[i] - tr.times[i - 1]) * (-a) / (b - a));
        }
    }
    out.crossings = up.size();
    if (up.size() < 3) {
        out.insufficient = true;
        return out;
    }
    out.period = (up.back() - up.front()) / static_cast<double>(up.size() - 1);
    return out;
}

}  // namespace keen
