// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "app.hpp"

using namespace keen;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
    if (!ok) ++failures;
}

std::string f(double v) { return app::fmt(v); }
std::string f(cplx z) { return app::fmt(z); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

State state_of(const Equilibrium& e) { return {e.omega_star, e.lambda_star, e.b_star}; }

}  // namespace

int main() {
    const auto cfg = app::load_config(std::string(KEEN_CONFIG_DIR) + "/paper.json", {});
    const Model m(cfg.model);
    const auto e4 = find_e4(m);
    if (e4.size() != 2) {
        std::printf("criterion  1: FAIL  expected two E4 points, found %zu\n", e4.size());
        return 1;
    }
    const Equilibrium& e41 = e4[1];  // ascending omega*
    const Equilibrium& e42 = e4[0];
    const auto k1 = k_constants(m, e41);
    const auto k2 = k_constants(m, e42);

    // 1. equilibria
    {
        const double d1 = std::max({std::abs(e41.omega_star - 0.836260),
                                    std::abs(e41.lambda_star - 0.968365),
                                    std::abs(e41.b_star - 0.063277)});
        const double d2 = std::max({std::abs(e42.omega_star - 0.808446),
                                    std::abs(e42.lambda_star - 0.965992),
                                    std::abs(e42.b_star - 0.990423)});
        const double res = std::max(
            equilibrium_residual(m, e41.omega_star, e41.lambda_star, e41.b_star),
            equilibrium_residual(m, e42.omega_star, e42.lambda_star, e42.b_star));
        report(1, d1 < 1e-5 && d2 < 1e-5 && res < 1e-9,
               "max coordinate error " + f(std::max(d1, d2)) + ", residual " + f(res));
    }

    // 2. inflation at the equilibria
    {
        const double z1 = m.inflation(e41.omega_star), z2 = m.inflation(e42.omega_star);
        report(2, std::abs(z1 - 0.0049) < 1e-4 && std::abs(z2 + 0.0418) < 1e-4,
               "Z = " + f(z1) + ", " + f(z2));
    }

    // 3. Routh-Hurwitz, checked against cubic roots
    {
        auto max_re = [](const LinearizationConstants& k) {
            double r = -1e300;
            for (const auto& z : char_cubic(k).roots()) r = std::max(r, z.real());
            return r;
        };
        const bool s1 = routh_hurwitz(k1).satisfied, s2 = routh_hurwitz(k2).satisfied;
        const double r1 = max_re(k1), r2 = max_re(k2);
        report(3, s1 && !s2 && r1 < 0.0 && r2 > 0.0,
               std::string("E4,1 ") + (s1 ? "satisfied" : "violated") + " (max Re " + f(r1) +
                   "), E4,2 " + (s2 ? "satisfied" : "violated") + " (max Re " + f(r2) + ")");
    }

    const auto hz = hz_coefficients(k1);
    const auto pr = positive_roots(hz);

    // 4. roots of h
    {
        bool ok = pr.roots.size() == 2;
        std::string detail = "mu =";
        for (double z : pr.roots) detail += " " + f(std::sqrt(z));
        if (ok) {
            ok = std::abs(std::sqrt(pr.roots[1]) - 2.157) < 1e-3 &&
                 std::abs(std::sqrt(pr.roots[0]) - 1.881) < 1e-3;
        }
        int negative = 0;
        for (const auto& z : pr.all_roots) {
            if (z.real() < 0.0 && z.imag() == 0.0) {
                ++negative;
                ok = ok && std::abs(std::sqrt(-z.real()) - 0.050) < 1e-3;
                detail += ", sqrt|z-| = " + f(std::sqrt(-z.real()));
            }
        }
        report(4, ok && negative == 1, detail);
    }

    const auto verdict = stability_verdict(k1, cfg.analysis.j_max);
    const double tau0 = verdict.tau0.value_or(0.0);
    const double mu0 = verdict.mu0.value_or(0.0);

    // 5. critical delay
    {
        const double res = std::abs(quasipoly(k1, cplx(0.0, mu0), tau0));
        report(5, std::abs(tau0 - 0.82998) < 1e-4 && std::abs(mu0 - 2.157) < 1e-3 && res < 1e-8,
               "tau0 = " + f(tau0) + ", mu0 = " + f(mu0) + ", |P(i mu0, tau0)| = " + f(res));
    }

    // 6. transversality
    {
        const double hp = verdict.crossing ? verdict.crossing->hprime : 0.0;
        const double dt = 0.01;
        const cplx up = track_root(k1, cplx(0.0, mu0), tau0 + dt);
        const cplx dn = track_root(k1, cplx(0.0, mu0), tau0 - dt);
        const double slope = (up.real() - dn.real()) / (2.0 * dt);
        const bool agree = (hp > 0.0) == (slope > 0.0);
        report(6, std::abs(hp - 5.180) < 1e-2 && agree,
               "h'(z0) = " + f(hp) + ", d Re x / d tau = " + f(slope));
    }

    // 7. rightmost roots
    {
        const auto at85 = rightmost_roots(k1, 0.85, cfg.analysis.region, cfg.analysis.grid);
        double best = 1e300;
        for (const auto& z : at85) best = std::min(best, std::abs(z - cplx(0.00579485, 2.15435)));
        const auto at80 = rightmost_roots(k1, 0.80, cfg.analysis.region, cfg.analysis.grid);
        bool left = !at80.empty();
        for (const auto& z : at80) left = left && z.real() < 0.0;
        report(7, best < 1e-4 && left,
               "root at 0.85: " + (at85.empty() ? std::string("none") : f(at85.front())) +
                   ", distance " + f(best) + ", max Re at 0.80 " +
                   (at80.empty() ? std::string("none") : f(at80.front().real())));
    }

    // 8. normal-form signs
    {
        const auto h = analyze_hopf(k1, mu0, tau0);
        const auto& r = h.result;
        const bool ok = r.mu_bar2 < 0.0 && r.beta2 > 0.0 && r.t2 < 0.0;
        report(8, ok,
               "expected mu2 < 0, beta2 > 0, T2 < 0; got mu2 = " + f(r.mu_bar2) + ", beta2 = " +
                   f(r.beta2) + ", T2 = " + f(r.t2) + " (" + to_string(r.direction) + ", " +
                   to_string(r.orbit_stability) + ")");
        const cplx target(436.694, 3390.52);
        std::printf("    c1(0) derived          = %s\n", f(r.c1).c_str());
        std::printf("    c1(0) printed formulas = %s  (mu2 = %s)\n", f(h.printed_result.c1).c_str(),
                    f(h.printed_result.mu_bar2).c_str());
        std::printf("    c1(0) with cubic terms = %s  (mu2 = %s)\n", f(h.with_cubic.c1).c_str(),
                    f(h.with_cubic.mu_bar2).c_str());
        std::printf("    reference c1(0)        = %s  (|derived|/|reference| = %s)\n",
                    f(target).c_str(), f(std::abs(r.c1) / std::abs(target)).c_str());
        std::printf("    discrepancy log (printed vs derived):\n");
        for (const auto& d : h.log) {
            std::printf("      %s %s: printed %s, derived %s, rel %s\n",
                        d.agrees() ? "agree " : "DIFFER", d.quantity.c_str(), f(d.printed).c_str(),
                        f(d.derived).c_str(), f(d.rel_diff()).c_str());
        }
    }

    // 9. property suite
    {
        std::string bad;
        for (double l : {0.2, 0.6, 0.95}) {
            const double h = 1e-6 * (1.0 - l);
            const double fd = (m.phillips(l + h) - m.phillips(l - h)) / (2.0 * h);
            if (rel(fd, m.phillips_d1(l)) > 1e-6) bad += " phillips'";
        }
        for (double s : {-0.1, 0.16, 0.4}) {
            const double fd = (m.kappa(s + 1e-6) - m.kappa(s - 1e-6)) / 2e-6;
            if (rel(fd, m.kappa_d1(s)) > 1e-6) bad += " kappa'";
        }
        if (std::abs(m.phillips_inv(m.phillips(0.5)) - 0.5) > 1e-12) bad += " phillips_inv";
        if (std::abs(m.kappa(m.kappa_inv(0.1)) - 0.1) > 1e-12) bad += " kappa_inv";
        if (k1.k4 != k1.r * k1.k3 - k1.k7 || k1.k5 != k1.k7 + k1.r * k1.k6) bad += " K-identities";

        const auto nf = center_manifold(k1, mu0, tau0, FormulaRoute::Derived);
        const cplx norm = bilinear_product(k1, mu0, tau0, scaled(nf.qstar0, std::conj(nf.b_bar)),
                                           +1, nf.q0, +1);
        if (nf.eigen_residual > 1e-8 || nf.adjoint_residual > 1e-8) bad += " eigenresidual";
        if (std::abs(norm - 1.0) > 1e-10) bad += " normalization";

        auto endpoint = [&](double dt) {
            SimConfig sc;
            sc.tau = 0.85;
            sc.dt = dt;
            sc.t_end = 0.85 * 24.0;
            sc.initial = state_of(e41);
            sc.initial.omega += 1e-2;
            return simulate(m, sc).states.back();
        };
        const auto ref = endpoint(0.85 / 512.0);
        const double order = (endpoint(0.85 / 16.0) - ref).norm() / (endpoint(0.85 / 32.0) - ref).norm();
        if (order < 12.0 || order > 20.0) bad += " rk4-order";

        SimConfig still;
        still.tau = 0.85;
        still.t_end = 100.0;
        still.initial = state_of(e41);
        double drift = 0.0;
        for (const auto& u : simulate(m, still).states) drift = std::max(drift, (u - state_of(e41)).norm());
        if (drift > 1e-8) bad += " invariance";

        SimConfig osc;
        osc.tau = 0.85;
        osc.t_end = 400.0;
        osc.initial = state_of(e41);
        osc.initial.omega += 1e-3;
        const auto om = oscillation_metrics(simulate(m, osc), state_of(e41));
        const double expected = 2.0 * std::numbers::pi / mu0;
        if (!om.period || std::abs(*om.period - 2.913) > 0.05 * 2.913) bad += " period";

        report(9, bad.empty(),
               "RK4 factor " + f(order) + ", drift " + f(drift) + ", period " +
                   (om.period ? f(*om.period) : std::string("none")) + " vs 2 pi/mu0 = " +
                   f(expected) + (bad.empty() ? "" : ", failing:" + bad));
    }

    // 10. scan
    {
        std::optional<double> prev_tau, prev_re;
        std::optional<double> lo, hi;
        for (int i = 0; i <= 120; ++i) {
            const double tau = 0.01 * i;
            const auto roots = rightmost_roots(k1, tau, cfg.analysis.region, cfg.analysis.grid);
            if (roots.empty()) continue;
            const double re = roots.front().real();
            if (prev_re && (*prev_re < 0.0) != (re < 0.0) && !lo) {
                lo = prev_tau;
                hi = tau;
            }
            prev_tau = tau;
            prev_re = re;
        }
        const bool ok = lo && *lo >= 0.82 - 1e-12 && *hi <= 0.84 + 1e-12;
        report(10, ok,
               lo ? "sign change in (" + f(*lo) + ", " + f(*hi) + ")" : std::string("no sign change"));
    }

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
