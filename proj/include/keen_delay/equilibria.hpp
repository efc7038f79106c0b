#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "keen_delay/errors.hpp"
#include "keen_delay/model.hpp"

namespace keen {

enum class EquilibriumKind { E1, E2, E3, E4 };

[[nodiscard]] inline const char* to_string(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::E1: return "E1";
        case EquilibriumKind::E2: return "E2";
        case EquilibriumKind::E3: return "E3";
        case EquilibriumKind::E4: return "E4";
    }
    return "?";
}

struct Equilibrium {
    EquilibriumKind kind = EquilibriumKind::E4;
    double omega_star = 0.0;
    double lambda_star = 0.0;  ///< meaningless when lambda_free
    double b_star = 0.0;
    double pi_star = 0.0;      ///< 1 - omega* - r b*
    bool lambda_free = false;  ///< E3: any lambda is an equilibrium
    bool admissible = false;   ///< omega*, lambda* in (0,1), b* finite, denominators nonzero
    double residual = std::numeric_limits<double>::quiet_NaN();
    std::string note;          ///< reason for inadmissibility, if any

    [[nodiscard]] State state() const { return {omega_star, lambda_star, b_star}; }
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Sign-scan settings for the scalar equations defining b* of E1 and E2.
/// The default scan covers [-half_width/r, half_width/r].
struct ScanOptions {
    double half_width = 1e3;
    int points = 10000;
};

/// Largest absolute value among the stationarity equations
///   omega [Phi(lambda) - alpha - (1-gamma) Z(omega)]
///   lambda [g(pi) - alpha - beta]
///   kappa(pi) - pi - b [Z(omega) + g(pi)]
/// with pi = 1 - omega - r b (so the accounting identity holds exactly).
[[nodiscard]] inline double equilibrium_residual(const Model& m, double omega, double lambda,
                                                 double b) {
    const auto& p = m.params();
    if (!(lambda >= 0.0 && lambda < 1.0)) return std::numeric_limits<double>::infinity();
    const double pi = m.profit_share(omega, b);
    const double z = m.inflation(omega);
    const double e1 = omega * (m.phillips(lambda) - p.alpha - (1.0 - p.gamma) * z);
    const double e2 = lambda * (m.growth(pi) - p.alpha - p.beta);
    const double e3 = m.kappa(pi) - pi - b * (z + m.growth(pi));
    return std::max({std::abs(e1), std::abs(e2), std::abs(e3)});
}

/// Profit share at any equilibrium with (omega*, lambda*) != (0, 0).
[[nodiscard]] inline double find_pi_star(const Model& m) {
    const auto& p = m.params();
    return m.kappa_inv(p.nu * (p.alpha + p.beta + p.delta));
}

namespace detail {

/// Roots of a0 x^2 + a1 x + a2 = 0 without cancellation, ascending.
inline std::vector<double> stable_quadratic_roots(double a0, double a1, double a2) {
    const double disc = a1 * a1 - 4.0 * a0 * a2;
    if (disc < 0.0 || a0 == 0.0) return {};
    const double s = std::sqrt(disc);
    const double q = -0.5 * (a1 + std::copysign(s, a1));
    std::vector<double> roots;
    roots.push_back(q / a0);
    roots.push_back(q != 0.0 ? a2 / q : q / a0);
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// Bisection to |hi - lo| <= 1e-12 (1 + |x|), then one Newton step kept only
/// if it lowers |f|.
inline double refine_root(const std::function<double(double)>& f,
                          const std::function<double(double)>& df, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 400 && std::abs(hi - lo) > 1e-12 * (1.0 + std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    const double fx = f(x);
    const double d = df(x);
    if (d != 0.0 && std::isfinite(d)) {
        const double xn = x - fx / d;
        if (std::isfinite(xn) && std::abs(f(xn)) < std::abs(fx)) x = xn;
    }
    return x;
}

/// All sign-change roots of f over the bracket (scanned) or, when an
/// explicit bracket is given, the single root inside it.
inline std::vector<double> scalar_roots(const std::function<double(double)>& f,
                                        const std::function<double(double)>& df,
                                        const std::optional<Interval>& bracket,
                                        const Interval& scan_range, int points,
                                        const char* who) {
    std::vector<double> roots;
    if (bracket) {
        const double fa = f(bracket->lo), fb = f(bracket->hi);
        if (!std::isfinite(fa) || !std::isfinite(fb) || (fa < 0.0) == (fb < 0.0)) {
            if (fa == 0.0) return {bracket->lo};
            if (fb == 0.0) return {bracket->hi};
            throw no_root_error(std::string(who) + ": bracket has no sign change");
        }
        roots.push_back(refine_root(f, df, bracket->lo, bracket->hi));
        return roots;
    }
    const int n = std::max(points, 2);
    const double h = (scan_range.hi - scan_range.lo) / (n - 1);
    double xa = scan_range.lo;
    double fa = f(xa);
    for (int i = 1; i < n; ++i) {
        const double xb = scan_range.lo + h * i;
        const double fb = f(xb);
        if (std::isfinite(fa) && std::isfinite(fb)) {
            if (fa == 0.0) {
                roots.push_back(xa);
            } else if ((fa < 0.0) != (fb < 0.0) && fb != 0.0) {
                roots.push_back(refine_root(f, df, xa, xb));
            }
        }
        xa = xb;
        fa = fb;
    }
    if (roots.empty()) throw no_root_error(std::string(who) + ": no sign change in scan range");
    std::sort(roots.begin(), roots.end());
    return roots;
}

inline Interval default_scan(const Model& m, const ScanOptions& opt, const char* who) {
    const double r = m.params().r;
    if (r == 0.0) throw singular_error(std::string(who) + ": scan range 1/r undefined for r = 0");
    const double w = std::abs(opt.half_width / r);
    return {-w, w};
}

inline void finish(const Model& m, Equilibrium& e) {
    e.pi_star = m.profit_share(e.omega_star, e.b_star);
    const double lam = e.lambda_free ? 0.5 : e.lambda_star;
    e.residual = equilibrium_residual(m, e.omega_star, lam, e.b_star);
}

}  // namespace detail

/// The interior equilibria E4: zero, one or two points, ascending in omega*.
/// Roots where lambda* or b* is undefined are kept and marked inadmissible.
[[nodiscard]] inline std::vector<Equilibrium> find_e4(const Model& m) {
    const auto& p = m.params();
    const double pi = find_pi_star(m);
    const double kp = m.kappa(pi);
    const double a0 = p.xi * p.eta_p;
    const double a1 = p.alpha + p.beta - p.eta_p - p.xi * p.eta_p * (1.0 - pi);
    const double a2 = (p.eta_p - p.alpha - p.beta) * (1.0 - pi) + p.r * (kp - pi);

    std::vector<Equilibrium> out;
    for (double omega : detail::stable_quadratic_roots(a0, a1, a2)) {
        Equilibrium e;
        e.kind = EquilibriumKind::E4;
        e.omega_star = omega;
        const double z = m.inflation(omega);
        const double denom = z + p.alpha + p.beta;
        if (std::abs(denom) < 1e-14) {
            e.b_star = std::numeric_limits<double>::quiet_NaN();
            e.lambda_star = std::numeric_limits<double>::quiet_NaN();
            e.note = "Z(omega*) + alpha + beta vanishes; b* undefined";
            out.push_back(e);
            continue;
        }
        e.b_star = (kp - pi) / denom;
        const double y = p.alpha + (1.0 - p.gamma) * z;
        if (!(y > p.phi1 - p.phi0)) {
            e.lambda_star = std::numeric_limits<double>::quiet_NaN();
            e.pi_star = m.profit_share(omega, e.b_star);
            e.note = "alpha + (1-gamma) Z(omega*) <= Phi(0); lambda* undefined";
            out.push_back(e);
            continue;
        }
        e.lambda_star = m.phillips_inv(y);
        detail::finish(m, e);
        e.admissible = omega > 0.0 && omega < 1.0 && e.lambda_star > 0.0 &&
                       e.lambda_star < 1.0 && std::isfinite(e.b_star);
        if (!e.admissible) e.note = "omega* or lambda* outside (0, 1)";
        out.push_back(e);
    }
    return out;
}

/// E1 = (0, 0, b1*): roots of kappa(1 - r b) - (1 - r b) - b [g(1 - r b) - eta_p].
[[nodiscard]] inline std::vector<Equilibrium> find_e1(const Model& m,
                                                      std::optional<Interval> bracket = {},
                                                      const ScanOptions& opt = {}) {
    const auto& p = m.params();
    auto f = [&](double b) {
        const double pi = 1.0 - p.r * b;
        return m.kappa(pi) - pi - b * (m.growth(pi) - p.eta_p);
    };
    auto df = [&](double b) {
        const double pi = 1.0 - p.r * b;
        return -p.r * m.kappa_d1(pi) + p.r - (m.growth(pi) - p.eta_p) +
               b * p.r * m.growth_d1(pi);
    };
    const Interval range = bracket ? *bracket : detail::default_scan(m, opt, "find_e1");
    std::vector<Equilibrium> out;
    for (double b : detail::scalar_roots(f, df, bracket, range, opt.points, "find_e1")) {
        Equilibrium e;
        e.kind = EquilibriumKind::E1;
        e.b_star = b;
        detail::finish(m, e);
        e.admissible = false;
        e.note = "boundary equilibrium (omega* = lambda* = 0)";
        out.push_back(e);
    }
    return out;
}

/// omega2* = (Phi(0) - alpha) / ((1 - gamma) eta_p xi) + 1/xi.
[[nodiscard]] inline double e2_omega(const Model& m) {
    const auto& p = m.params();
    const double den = (1.0 - p.gamma) * p.eta_p * p.xi;
    if (den == 0.0) throw singular_error("find_e2: (1 - gamma) eta_p xi vanishes");
    return (m.phillips(0.0) - p.alpha) / den + 1.0 / p.xi;
}

/// E2 = (omega2*, 0, b2*).
[[nodiscard]] inline std::vector<Equilibrium> find_e2(const Model& m,
                                                      std::optional<Interval> bracket = {},
                                                      const ScanOptions& opt = {}) {
    const auto& p = m.params();
    const double w2 = e2_omega(m);
    const double z2 = m.inflation(w2);
    auto f = [&](double b) {
        const double pi = 1.0 - w2 - p.r * b;
        return m.kappa(pi) - pi - b * (m.growth(pi) + z2);
    };
    auto df = [&](double b) {
        const double pi = 1.0 - w2 - p.r * b;
        return -p.r * m.kappa_d1(pi) + p.r - (m.growth(pi) + z2) + b * p.r * m.growth_d1(pi);
    };
    const Interval range = bracket ? *bracket : detail::default_scan(m, opt, "find_e2");
    std::vector<Equilibrium> out;
    for (double b : detail::scalar_roots(f, df, bracket, range, opt.points, "find_e2")) {
        Equilibrium e;
        e.kind = EquilibriumKind::E2;
        e.omega_star = w2;
        e.b_star = b;
        detail::finish(m, e);
        e.admissible = false;
        e.note = "boundary equilibrium (lambda* = 0)";
        out.push_back(e);
    }
    return out;
}

/// Consistency residual kappa(pi3) - pi3 - b3 [g(pi3) - eta_p] of the E3 family.
[[nodiscard]] inline double e3_consistency(const Model& m) {
    const auto& p = m.params();
    if (p.r == 0.0) throw singular_error("find_e3: b3* = (1 - pi3*)/r undefined for r = 0");
    const double pi3 = m.growth_inv(p.alpha + p.beta);
    const double b3 = (1.0 - pi3) / p.r;
    return m.kappa(pi3) - pi3 - b3 * (m.growth(pi3) - p.eta_p);
}

/// E3 = (0, any lambda, b3*), present only if the consistency residual is below tol.
[[nodiscard]] inline std::optional<Equilibrium> find_e3(const Model& m, double tol = 1e-9) {
    const auto& p = m.params();
    const double c = e3_consistency(m);
    if (!(std::abs(c) < tol)) return std::nullopt;
    Equilibrium e;
    e.kind = EquilibriumKind::E3;
    e.lambda_free = true;
    e.lambda_star = std::numeric_limits<double>::quiet_NaN();
    e.b_star = (1.0 - m.growth_inv(p.alpha + p.beta)) / p.r;
    detail::finish(m, e);
    e.admissible = false;
    e.note = "family with arbitrary lambda*";
    return e;
}

/// Every equilibrium the solvers find: E4 first (ascending omega*), then E1,
/// E2 (ascending b*), then E3. Families with no root are skipped silently.
[[nodiscard]] inline std::vector<Equilibrium> find_all(const Model& m,
                                                       const ScanOptions& opt = {},
                                                       double e3_tol = 1e-9) {
    std::vector<Equilibrium> out = find_e4(m);
    auto append = [&](auto&& solver) {
        try {
            auto v = solver();
            out.insert(out.end(), v.begin(), v.end());
        } catch (const no_root_error&) {
        } catch (const singular_error&) {
        } catch (const domain_error&) {
        }
    };
    append([&] { return find_e1(m, std::nullopt, opt); });
    append([&] { return find_e2(m, std::nullopt, opt); });
    try {
        if (auto e3 = find_e3(m, e3_tol)) out.push_back(*e3);
    } catch (const singular_error&) {
    } catch (const domain_error&) {
    }
    return out;
}

}  // namespace keen
