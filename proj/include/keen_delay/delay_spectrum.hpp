#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "keen_delay/cubic.hpp"
#include "keen_delay/errors.hpp"
#include "keen_delay/linalg.hpp"
#include "keen_delay/linearize.hpp"

namespace keen {

// ---------------------------------------------------------------------------
// Characteristic quasi-polynomial  P(x, tau) = R(x) + Q(x) exp(-x tau)
//   R(x) = -x^3 + K4 x^2 - K1 K2 x - K1 K2 K7
//   Q(x) =  K0 x^2 - K0 K4 x - r K1 K2 K6
// ---------------------------------------------------------------------------

[[nodiscard]] inline cplx char_r(const LinearizationConstants& k, cplx x) {
    const double k12 = k.k1 * k.k2;
    return ((-x + k.k4) * x - k12) * x - k12 * k.k7;
}

[[nodiscard]] inline cplx char_q(const LinearizationConstants& k, cplx x) {
    return (k.k0 * x - k.k0 * k.k4) * x - k.r * k.k1 * k.k2 * k.k6;
}

[[nodiscard]] inline cplx char_r_d1(const LinearizationConstants& k, cplx x) {
    return (-3.0 * x + 2.0 * k.k4) * x - k.k1 * k.k2;
}

[[nodiscard]] inline cplx char_q_d1(const LinearizationConstants& k, cplx x) {
    return 2.0 * k.k0 * x - k.k0 * k.k4;
}

[[nodiscard]] inline cplx quasipoly(const LinearizationConstants& k, cplx x, double tau) {
    return char_r(k, x) + char_q(k, x) * std::exp(-x * tau);
}

/// d/dx of the quasi-polynomial.
[[nodiscard]] inline cplx quasipoly_dx(const LinearizationConstants& k, cplx x, double tau) {
    return char_r_d1(k, x) + (char_q_d1(k, x) - tau * char_q(k, x)) * std::exp(-x * tau);
}

// ---------------------------------------------------------------------------
// h(z) = z^3 + p z^2 + q z + r~, whose positive roots z = mu^2 give the
// frequencies of imaginary-axis crossings.
// ---------------------------------------------------------------------------

struct HzCoefficients {
    double p = 0.0;
    double q = 0.0;
    double r_tilde = 0.0;
    double delta_disc = 0.0;          ///< p^2 - 3q
    std::optional<double> z1_star;    ///< (-p + sqrt(delta)) / 3
    std::optional<double> z2_star;    ///< (-p - sqrt(delta)) / 3

    [[nodiscard]] double h(double z) const { return ((z + p) * z + q) * z + r_tilde; }
    [[nodiscard]] double h_d1(double z) const { return (3.0 * z + 2.0 * p) * z + q; }
};

[[nodiscard]] inline HzCoefficients hz_coefficients(const LinearizationConstants& k) {
    const double k12 = k.k1 * k.k2;
    HzCoefficients hz;
    hz.p = k.k4 * k.k4 - k.k0 * k.k0 - 2.0 * k12;
    hz.q = k12 * k12 - k.k0 * k.k0 * k.k4 * k.k4 + 2.0 * k12 * k.k4 * k.k7 -
           2.0 * k.r * k.k0 * k12 * k.k6;
    hz.r_tilde = k12 * k12 * (k.k7 * k.k7 - k.r * k.r * k.k6 * k.k6);
    hz.delta_disc = hz.p * hz.p - 3.0 * hz.q;
    if (hz.delta_disc >= 0.0) {
        const double s = std::sqrt(hz.delta_disc);
        hz.z1_star = (-hz.p + s) / 3.0;
        hz.z2_star = (-hz.p - s) / 3.0;
    }
    return hz;
}

/// Which branch of the positive-root classification applies.
enum class PositiveRootCase {
    NegativeConstant,   ///< r~ < 0: at least one positive root
    NoPositiveRoot,     ///< r~ >= 0 and delta <= 0: none
    CriticalPointTest,  ///< r~ >= 0, delta > 0: roots iff z1* > 0 and h(z1*) <= 0
};

[[nodiscard]] inline const char* to_string(PositiveRootCase c) {
    switch (c) {
        case PositiveRootCase::NegativeConstant: return "r~ < 0";
        case PositiveRootCase::NoPositiveRoot: return "r~ >= 0, delta <= 0";
        case PositiveRootCase::CriticalPointTest: return "r~ >= 0, delta > 0";
    }
    return "?";
}

struct PositiveRoots {
    std::vector<double> roots;     ///< ascending
    PositiveRootCase which = PositiveRootCase::NoPositiveRoot;
    bool predicted = false;        ///< what the classification says about existence
    std::array<cplx, 3> all_roots{};
};

[[nodiscard]] inline PositiveRootCase classify(const HzCoefficients& hz, bool* predicted) {
    if (hz.r_tilde < 0.0) {
        if (predicted) *predicted = true;
        return PositiveRootCase::NegativeConstant;
    }
    if (hz.delta_disc <= 0.0) {
        if (predicted) *predicted = false;
        return PositiveRootCase::NoPositiveRoot;
    }
    if (predicted) *predicted = *hz.z1_star > 0.0 && hz.h(*hz.z1_star) <= 0.0;
    return PositiveRootCase::CriticalPointTest;
}

/// Real positive roots of h, Newton-polished.
[[nodiscard]] inline PositiveRoots positive_roots(const HzCoefficients& hz) {
    PositiveRoots out;
    out.which = classify(hz, &out.predicted);
    out.all_roots = solve_monic_cubic(hz.p, hz.q, hz.r_tilde);
    const double scale = 1.0 + std::abs(hz.p) + std::abs(hz.q) + std::abs(hz.r_tilde);
    for (const auto& z : out.all_roots) {
        if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z))) continue;
        double x = z.real();
        for (int it = 0; it < 3; ++it) {
            const double d = hz.h_d1(x);
            if (d == 0.0) break;
            const double xn = x - hz.h(x) / d;
            if (std::abs(hz.h(xn)) >= std::abs(hz.h(x))) break;
            x = xn;
        }
        if (x > 0.0 && std::abs(hz.h(x)) < 1e-10 * scale) out.roots.push_back(x);
    }
    std::sort(out.roots.begin(), out.roots.end());
    out.roots.erase(std::unique(out.roots.begin(), out.roots.end(),
                                [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                    out.roots.end());
    return out;
}

// ---------------------------------------------------------------------------
// Critical delays
// ---------------------------------------------------------------------------

struct CriticalDelay {
    double mu = 0.0;                ///< crossing frequency sqrt(z)
    double z = 0.0;
    double cos_mu_tau = 0.0;
    double sin_mu_tau = 0.0;
    double unit_error = 0.0;        ///< |cos^2 + sin^2 - 1| before angle extraction
    double arccos_check = 0.0;      ///< min distance of the closed-form arccos to angle or 2 pi - angle
    std::vector<double> taus;       ///< tau_j for j = 0..j_max
    std::vector<double> residuals;  ///< |P(i mu, tau_j)|
};

struct CriticalDelaySet {
    std::vector<CriticalDelay> entries;
    double tau0 = std::numeric_limits<double>::quiet_NaN();
    double mu0 = std::numeric_limits<double>::quiet_NaN();
    double z0 = std::numeric_limits<double>::quiet_NaN();
    double hprime_at_z0 = std::numeric_limits<double>::quiet_NaN();
};

/// Closed-form cosine of mu tau on the imaginary axis (printed arccos argument).
[[nodiscard]] inline double critical_cosine_closed_form(const LinearizationConstants& k,
                                                        double mu) {
    const double mu2 = mu * mu;
    const double k12 = k.k1 * k.k2;
    const double num = mu2 * k.k0 * k12 * k.k4 + k.r * mu2 * k12 * k.k4 * k.k6 +
                       mu2 * k.k0 * k12 * k.k7 + k.r * k12 * k12 * k.k6 * k.k7;
    const double den = mu2 * mu2 * k.k0 * k.k0 + mu2 * k.k0 * k.k0 * k.k4 * k.k4 +
                       2.0 * k.r * mu2 * k.k0 * k12 * k.k6 + k.r * k.r * k12 * k12 * k.k6 * k.k6;
    return -num / den;
}

/// Delays at which i mu_k is a root, from the real and imaginary parts of
/// P(i mu, tau) = 0 solved as a 2x2 system for (cos mu tau, sin mu tau).
[[nodiscard]] inline CriticalDelaySet critical_delays(const LinearizationConstants& k,
                                                      const std::vector<double>& roots,
                                                      int j_max = 3) {
    if (roots.empty()) throw degenerate_error("critical_delays: no positive roots of h");
    const double two_pi = 2.0 * std::numbers::pi;
    const HzCoefficients hz = hz_coefficients(k);
    const double k12 = k.k1 * k.k2;
    CriticalDelaySet set;
    for (double z : roots) {
        if (!(z > 0.0)) throw domain_error("critical_delays: roots must be positive");
        CriticalDelay cd;
        cd.z = z;
        cd.mu = std::sqrt(z);
        const double mu = cd.mu;
        // [a -c; c a] [cos; sin] = [u; v]
        const double a = k.k0 * k.k4 * mu;
        const double c = k.r * k12 * k.k6 + k.k0 * mu * mu;
        const double u = mu * mu * mu - k12 * mu;
        const double v = -mu * mu * k.k4 - k12 * k.k7;
        const double det = a * a + c * c;
        if (det < 1e-24) {
            throw degenerate_error("critical_delays: |Q(i mu)| = 0 at mu = " + std::to_string(mu));
        }
        cd.cos_mu_tau = (a * u + c * v) / det;
        cd.sin_mu_tau = (a * v - c * u) / det;
        cd.unit_error = std::abs(cd.cos_mu_tau * cd.cos_mu_tau + cd.sin_mu_tau * cd.sin_mu_tau - 1.0);
        double angle = std::atan2(cd.sin_mu_tau, cd.cos_mu_tau);
        if (angle < 0.0) angle += two_pi;
        const double ac = std::acos(std::clamp(critical_cosine_closed_form(k, mu), -1.0, 1.0));
        cd.arccos_check = std::min(std::abs(ac - angle), std::abs(two_pi - ac - angle));
        for (int j = 0; j <= j_max; ++j) {
            const double tau = (angle + two_pi * j) / mu;
            cd.taus.push_back(tau);
            cd.residuals.push_back(std::abs(quasipoly(k, cplx(0.0, mu), tau)));
        }
        set.entries.push_back(std::move(cd));
    }
    for (const auto& cd : set.entries) {
        if (!(cd.taus.front() >= set.tau0)) {
            set.tau0 = cd.taus.front();
            set.mu0 = cd.mu;
            set.z0 = cd.z;
        }
    }
    set.hprime_at_z0 = hz.h_d1(set.z0);
    return set;
}

struct Transversality {
    double hprime = 0.0;
    int sign = 0;
    bool degenerate = false;  ///< |h'(z0)| < 1e-10
};

[[nodiscard]] inline Transversality transversality(const HzCoefficients& hz, double z0) {
    if (!(z0 > 0.0)) throw domain_error("transversality: z0 must be positive");
    Transversality t;
    t.hprime = hz.h_d1(z0);
    t.degenerate = std::abs(t.hprime) < 1e-10;
    t.sign = t.degenerate ? 0 : (t.hprime > 0.0 ? 1 : -1);
    return t;
}

// ---------------------------------------------------------------------------
// Root location by grid-seeded Newton iteration
// ---------------------------------------------------------------------------

struct Region {
    double re_min = -3.0;
    double re_max = 1.0;
    double im_min = 0.0;
    double im_max = 12.0;
};

struct NewtonGrid {
    int nx = 40;
    int ny = 40;
    int max_iter = 100;
    double step_tol = 1e-12;
    double value_tol = 1e-14;
    double accept_tol = 1e-10;   ///< |P| required to keep a converged seed
    double dedupe = 1e-6;
};

/// Newton iteration on the quasi-polynomial from a seed. Empty if it does
/// not converge within the grid settings.
[[nodiscard]] inline std::optional<cplx> newton_root(const LinearizationConstants& k, cplx x,
                                                     double tau, const NewtonGrid& opt = {}) {
    for (int it = 0; it < opt.max_iter; ++it) {
        const cplx f = quasipoly(k, x, tau);
        if (!std::isfinite(std::abs(f))) return std::nullopt;
        if (std::abs(f) < opt.value_tol) break;
        const cplx d = quasipoly_dx(k, x, tau);
        if (std::abs(d) == 0.0) return std::nullopt;
        const cplx step = f / d;
        x -= step;
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return std::nullopt;
        if (std::abs(step) < opt.step_tol * (1.0 + std::abs(x))) break;
    }
    if (!(std::abs(quasipoly(k, x, tau)) < opt.accept_tol)) return std::nullopt;
    return x;
}

/// Roots of the quasi-polynomial reached from a grid of seeds over the
/// region, deduplicated, upper half-plane representatives, sorted by
/// descending real part. Empty means "no roots found in region".
[[nodiscard]] inline std::vector<cplx> rightmost_roots(const LinearizationConstants& k, double tau,
                                                       const Region& region = {},
                                                       const NewtonGrid& grid = {}) {
    if (tau < 0.0) throw domain_error("rightmost_roots: tau must be >= 0");
    if (!(region.re_max > region.re_min) || !(region.im_max >= region.im_min) || grid.nx < 1 ||
        grid.ny < 1) {
        throw domain_error("rightmost_roots: empty region or grid");
    }
    std::vector<cplx> found;
    for (int ix = 0; ix < grid.nx; ++ix) {
        const double re = grid.nx == 1 ? region.re_min
                                       : region.re_min + (region.re_max - region.re_min) * ix /
                                                             (grid.nx - 1);
        for (int iy = 0; iy < grid.ny; ++iy) {
            const double im = grid.ny == 1 ? region.im_min
                                           : region.im_min + (region.im_max - region.im_min) *
                                                                 iy / (grid.ny - 1);
            auto root = newton_root(k, cplx(re, im), tau, grid);
            if (!root) continue;
            cplx x = *root;
            if (x.imag() < 0.0) x = std::conj(x);
            if (std::abs(x.imag()) < 1e-12) x = {x.real(), 0.0};
            const bool dup = std::any_of(found.begin(), found.end(), [&](const cplx& y) {
                return std::abs(x - y) <= grid.dedupe;
            });
            if (!dup) found.push_back(x);
        }
    }
    std::sort(found.begin(), found.end(),
              [](const cplx& a, const cplx& b) { return a.real() > b.real(); });
    return found;
}

/// Newton continuation of a single root to a new delay.
[[nodiscard]] inline cplx track_root(const LinearizationConstants& k, cplx seed, double tau) {
    NewtonGrid opt;
    opt.max_iter = 200;
    auto r = newton_root(k, seed, tau, opt);
    if (!r) throw no_root_error("track_root: Newton iteration did not converge");
    return *r;
}

/// dx/dtau of the root continued from i mu0, by centered differencing
/// across tau0 +- h.
[[nodiscard]] inline cplx root_tau_derivative(const LinearizationConstants& k, double mu0,
                                              double tau0, double h = 0.005) {
    const cplx seed(0.0, mu0);
    const cplx plus = track_root(k, seed, tau0 + h);
    const cplx minus = track_root(k, seed, tau0 - h);
    return (plus - minus) / (2.0 * h);
}

// ---------------------------------------------------------------------------
// Delay-dependent stability verdict
// ---------------------------------------------------------------------------

enum class VerdictCase {
    NoSwitch,      ///< stable for every tau >= 0
    SwitchAtTau0,  ///< stable on [0, tau0), Hopf bifurcation at tau0
};

struct StabilityVerdict {
    VerdictCase which = VerdictCase::NoSwitch;
    std::optional<double> tau0;
    std::optional<double> mu0;
    std::optional<Transversality> crossing;
    PositiveRootCase root_case = PositiveRootCase::NoPositiveRoot;
    std::string text;
};

[[nodiscard]] inline StabilityVerdict stability_verdict(const LinearizationConstants& k,
                                                        int j_max = 3) {
    const auto rh = routh_hurwitz(k);
    if (!rh.satisfied) {
        throw hypothesis_error(
            "stability_verdict: Routh-Hurwitz conditions fail at tau = 0; the equilibrium is "
            "not stable without delay");
    }
    const auto hz = hz_coefficients(k);
    const auto pr = positive_roots(hz);
    StabilityVerdict v;
    v.root_case = pr.which;
    if (pr.roots.empty()) {
        v.which = VerdictCase::NoSwitch;
        v.text = "asymptotically stable for all tau >= 0";
        return v;
    }
    const auto cds = critical_delays(k, pr.roots, j_max);
    v.which = VerdictCase::SwitchAtTau0;
    v.tau0 = cds.tau0;
    v.mu0 = cds.mu0;
    v.crossing = transversality(hz, cds.z0);
    std::string t = "asymptotically stable for tau in [0, " + std::to_string(cds.tau0) + ")";
    if (v.crossing->degenerate) {
        t += "; h'(z0) = 0, crossing is not transversal, Hopf bifurcation not established";
    } else {
        t += "; unstable beyond tau0 until the next crossing; Hopf bifurcation at tau0";
    }
    v.text = t;
    return v;
}

}  // namespace keen
