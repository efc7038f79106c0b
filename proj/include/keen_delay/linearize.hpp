#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "keen_delay/cubic.hpp"
#include "keen_delay/equilibria.hpp"
#include "keen_delay/errors.hpp"
#include "keen_delay/linalg.hpp"
#include "keen_delay/model.hpp"

namespace keen {

/// Linearization constants at an interior equilibrium, plus the model
/// derivatives the quadratic terms need. Computed once, passed by value.
struct LinearizationConstants {
    double k0 = 0, k1 = 0, k2 = 0, k3 = 0, k4 = 0, k5 = 0;
    double k6 = 0, k7 = 0, k8 = 0, k9 = 0, k10 = 0, k11 = 0;
    double a_hat0 = 0;          ///< xi eta_p (gamma - 1)
    double a_hat1 = 0;          ///< -phi0 - alpha + eta_p - gamma eta_p (from expanding -(1-gamma) Z)
    double a_hat1_printed = 0;  ///< -phi0 - alpha - eta_p - gamma eta_p, as printed; unused

    // equilibrium and the derivatives entering the quadratic terms
    double r = 0;
    double omega = 0, lambda = 0, b = 0, pi = 0;
    double eta_xi = 0;     ///< eta_p xi
    double phi_d1 = 0;     ///< Phi'(lambda*)
    double phi_d2 = 0;     ///< Phi''(lambda*)
    double g_d1 = 0;       ///< g'(pi*)
    double g_d2 = 0;       ///< g''(pi*)
    double kappa_d1 = 0;   ///< kappa'(pi*)
    double kappa_d2 = 0;   ///< kappa''(pi*)
    double phi_d3 = 0;     ///< Phi'''(lambda*)
    double g_d3 = 0;       ///< g'''(pi*)
    double kappa_d3 = 0;   ///< kappa'''(pi*)
};

struct JacobianPair {
    Mat3<double> j0{};     ///< coefficient of u(t)
    Mat3<double> j_tau{};  ///< coefficient of u(t - tau)
};

[[nodiscard]] inline LinearizationConstants k_constants(const Model& m, const Equilibrium& e) {
    if (e.kind != EquilibriumKind::E4) {
        throw domain_error(std::string("k_constants: requires an E4 equilibrium, got ") +
                           to_string(e.kind));
    }
    if (!(e.lambda_star > 0.0 && e.lambda_star < 1.0)) {
        throw domain_error("k_constants: lambda* outside (0, 1)");
    }
    const auto& p = m.params();
    LinearizationConstants k;
    k.r = p.r;
    k.omega = e.omega_star;
    k.lambda = e.lambda_star;
    k.b = e.b_star;
    k.pi = m.profit_share(e.omega_star, e.b_star);
    k.eta_xi = p.eta_p * p.xi;
    k.phi_d1 = m.phillips_d1(k.lambda);
    k.phi_d2 = m.phillips_d2(k.lambda);
    k.kappa_d1 = m.kappa_d1(k.pi);
    k.kappa_d2 = m.kappa_d2(k.pi);
    k.g_d1 = m.growth_d1(k.pi);
    k.g_d2 = m.growth_d2(k.pi);
    k.phi_d3 = 4.0 * k.phi_d2 / (1.0 - k.lambda);
    k.kappa_d3 = p.kappa2 * k.kappa_d2;
    k.g_d3 = k.kappa_d3 / p.nu;

    const double z = m.inflation(k.omega);
    k.k0 = (p.gamma - 1.0) * k.omega * k.eta_xi;
    k.k1 = k.omega * k.phi_d1;
    k.k2 = k.lambda * k.kappa_d1 / p.nu;
    k.k3 = 1.0 - k.kappa_d1 + k.b * k.g_d1;
    k.k7 = z + p.alpha + p.beta;
    k.k4 = p.r * k.k3 - k.k7;
    k.k6 = -k.b * k.eta_xi;
    k.k5 = k.k7 - k.b * p.r * k.eta_xi;
    k.k8 = k.lambda * k.kappa_d2 / (2.0 * p.nu);
    k.k9 = k.kappa_d2 / (2.0 * p.nu) * (p.nu - k.b);
    k.k10 = p.r * p.r * k.k9 + p.r * k.kappa_d1 / p.nu;
    k.k11 = 2.0 * p.r * k.k9 + k.kappa_d1 / p.nu;
    k.a_hat0 = k.eta_xi * (p.gamma - 1.0);
    k.a_hat1 = -p.phi0 - p.alpha + p.eta_p - p.gamma * p.eta_p;
    k.a_hat1_printed = -p.phi0 - p.alpha - p.eta_p - p.gamma * p.eta_p;
    return k;
}

/// Jacobians of the delayed system at the equilibrium, using g(pi*) = alpha + beta.
[[nodiscard]] inline JacobianPair jacobians_at(const LinearizationConstants& k) {
    JacobianPair j;
    j.j0 = {{{0.0, k.k1, 0.0}, {-k.k2, 0.0, -k.r * k.k2}, {k.k3, 0.0, k.k4}}};
    j.j_tau = {{{k.k0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {k.k6, 0.0, 0.0}}};
    return j;
}

[[nodiscard]] inline JacobianPair jacobians_at(const Model& m, const Equilibrium& e) {
    return jacobians_at(k_constants(m, e));
}

/// P0(x) = c3 x^3 + c2 x^2 + c1 x + c0, the characteristic polynomial at tau = 0.
struct CharCubic {
    double c3 = -1.0;
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;

    template <typename T>
    [[nodiscard]] T operator()(T x) const {
        return ((c3 * x + c2) * x + c1) * x + c0;
    }

    [[nodiscard]] std::array<cplx, 3> roots() const {
        return solve_monic_cubic(c2 / c3, c1 / c3, c0 / c3);
    }
};

[[nodiscard]] inline CharCubic char_cubic(const LinearizationConstants& k) {
    return {-1.0, k.k0 + k.k4, -(k.k0 * k.k4 + k.k1 * k.k2), -k.k1 * k.k2 * k.k5};
}

struct RouthHurwitz {
    bool satisfied = false;
    bool marginal = false;   ///< some condition within 1e-12 of zero
    double trace = 0.0;      ///< K0 + K4, must be < 0
    double constant = 0.0;   ///< K1 K2 K5, must be > 0
    double hurwitz = 0.0;    ///< K1 K2 K5 + (K0+K4)(K0 K4 + K1 K2), must be < 0
    double derived = 0.0;    ///< K0 K4 + K1 K2, > 0 whenever the three hold
};

[[nodiscard]] inline RouthHurwitz routh_hurwitz(const LinearizationConstants& k) {
    RouthHurwitz rh;
    rh.trace = k.k0 + k.k4;
    rh.constant = k.k1 * k.k2 * k.k5;
    rh.derived = k.k0 * k.k4 + k.k1 * k.k2;
    rh.hurwitz = rh.constant + rh.trace * rh.derived;
    rh.satisfied = rh.trace < 0.0 && rh.constant > 0.0 && rh.hurwitz < 0.0;
    constexpr double eps = 1e-12;
    rh.marginal = std::abs(rh.trace) < eps || std::abs(rh.constant) < eps ||
                  std::abs(rh.hurwitz) < eps;
    return rh;
}

}  // namespace keen
