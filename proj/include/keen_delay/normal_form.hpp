#pragma once

// Center-manifold reduction at a Hopf point of the delayed system, in the
// time scale where the delay is 1 and the vector field is multiplied by
// tau_k. Eigenvector components named (alpha, beta) in the classical
// presentation are v2, v3 here; the adjoint ones are w2, w3.

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "keen_delay/delay_spectrum.hpp"
#include "keen_delay/errors.hpp"
#include "keen_delay/linalg.hpp"
#include "keen_delay/linearize.hpp"

namespace keen {

/// The two ways of evaluating the reduction coefficients.
enum class FormulaRoute {
    Derived,  ///< from the quadratic form of the vector field
    Printed,  ///< term-by-term closed forms as printed, typos included
};

[[nodiscard]] inline const char* to_string(FormulaRoute r) {
    return r == FormulaRoute::Derived ? "derived" : "printed";
}

// ---------------------------------------------------------------------------
// Quadratic part of the vector field
// ---------------------------------------------------------------------------

/// Argument slots of the quadratic form: u1(0), u2(0), u3(0), u1(-1).
enum Slot : int { U1 = 0, U2 = 1, U3 = 2, U1Delayed = 3 };

using Arg4 = std::array<cplx, 4>;

/// One monomial coefficient * u_a * u_b in component `row`.
struct QuadraticTerm {
    std::string name;
    int row = 0;
    Slot a = U1;
    Slot b = U1;
    double coefficient = 0.0;

    /// Symmetric bilinear value, so that value(u, u) is the monomial.
    [[nodiscard]] cplx value(const Arg4& x, const Arg4& y) const {
        if (a == b) return coefficient * x[a] * y[a];
        return 0.5 * coefficient * (x[a] * y[b] + x[b] * y[a]);
    }
};

/// Second-order Taylor terms of the right-hand side at the equilibrium,
/// without the tau_k factor.
struct QuadraticForm {
    std::vector<QuadraticTerm> terms;

    [[nodiscard]] Vec3<cplx> operator()(const Arg4& x, const Arg4& y) const {
        Vec3<cplx> out{};
        for (const auto& t : terms) out[t.row] += t.value(x, y);
        return out;
    }
};

/// Quadratic terms of the delayed system. `Printed` drops the omega*
/// factor on the Phi'' term as in the printed matrix form.
[[nodiscard]] inline QuadraticForm quadratic_form(const LinearizationConstants& k,
                                                  FormulaRoute route = FormulaRoute::Derived) {
    const double phi2_coef =
        route == FormulaRoute::Derived ? 0.5 * k.omega * k.phi_d2 : 0.5 * k.phi_d2;
    QuadraticForm f;
    f.terms = {
        {"Phi'' u2^2", 0, U2, U2, phi2_coef},
        {"Phi' u1 u2", 0, U1, U2, k.phi_d1},
        {"a0 u1 u1(-1)", 0, U1, U1Delayed, k.a_hat0},
        {"K8 u1^2", 1, U1, U1, k.k8},
        {"r^2 K8 u3^2", 1, U3, U3, k.r * k.r * k.k8},
        {"-g' u1 u2", 1, U1, U2, -k.g_d1},
        {"r lambda g'' u1 u3", 1, U1, U3, k.r * k.lambda * k.g_d2},
        {"-r g' u2 u3", 1, U2, U3, -k.r * k.g_d1},
        {"K9 u1^2", 2, U1, U1, k.k9},
        {"K10 u3^2", 2, U3, U3, k.k10},
        {"K11 u1 u3", 2, U1, U3, k.k11},
        {"-eta_p xi u3 u1(-1)", 2, U3, U1Delayed, -k.eta_xi},
    };
    return f;
}

/// Symmetric trilinear form C of third derivatives of the vector field, so
/// that C(u, u, u)/6 is the cubic Taylor term. Only u1(0), u2(0), u3(0) enter.
[[nodiscard]] inline Vec3<cplx> cubic_form(const LinearizationConstants& k, const Arg4& x,
                                           const Arg4& y, const Arg4& z) {
    auto dpi = [&](const Arg4& v) { return -v[U1] - k.r * v[U3]; };
    const cplx px = dpi(x), py = dpi(y), pz = dpi(z);
    const cplx ppp = px * py * pz;
    return {k.phi_d2 * (x[U1] * y[U2] * z[U2] + y[U1] * x[U2] * z[U2] + z[U1] * x[U2] * y[U2]) +
                k.omega * k.phi_d3 * x[U2] * y[U2] * z[U2],
            k.g_d2 * (x[U2] * py * pz + y[U2] * px * pz + z[U2] * px * py) +
                k.lambda * k.g_d3 * ppp,
            (k.kappa_d3 - k.b * k.g_d3) * ppp -
                k.g_d2 * (x[U3] * py * pz + y[U3] * px * pz + z[U3] * px * py)};
}

// ---------------------------------------------------------------------------
// Eigenvectors and normalization
// ---------------------------------------------------------------------------

struct Eigenpair {
    Vec3<cplx> q0{};      ///< (1, v2, v3): eigenvector for i mu
    Vec3<cplx> qstar0{};  ///< (1, w2, w3): adjoint eigenvector, before scaling by B
};

[[nodiscard]] inline Eigenpair eigenvectors(const LinearizationConstants& k, double mu,
                                            double tau) {
    constexpr double tiny = 1e-12;
    const cplx i(0.0, 1.0);
    const cplx e = std::exp(-i * mu * tau);
    const cplx den_v3 = k.k4 - i * mu;
    const cplx den_w3 = i * mu * k.k4 - mu * mu;
    if (std::abs(k.k1) < tiny) throw singular_error("eigenvectors: K1 = 0");
    if (std::abs(mu) < tiny) throw singular_error("eigenvectors: mu = 0");
    if (std::abs(den_v3) < tiny) throw singular_error("eigenvectors: K4 - i mu = 0");
    if (std::abs(den_w3) < tiny) throw singular_error("eigenvectors: i mu K4 - mu^2 = 0");
    Eigenpair ep;
    ep.q0 = {1.0, (-k.k0 * e + i * mu) / k.k1, (-k.k3 - k.k6 * e) / den_v3};
    ep.qstar0 = {1.0, -k.k1 / (i * mu), -k.r * k.k1 * k.k2 / den_w3};
    return ep;
}

/// The bilinear form <psi, phi> between psi(s) = psi0 e^{i s_psi mu tau s} and
/// phi(theta) = phi0 e^{i s_phi mu tau theta} (s_psi, s_phi = +-1).
[[nodiscard]] inline cplx bilinear_product(const LinearizationConstants& k, double mu,
                                           double tau, const Vec3<cplx>& psi0, int s_psi,
                                           const Vec3<cplx>& phi0, int s_phi) {
    const auto jac = jacobians_at(k);
    const Vec3<cplx> psib = conj(psi0);
    const cplx lead = dot(psib, phi0);
    // only the delayed atom at theta = -1 contributes to the integral
    const Vec3<cplx> jphi = to_complex(jac.j_tau) * phi0;
    const cplx a_bar(0.0, -s_psi * mu * tau);
    const cplx b(0.0, s_phi * mu * tau);
    const cplx sum = a_bar + b;
    const cplx integral = std::abs(sum) < 1e-14 ? cplx(1.0) : (1.0 - std::exp(-sum)) / sum;
    return lead + tau * dot(psib, jphi) * std::exp(a_bar) * integral;
}

/// B-bar such that <q*, q> = 1 with q* = B qstar0.
[[nodiscard]] inline cplx normalize(const Vec3<cplx>& q0, const Vec3<cplx>& qstar0,
                                    const LinearizationConstants& k, double mu, double tau) {
    const cplx den = bilinear_product(k, mu, tau, qstar0, +1, q0, +1);
    if (std::abs(den) < 1e-12) throw degenerate_error("normalize: <q*, q> vanishes");
    return 1.0 / den;
}

// ---------------------------------------------------------------------------
// Reduction coefficients
// ---------------------------------------------------------------------------

struct GCoefficients {
    cplx g20, g11, g02;
};

struct NormalFormIntermediates {
    FormulaRoute route = FormulaRoute::Derived;
    double mu = 0.0;
    double tau = 0.0;
    Vec3<cplx> q0{};
    Vec3<cplx> qstar0{};   ///< (1, w2, w3); the adjoint eigenvector is conj(b_bar) * qstar0
    cplx b_bar{};
    cplx g20{}, g11{}, g02{}, g21{};
    cplx g21_cubic{};      ///< contribution of the cubic Taylor terms, not part of g21
    Vec3<cplx> w20_at0{}, w20_atm1{};
    Vec3<cplx> w11_at0{}, w11_atm1{};
    Vec3<cplx> nf_e1{};
    Vec3<double> nf_e2{};
    double e1_residual = 0.0, e2_residual = 0.0;
    double e1_condition = 0.0, e2_condition = 0.0;
    double eigen_residual = 0.0;
    double adjoint_residual = 0.0;
};

namespace detail {

/// (u(0), u1(-1)) for the mode q(theta) = q0 e^{i mu tau theta}, or its conjugate.
inline Arg4 mode_args(const Vec3<cplx>& q0, double mu, double tau, bool conjugate) {
    const cplx e = std::exp(cplx(0.0, -mu * tau));
    Arg4 a{q0[0], q0[1], q0[2], q0[0] * e};
    if (conjugate)
        for (auto& x : a) x = std::conj(x);
    return a;
}

inline Vec3<cplx> weights(const Vec3<cplx>& qstar0) {
    return conj(qstar0);
}

/// Coefficient vectors 2 f(q, q) and 2 f(q, q-bar) as printed.
inline Vec3<cplx> printed_h20_rows(const LinearizationConstants& k, const Vec3<cplx>& q0,
                                   double mu, double tau) {
    const cplx v2 = q0[1], v3 = q0[2];
    const cplx em = std::exp(cplx(0.0, -mu * tau));
    const double r = k.r;
    return {v2 * v2 * k.phi_d2 + 2.0 * v2 * k.phi_d1 + 2.0 * k.a_hat0 * em,
            2.0 * k.k8 + 2.0 * r * r * v3 * v3 * k.k8 - 2.0 * v2 * k.g_d1 +
                2.0 * r * k.lambda * v3 * k.g_d2 - 2.0 * r * v2 * v3 * k.g_d1,
            2.0 * k.k9 + 2.0 * v3 * v3 * k.k10 + 2.0 * v3 * k.k11 - 2.0 * v3 * k.eta_xi * em};
}

inline Vec3<cplx> printed_h11_rows(const LinearizationConstants& k, const Vec3<cplx>& q0,
                                   double mu, double tau) {
    const cplx v2 = q0[1], v3 = q0[2];
    const cplx ep = std::exp(cplx(0.0, mu * tau));
    const double r = k.r;
    const double n2 = std::norm(v2), n3 = std::norm(v3);
    return {n2 * k.phi_d2 + 2.0 * k.phi_d1 * v2.real() + 2.0 * k.a_hat0 * ep.real(),
            2.0 * k.k8 * (1.0 + n3 * r * r) - 2.0 * k.g_d1 * v2.real() +
                2.0 * r * k.lambda * k.g_d2 * v3.real() - 2.0 * r * (v2 * v3).real() * k.g_d1,
            2.0 * k.k9 + 2.0 * n3 * k.k10 + 2.0 * v3.real() * k.k11 -
                2.0 * k.eta_xi * (v3 * ep).real()};
}

}  // namespace detail

/// g20, g11, g02 for the normalized pair.
[[nodiscard]] inline GCoefficients g_coefficients(const LinearizationConstants& k,
                                                  const Vec3<cplx>& q0,
                                                  const Vec3<cplx>& qstar0, cplx b_bar,
                                                  double mu, double tau,
                                                  FormulaRoute route = FormulaRoute::Derived) {
    const auto c = detail::weights(qstar0);
    const cplx pre = 2.0 * b_bar * tau;
    if (route == FormulaRoute::Derived) {
        const auto f = quadratic_form(k, route);
        const auto q = detail::mode_args(q0, mu, tau, false);
        const auto qb = detail::mode_args(q0, mu, tau, true);
        return {pre * dot(c, f(q, q)), pre * dot(c, f(q, qb)), pre * dot(c, f(qb, qb))};
    }
    const cplx a = q0[1], b = q0[2], ab = std::conj(a), bb = std::conj(b);
    const cplx as = c[1], bs = c[2];  // already conjugated adjoint components
    const cplx em = std::exp(cplx(0.0, -mu * tau)), ep = std::conj(em);
    const double r = k.r, fp = k.phi_d1, fpp = k.phi_d2, gp = k.g_d1, gpp = k.g_d2;
    const double lam = k.lambda, ex = k.eta_xi;
    const cplx g20 =
        pre * (a * a / 2.0 * fpp + a * fp + k.a_hat0 * em + as * k.k8 + as * b * b * r * r * k.k8 -
               a * as * gp + b * as * r * lam * gpp - a * as * b * r * gp + bs * k.k9 +
               b * b * bs * k.k10 + b * bs * k.k11 - b * bs * ex * em);
    const cplx g11 =
        pre * (a * ab / 2.0 * fpp + a.real() * fp + ep.real() * k.a_hat0 + as * k.k8 +
               b * bb * as * r * r * k.k8 - as * a.real() * gp + as * b.real() * r * lam * gpp -
               as * (a * b).real() * r * gp + bs * k.k9 + b * bb * bs * k.k10 +
               bs * b.real() * k.k11 - 2.0 * bs * ex * (b * ep).real());
    const cplx g02 =
        pre * (ab * ab / 2.0 * fpp + ab * fp + k.a_hat0 * ep + as * k.k8 +
               as * bb * bb * r * r * k.k8 - ab * as * gp + bb * as * r * lam * gpp -
               ab * as * bb * r * gp + bs * k.k9 + bb * bb * bs * k.k10 + bb * bs * k.k11 -
               bb * bs * ex * ep);
    return {g20, g11, g02};
}

struct CenterManifoldCorrections {
    Vec3<cplx> nf_e1{};
    Vec3<double> nf_e2{};
    Vec3<cplx> w20_at0{}, w20_atm1{}, w11_at0{}, w11_atm1{};
    double e1_residual = 0.0, e2_residual = 0.0;
    double e1_condition = 0.0, e2_condition = 0.0;
};

/// Matrix of the E1 system: 2 i mu I - J0 - e^{-2 i mu tau} J_tau.
[[nodiscard]] inline Mat3<cplx> e1_matrix(const LinearizationConstants& k, double mu,
                                          double tau) {
    const auto j = jacobians_at(k);
    const cplx e2 = std::exp(cplx(0.0, -2.0 * mu * tau));
    return scaled(identity3<cplx>(), cplx(0.0, 2.0 * mu)) - to_complex(j.j0) -
           scaled(j.j_tau, e2);
}

/// Matrix of the E2 system: J0 + J_tau.
[[nodiscard]] inline Mat3<double> e2_matrix(const LinearizationConstants& k) {
    const auto j = jacobians_at(k);
    return j.j0 + j.j_tau;
}

/// W20(theta) = i g20/(mu tau) q e^{i mu tau theta} + i conj(g02)/(3 mu tau) conj(q) e^{-i mu tau theta} + E1 e^{2 i mu tau theta}
[[nodiscard]] inline Vec3<cplx> w20_at(const Vec3<cplx>& q0, const GCoefficients& g,
                                       const Vec3<cplx>& e1, double mu, double tau,
                                       double theta) {
    const cplx i(0.0, 1.0);
    const double w = mu * tau;
    const cplx a = i * g.g20 / w * std::exp(i * w * theta);
    const cplx b = i * std::conj(g.g02) / (3.0 * w) * std::exp(-i * w * theta);
    const cplx c = std::exp(2.0 * i * w * theta);
    return scaled(q0, a) + scaled(conj(q0), b) + scaled(e1, c);
}

/// W11(theta) = -i g11/(mu tau) q e^{i mu tau theta} + i conj(g11)/(mu tau) conj(q) e^{-i mu tau theta} + E2
[[nodiscard]] inline Vec3<cplx> w11_at(const Vec3<cplx>& q0, const GCoefficients& g,
                                       const Vec3<double>& e2, double mu, double tau,
                                       double theta) {
    const cplx i(0.0, 1.0);
    const double w = mu * tau;
    const cplx a = -i * g.g11 / w * std::exp(i * w * theta);
    const cplx b = i * std::conj(g.g11) / w * std::exp(-i * w * theta);
    return scaled(q0, a) + scaled(conj(q0), b) + Vec3<cplx>{e2[0], e2[1], e2[2]};
}

/// Solve the E1 and E2 systems and evaluate W20, W11 at theta = 0 and -1.
[[nodiscard]] inline CenterManifoldCorrections nf_linear_systems(
    const LinearizationConstants& k, const Vec3<cplx>& q0, const GCoefficients& g, double mu,
    double tau, FormulaRoute route = FormulaRoute::Derived) {
    Vec3<cplx> rhs20{}, rhs11{};
    if (route == FormulaRoute::Derived) {
        const auto f = quadratic_form(k, route);
        const auto q = detail::mode_args(q0, mu, tau, false);
        const auto qb = detail::mode_args(q0, mu, tau, true);
        rhs20 = scaled(f(q, q), 2.0);
        rhs11 = scaled(f(q, qb), 2.0);
    } else {
        rhs20 = detail::printed_h20_rows(k, q0, mu, tau);
        rhs11 = detail::printed_h11_rows(k, q0, mu, tau);
    }
    CenterManifoldCorrections out;
    const auto s1 = solve3(e1_matrix(k, mu, tau), rhs20, "E1 system (2 i mu I - J0 - e^{-2 i mu tau} J_tau)");
    out.nf_e1 = s1.x;
    out.e1_residual = s1.residual;
    out.e1_condition = s1.condition;

    const Vec3<double> rhs_real{-rhs11[0].real(), -rhs11[1].real(), -rhs11[2].real()};
    const auto s2 = solve3(e2_matrix(k), rhs_real, "E2 system (J0 + J_tau)");
    out.nf_e2 = s2.x;
    out.e2_residual = s2.residual;
    out.e2_condition = s2.condition;

    out.w20_at0 = w20_at(q0, g, out.nf_e1, mu, tau, 0.0);
    out.w20_atm1 = w20_at(q0, g, out.nf_e1, mu, tau, -1.0);
    out.w11_at0 = w11_at(q0, g, out.nf_e2, mu, tau, 0.0);
    out.w11_atm1 = w11_at(q0, g, out.nf_e2, mu, tau, -1.0);
    return out;
}

/// One bracketed group of g21 (without the common b_bar tau factor).
struct G21Group {
    std::string name;
    cplx printed{};
    cplx derived{};
};

/// g21 split by monomial of the quadratic form. `derived` applies the
/// quadratic form to (mode, W-correction) pairs; `printed` is the printed
/// group. Both use the same W20, W11.
[[nodiscard]] inline std::vector<G21Group> g21_groups(const LinearizationConstants& k,
                                                      const Vec3<cplx>& q0,
                                                      const Vec3<cplx>& qstar0,
                                                      const CenterManifoldCorrections& w,
                                                      double mu, double tau,
                                                      FormulaRoute printed_phi2 =
                                                          FormulaRoute::Printed) {
    const auto c = detail::weights(qstar0);
    const auto q = detail::mode_args(q0, mu, tau, false);
    const auto qb = detail::mode_args(q0, mu, tau, true);
    const Arg4 w20{w.w20_at0[0], w.w20_at0[1], w.w20_at0[2], w.w20_atm1[0]};
    const Arg4 w11{w.w11_at0[0], w.w11_at0[1], w.w11_at0[2], w.w11_atm1[0]};
    const auto form = quadratic_form(k, FormulaRoute::Derived);

    const cplx a = q0[1], b = q0[2], ab = std::conj(a), bb = std::conj(b);
    const cplx as = c[1], bs = c[2];
    const cplx em = std::exp(cplx(0.0, -mu * tau)), ep = std::conj(em);
    const double r = k.r, lam = k.lambda;
    const double phi2 = printed_phi2 == FormulaRoute::Printed ? k.phi_d2 : k.omega * k.phi_d2;
    // W^{(j)}_{20}(0) etc., 1-based component j as in the printed formula
    auto W20 = [&](int j) { return w.w20_at0[j - 1]; };
    auto W11 = [&](int j) { return w.w11_at0[j - 1]; };
    auto W20m = [&](int j) { return w.w20_atm1[j - 1]; };
    auto W11m = [&](int j) { return w.w11_atm1[j - 1]; };

    const std::array<cplx, 12> printed{
        phi2 * (ab * W20(2) + 2.0 * a * W11(2)),
        k.phi_d1 * (ab * W20(1) + W20(2) + 2.0 * a * W11(1) + 2.0 * W11(2)),
        k.a_hat0 * (2.0 * W11m(1) + W20m(1) + ep * W20(1) + 2.0 * em * W11(1)),
        as * k.k8 * (2.0 * W20(1) + 4.0 * W11(1)),
        as * r * r * k.k8 * (2.0 * bb * W20(3) + 4.0 * b * W11(3)),
        -as * k.g_d1 * (ab * W20(1) + W20(1) + 2.0 * a * W11(1) + 2.0 * W20(1)),
        as * lam * r * k.g_d2 * (W20(1) + W20(1) + W20(1) + W11(2)),
        -as * r * k.g_d1 * (bb * W20(2) + a * W20(3) + 2.0 * b * W11(3) + 2.0 * a * W11(3)),
        bs * k.k9 * (2.0 * W20(1) + 4.0 * W11(1)),
        bs * k.k10 * (2.0 * bb * W20(3) + 4.0 * b * W11(3)),
        bs * k.k11 * (bb * W20(1) + W20(3) + 2.0 * b * W11(1) + 2.0 * W11(3)),
        -bs * k.eta_xi * (bb * W20m(1) + ep * W20(3) + 2.0 * b * W11m(1) + 2.0 * em * W11(3)),
    };

    std::vector<G21Group> out;
    for (std::size_t t = 0; t < form.terms.size(); ++t) {
        const auto& term = form.terms[t];
        const cplx derived = c[term.row] * (4.0 * term.value(q, w11) + 2.0 * term.value(qb, w20));
        out.push_back({term.name, printed[t], derived});
    }
    return out;
}

[[nodiscard]] inline cplx g21_value(const std::vector<G21Group>& groups, cplx b_bar, double tau,
                                    FormulaRoute route) {
    cplx s{};
    for (const auto& g : groups) s += route == FormulaRoute::Derived ? g.derived : g.printed;
    return b_bar * tau * s;
}

/// Full reduction at (mu, tau) along one route.
[[nodiscard]] inline NormalFormIntermediates center_manifold(const LinearizationConstants& k,
                                                             double mu, double tau,
                                                             FormulaRoute route) {
    NormalFormIntermediates nf;
    nf.route = route;
    nf.mu = mu;
    nf.tau = tau;
    const auto ep = eigenvectors(k, mu, tau);
    nf.q0 = ep.q0;
    nf.qstar0 = ep.qstar0;
    nf.b_bar = normalize(ep.q0, ep.qstar0, k, mu, tau);

    const auto jac = jacobians_at(k);
    const cplx e = std::exp(cplx(0.0, -mu * tau));
    const Mat3<cplx> m = to_complex(jac.j0) + scaled(jac.j_tau, e);
    const cplx imu(0.0, mu);
    nf.eigen_residual = max_abs(m * ep.q0 - scaled(ep.q0, imu));
    const Vec3<cplx> left = conj(ep.qstar0);
    nf.adjoint_residual = max_abs(transpose(m) * left - scaled(left, imu));

    const auto g = g_coefficients(k, ep.q0, ep.qstar0, nf.b_bar, mu, tau, route);
    nf.g20 = g.g20;
    nf.g11 = g.g11;
    nf.g02 = g.g02;
    const auto w = nf_linear_systems(k, ep.q0, g, mu, tau, route);
    nf.nf_e1 = w.nf_e1;
    nf.nf_e2 = w.nf_e2;
    nf.e1_residual = w.e1_residual;
    nf.e2_residual = w.e2_residual;
    nf.e1_condition = w.e1_condition;
    nf.e2_condition = w.e2_condition;
    nf.w20_at0 = w.w20_at0;
    nf.w20_atm1 = w.w20_atm1;
    nf.w11_at0 = w.w11_at0;
    nf.w11_atm1 = w.w11_atm1;
    nf.g21 = g21_value(g21_groups(k, ep.q0, ep.qstar0, w, mu, tau), nf.b_bar, tau, route);
    const auto q = detail::mode_args(ep.q0, mu, tau, false);
    const auto qb = detail::mode_args(ep.q0, mu, tau, true);
    nf.g21_cubic = nf.b_bar * tau * dot(detail::weights(ep.qstar0), cubic_form(k, q, q, qb));
    return nf;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

enum class HopfDirection { Supercritical, Subcritical };
enum class OrbitStability { Stable, Unstable };
enum class PeriodTrend { Increasing, Decreasing };

[[nodiscard]] inline const char* to_string(HopfDirection d) {
    return d == HopfDirection::Supercritical ? "supercritical" : "subcritical";
}
[[nodiscard]] inline const char* to_string(OrbitStability s) {
    return s == OrbitStability::Stable ? "stable" : "unstable";
}
[[nodiscard]] inline const char* to_string(PeriodTrend t) {
    return t == PeriodTrend::Increasing ? "increasing" : "decreasing";
}

struct NormalFormResult {
    cplx c1{};
    double mu_bar2 = 0.0;
    double beta2 = 0.0;
    double t2 = 0.0;
    HopfDirection direction = HopfDirection::Supercritical;
    OrbitStability orbit_stability = OrbitStability::Stable;
    PeriodTrend period_trend = PeriodTrend::Increasing;
};

/// c1(0), mu2, beta2, T2 and their signs. `dx_dtau` is the derivative of the
/// critical root with respect to the delay at tau_k. With `include_cubic` the
/// cubic Taylor terms are added to g21.
[[nodiscard]] inline NormalFormResult hopf_classification(const NormalFormIntermediates& nf,
                                                          cplx dx_dtau,
                                                          bool include_cubic = false) {
    if (std::abs(dx_dtau.real()) < 1e-12) {
        throw degenerate_error("hopf_classification: Re x'(tau_k) vanishes");
    }
    const cplx i(0.0, 1.0);
    const double w = nf.mu * nf.tau;
    NormalFormResult res;
    res.c1 = i / (2.0 * w) *
                 (nf.g20 * nf.g11 - 2.0 * std::norm(nf.g11) - std::norm(nf.g02) / 3.0) +
             nf.g21 / 2.0;
    if (include_cubic) res.c1 += nf.g21_cubic / 2.0;
    res.mu_bar2 = -res.c1.real() / dx_dtau.real();
    res.beta2 = 2.0 * res.c1.real();
    res.t2 = -(res.c1.imag() + res.mu_bar2 * dx_dtau.imag()) / nf.mu;
    res.direction = res.mu_bar2 > 0.0 ? HopfDirection::Supercritical : HopfDirection::Subcritical;
    res.orbit_stability = res.beta2 < 0.0 ? OrbitStability::Stable : OrbitStability::Unstable;
    res.period_trend = res.t2 > 0.0 ? PeriodTrend::Increasing : PeriodTrend::Decreasing;
    return res;
}

// ---------------------------------------------------------------------------
// Printed-versus-derived comparison
// ---------------------------------------------------------------------------

struct Discrepancy {
    std::string quantity;
    cplx printed{};
    cplx derived{};

    [[nodiscard]] double abs_diff() const { return std::abs(printed - derived); }
    [[nodiscard]] double rel_diff() const {
        const double s = std::max(std::abs(printed), std::abs(derived));
        return s > 0.0 ? abs_diff() / s : 0.0;
    }
    [[nodiscard]] bool agrees(double tol = 1e-9) const { return rel_diff() <= tol; }
};

struct HopfAnalysis {
    double mu0 = 0.0;
    double tau0 = 0.0;
    cplx dx_dtau{};
    NormalFormIntermediates derived;
    NormalFormIntermediates printed;
    NormalFormResult result;           ///< from the derived route
    NormalFormResult printed_result;   ///< from the printed route
    NormalFormResult with_cubic;       ///< derived route plus the cubic Taylor terms
    std::vector<Discrepancy> log;
};

/// Every coefficient of both routes side by side. g21 groups are evaluated
/// with the derived W20, W11 so that only the printed formula differs.
[[nodiscard]] inline std::vector<Discrepancy> discrepancy_log(const LinearizationConstants& k,
                                                              const NormalFormIntermediates& d,
                                                              const NormalFormIntermediates& p) {
    std::vector<Discrepancy> log;
    log.push_back({"Phi'' u2^2 coefficient", 0.5 * k.phi_d2, 0.5 * k.omega * k.phi_d2});
    log.push_back({"g20", p.g20, d.g20});
    log.push_back({"g11", p.g11, d.g11});
    log.push_back({"g02", p.g02, d.g02});

    const auto f = quadratic_form(k, FormulaRoute::Derived);
    const auto q = detail::mode_args(d.q0, d.mu, d.tau, false);
    const auto qb = detail::mode_args(d.q0, d.mu, d.tau, true);
    const auto h20d = scaled(f(q, q), 2.0);
    const auto h11d = scaled(f(q, qb), 2.0);
    const auto h20p = detail::printed_h20_rows(k, d.q0, d.mu, d.tau);
    const auto h11p = detail::printed_h11_rows(k, d.q0, d.mu, d.tau);
    for (int row = 0; row < 3; ++row) {
        log.push_back({"E1 rhs row " + std::to_string(row + 1), h20p[row], h20d[row]});
    }
    for (int row = 0; row < 3; ++row) {
        log.push_back({"E2 rhs row " + std::to_string(row + 1), h11p[row], h11d[row]});
    }

    CenterManifoldCorrections w;
    w.w20_at0 = d.w20_at0;
    w.w20_atm1 = d.w20_atm1;
    w.w11_at0 = d.w11_at0;
    w.w11_atm1 = d.w11_atm1;
    const cplx pre = d.b_bar * d.tau;
    for (const auto& g : g21_groups(k, d.q0, d.qstar0, w, d.mu, d.tau, FormulaRoute::Derived)) {
        log.push_back({"g21 group [" + g.name + "]", pre * g.printed, pre * g.derived});
    }
    log.push_back({"g21", p.g21, d.g21});
    return log;
}

/// Complete reduction at the first critical delay of an equilibrium.
[[nodiscard]] inline HopfAnalysis analyze_hopf(const LinearizationConstants& k, double mu0,
                                               double tau0) {
    HopfAnalysis h;
    h.mu0 = mu0;
    h.tau0 = tau0;
    h.dx_dtau = root_tau_derivative(k, mu0, tau0);
    h.derived = center_manifold(k, mu0, tau0, FormulaRoute::Derived);
    h.printed = center_manifold(k, mu0, tau0, FormulaRoute::Printed);
    h.result = hopf_classification(h.derived, h.dx_dtau);
    h.printed_result = hopf_classification(h.printed, h.dx_dtau);
    h.with_cubic = hopf_classification(h.derived, h.dx_dtau, true);
    h.log = discrepancy_log(k, h.derived, h.printed);
    return h;
}

}  // namespace keen
