#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "keen_delay/errors.hpp"

namespace keen {

/// Scalar constants of the delayed Keen model with inflation.
///
/// Rates (alpha, beta, delta, r, eta_p) are per unit time; shares and
/// ratios are dimensionless. Functional forms are fixed:
///   Phi(lambda)  = phi1 / (1 - lambda)^2 - phi0
///   kappa(pi)    = kappa0 + exp(kappa1 + kappa2 * pi)
///   Z(omega)     = eta_p * (xi * omega - 1)
struct ModelParams {
    double alpha = 0.0;   ///< productivity growth
    double beta = 0.0;    ///< workforce growth
    double delta = 0.0;   ///< depreciation
    double nu = 1.0;      ///< capital-to-output ratio
    double r = 0.0;       ///< interest rate
    double gamma = 0.0;   ///< inflation pass-through into wages
    double eta_p = 1.0;   ///< price adjustment speed
    double xi = 1.0;      ///< markup factor
    double phi0 = 0.0;
    double phi1 = 1.0;
    double kappa0 = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 1.0;

    /// Constants of the worked numerical example.
    static ModelParams paper() {
        ModelParams p;
        p.alpha = 0.025;
        p.beta = 0.02;
        p.delta = 0.01;
        p.nu = 3.0;
        p.r = 0.03;
        p.gamma = 0.8;
        p.eta_p = 1.4;
        p.xi = 1.2;
        p.phi0 = 0.04340277;
        p.phi1 = 0.00006944;
        p.kappa0 = -0.0065;
        p.kappa1 = -5.0;
        p.kappa2 = 20.0;
        return p;
    }

    /// Every violated constraint, as human-readable messages. Empty when valid.
    [[nodiscard]] std::vector<std::string> violations() const {
        std::vector<std::string> out;
        auto finite = [&](double v, const char* name) {
            if (!std::isfinite(v)) out.push_back(std::string(name) + " is not finite");
        };
        finite(alpha, "alpha");
        finite(beta, "beta");
        finite(delta, "delta");
        finite(nu, "nu");
        finite(r, "r");
        finite(gamma, "gamma");
        finite(eta_p, "eta_p");
        finite(xi, "xi");
        finite(phi0, "phi0");
        finite(phi1, "phi1");
        finite(kappa0, "kappa0");
        finite(kappa1, "kappa1");
        finite(kappa2, "kappa2");
        if (!out.empty()) return out;

        if (!(nu > 0.0)) out.emplace_back("nu must be > 0");
        if (!(eta_p > 0.0)) out.emplace_back("eta_p must be > 0");
        if (!(xi >= 1.0)) out.emplace_back("xi must be >= 1");
        if (!(gamma >= 0.0 && gamma <= 1.0)) out.emplace_back("gamma must lie in [0, 1]");
        if (!(phi1 > 0.0)) out.emplace_back("phi1 must be > 0");
        if (!(kappa2 > 0.0)) out.emplace_back("kappa2 must be > 0");
        if (!(kappa0 < nu * (alpha + beta + delta))) {
            out.emplace_back("kappa0 must be < nu*(alpha+beta+delta)");
        }
        if (!(phi1 - phi0 < alpha)) out.emplace_back("Phi(0) = phi1 - phi0 must be < alpha");
        return out;
    }

    void validate() const {
        auto v = violations();
        if (v.empty()) return;
        std::ostringstream os;
        os << "invalid model parameters:";
        for (const auto& m : v) os << ' ' << m << ';';
        throw config_error(os.str());
    }
};

/// Point in (wage share, employment rate, debt ratio) space.
/// Also used for time derivatives of the same components.
struct State {
    double omega = 0.0;
    double lambda = 0.0;
    double b = 0.0;

    friend State operator+(State a, const State& c) {
        return {a.omega + c.omega, a.lambda + c.lambda, a.b + c.b};
    }
    friend State operator-(State a, const State& c) {
        return {a.omega - c.omega, a.lambda - c.lambda, a.b - c.b};
    }
    friend State operator*(double s, State a) { return {s * a.omega, s * a.lambda, s * a.b}; }
    friend State operator*(State a, double s) { return s * a; }

    [[nodiscard]] double norm() const {
        return std::sqrt(omega * omega + lambda * lambda + b * b);
    }
    [[nodiscard]] bool finite() const {
        return std::isfinite(omega) && std::isfinite(lambda) && std::isfinite(b);
    }
};

/// Profit share 1 - omega - r b. Never stored on State.
[[nodiscard]] inline double profit_share(const ModelParams& p, double omega, double b) {
    return 1.0 - omega - p.r * b;
}

}  // namespace keen
