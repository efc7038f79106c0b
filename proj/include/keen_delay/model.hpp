#pragma once

#include <cmath>
#include <string>

#include "keen_delay/errors.hpp"
#include "keen_delay/params.hpp"

namespace keen {

/// Closed-form model functions (Phillips curve, investment, growth,
/// inflation) bound to a validated parameter set.
class Model {
public:
    explicit Model(const ModelParams& p) : p_(p) { p_.validate(); }

    /// Skips validation. For exploring parameter sets outside the admissible
    /// region; every function still checks its own domain.
    static Model unchecked(const ModelParams& p) { return Model(p, Unchecked{}); }

    [[nodiscard]] const ModelParams& params() const noexcept { return p_; }

    // --- Phillips curve -------------------------------------------------

    [[nodiscard]] double phillips(double lambda) const {
        check_lambda(lambda, "phillips");
        const double d = 1.0 - lambda;
        return p_.phi1 / (d * d) - p_.phi0;
    }
    [[nodiscard]] double phillips_d1(double lambda) const {
        check_lambda(lambda, "phillips_d1");
        const double d = 1.0 - lambda;
        return 2.0 * p_.phi1 / (d * d * d);
    }
    [[nodiscard]] double phillips_d2(double lambda) const {
        check_lambda(lambda, "phillips_d2");
        const double d = 1.0 - lambda;
        return 6.0 * p_.phi1 / (d * d * d * d);
    }
    /// Inverse on (Phi(0), inf), landing in (0, 1).
    [[nodiscard]] double phillips_inv(double y) const {
        const double phi_at_zero = p_.phi1 - p_.phi0;
        if (!(y > phi_at_zero)) {
            throw domain_error("phillips_inv: argument " + std::to_string(y) +
                               " must exceed Phi(0) = " + std::to_string(phi_at_zero));
        }
        return 1.0 - std::sqrt(p_.phi1 / (y + p_.phi0));
    }

    // --- Investment function -------------------------------------------

    [[nodiscard]] double kappa(double pi) const {
        return p_.kappa0 + std::exp(p_.kappa1 + p_.kappa2 * pi);
    }
    [[nodiscard]] double kappa_d1(double pi) const {
        return p_.kappa2 * std::exp(p_.kappa1 + p_.kappa2 * pi);
    }
    [[nodiscard]] double kappa_d2(double pi) const {
        return p_.kappa2 * p_.kappa2 * std::exp(p_.kappa1 + p_.kappa2 * pi);
    }
    [[nodiscard]] double kappa_inv(double y) const {
        if (!(y > p_.kappa0)) {
            throw domain_error("kappa_inv: argument " + std::to_string(y) +
                               " must exceed kappa0 = " + std::to_string(p_.kappa0));
        }
        return (std::log(y - p_.kappa0) - p_.kappa1) / p_.kappa2;
    }

    // --- Growth rate g(pi) = kappa(pi)/nu - delta -----------------------

    [[nodiscard]] double growth(double pi) const { return kappa(pi) / p_.nu - p_.delta; }
    [[nodiscard]] double growth_d1(double pi) const { return kappa_d1(pi) / p_.nu; }
    [[nodiscard]] double growth_d2(double pi) const { return kappa_d2(pi) / p_.nu; }
    [[nodiscard]] double growth_inv(double y) const { return kappa_inv(p_.nu * (y + p_.delta)); }

    // --- Inflation Z(omega) = eta_p (xi omega - 1) ----------------------

    [[nodiscard]] double inflation(double omega) const {
        return p_.eta_p * (p_.xi * omega - 1.0);
    }

    [[nodiscard]] double profit_share(double omega, double b) const {
        return keen::profit_share(p_, omega, b);
    }

private:
    struct Unchecked {};
    Model(const ModelParams& p, Unchecked) : p_(p) {}

    static void check_lambda(double lambda, const char* who) {
        if (!(lambda >= 0.0 && lambda < 1.0)) {
            throw domain_error(std::string(who) + ": lambda = " + std::to_string(lambda) +
                               " outside [0, 1)");
        }
    }

    ModelParams p_;
};

}  // namespace keen
