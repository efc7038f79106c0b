#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "keen_delay/cubic.hpp"
#include "keen_delay/equilibria.hpp"
#include "keen_delay/linearize.hpp"

using namespace keen;

namespace {

Model paper() { return Model(ModelParams::paper()); }

Equilibrium e41() { return find_e4(paper())[1]; }
Equilibrium e42() { return find_e4(paper())[0]; }

// Vector field written out independently of the library; wd is omega(t - tau).
std::array<double, 3> field(const ModelParams& p, double w, double l, double b, double wd) {
    const double pi = 1.0 - w - p.r * b;
    const double phi = p.phi1 / ((1.0 - l) * (1.0 - l)) - p.phi0;
    const double kap = p.kappa0 + std::exp(p.kappa1 + p.kappa2 * pi);
    const double g = kap / p.nu - p.delta;
    const double z = p.eta_p * (p.xi * wd - 1.0);
    return {w * (phi - p.alpha - (1.0 - p.gamma) * z), l * (g - p.alpha - p.beta),
            kap - pi - b * (z + g)};
}

// Durand-Kerner iteration for a monic cubic.
std::array<cplx, 3> durand_kerner(double a, double b, double c) {
    auto p = [&](cplx x) { return ((x + a) * x + b) * x + c; };
    std::array<cplx, 3> z{cplx(0.4, 0.9), cplx(0.4, 0.9) * cplx(0.4, 0.9),
                          cplx(0.4, 0.9) * cplx(0.4, 0.9) * cplx(0.4, 0.9)};
    const double scale = 1.0 + std::abs(a) + std::abs(b) + std::abs(c);
    for (auto& v : z) v *= scale;
    for (int it = 0; it < 2000; ++it) {
        for (int i = 0; i < 3; ++i) {
            cplx den = 1.0;
            for (int j = 0; j < 3; ++j)
                if (j != i) den *= z[i] - z[j];
            z[i] -= p(z[i]) / den;
        }
    }
    return z;
}

double max_re(const std::array<cplx, 3>& r) {
    return std::max({r[0].real(), r[1].real(), r[2].real()});
}

}  // namespace

TEST(KConstants, FrozenAtE41) {
    const auto k = k_constants(paper(), e41());
    const std::array<double, 12> got{k.k0, k.k1, k.k2, k.k3, k.k4,  k.k5,
                                     k.k6, k.k7, k.k8, k.k9, k.k10, k.k11};
    const std::array<double, 12> want{-0.28098346, 3.66839900,  1.10716395, -2.35765368,
                                      -0.12064692, 0.04672816,  -0.10630480, 0.04991731,
                                      11.07163953, 33.57653679, 0.06451888,  3.15792554};
    for (std::size_t i = 0; i < 12; ++i) EXPECT_NEAR(got[i], want[i], 2e-7) << "K" << i;
}

TEST(KConstants, Identities) {
    for (const auto& e : find_e4(paper())) {
        const auto k = k_constants(paper(), e);
        EXPECT_NEAR(k.k4, k.r * k.k3 - k.k7, 1e-12);
        EXPECT_NEAR(k.k5, k.k7 + k.r * k.k6, 1e-12);
        EXPECT_NEAR(k.k0, k.a_hat0 * k.omega, 1e-12);
        EXPECT_NEAR(k.a_hat1, -0.04340277 - 0.025 + 1.4 - 0.8 * 1.4, 1e-15);
    }
}

TEST(KConstants, K1MatchesFiniteDifference) {
    const Model m = paper();
    const auto e = e41();
    const auto k = k_constants(m, e);
    const double h = 1e-7;
    const double fd = (e.omega_star * m.phillips(e.lambda_star + h) -
                       e.omega_star * m.phillips(e.lambda_star - h)) /
                      (2.0 * h);
    EXPECT_NEAR(fd / k.k1, 1.0, 1e-6);
}

TEST(KConstants, RequiresInteriorEquilibrium) {
    Equilibrium e = e41();
    e.kind = EquilibriumKind::E1;
    EXPECT_THROW((void)k_constants(paper(), e), domain_error);
    e = e41();
    e.lambda_star = 1.0;
    EXPECT_THROW((void)k_constants(paper(), e), domain_error);
}

TEST(Jacobians, Structure) {
    const auto k = k_constants(paper(), e41());
    const auto j = jacobians_at(k);
    EXPECT_DOUBLE_EQ(j.j0[1][2], k.r * j.j0[1][0]);
    EXPECT_EQ(j.j_tau[2][0], k.k6);
    EXPECT_EQ(j.j_tau[2][1], 0.0);
    EXPECT_EQ(j.j_tau[2][2], 0.0);
    EXPECT_EQ(j.j0[0][0], 0.0);
    EXPECT_EQ(j.j0[1][1], 0.0);
}

TEST(Jacobians, MatchFiniteDifferences) {
    const auto p = ModelParams::paper();
    for (const auto& e : find_e4(paper())) {
        const auto j = jacobians_at(paper(), e);
        const std::array<double, 3> x{e.omega_star, e.lambda_star, e.b_star};
        for (int c = 0; c < 4; ++c) {
            const double h = 1e-6;
            auto at = [&](double s) {
                std::array<double, 4> v{x[0], x[1], x[2], x[0]};
                v[c] += s;
                return field(p, v[0], v[1], v[2], v[3]);
            };
            const auto fp = at(h), fm = at(-h);
            for (int r = 0; r < 3; ++r) {
                const double fd = (fp[r] - fm[r]) / (2.0 * h);
                const double lib = c < 3 ? j.j0[r][c] : j.j_tau[r][0];
                EXPECT_NEAR(fd, lib, 1e-6 * std::max(1.0, std::abs(lib))) << r << "," << c;
            }
        }
        // the tau = 0 Jacobian is the sum
        const auto sum = j.j0 + j.j_tau;
        EXPECT_EQ(sum[0][0], j.j_tau[0][0]);
    }
}

TEST(CharCubic, ConstantTerm) {
    const auto k = k_constants(paper(), e41());
    EXPECT_DOUBLE_EQ(char_cubic(k)(0.0), -k.k1 * k.k2 * k.k5);
}

TEST(CharCubic, EqualsDeterminant) {
    const auto k = k_constants(paper(), e41());
    const auto j = jacobians_at(k);
    const auto a = to_complex(j.j0 + j.j_tau);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 20; ++i) {
        const cplx x(u(rng), u(rng));
        const cplx d = det3(a - scaled(identity3<cplx>(), x));
        const cplx p = char_cubic(k)(x);
        EXPECT_LT(std::abs(d - p), 1e-9 * std::max(1.0, std::abs(d)));
    }
}

TEST(CubicSolver, AgreesWithDurandKerner) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int t = 0; t < 200; ++t) {
        const double a = u(rng), b = u(rng), c = u(rng);
        const auto mine = solve_monic_cubic(a, b, c);
        const auto ref = durand_kerner(a, b, c);
        for (const auto& r : ref) {
            double best = 1e300;
            for (const auto& s : mine) best = std::min(best, std::abs(r - s));
            EXPECT_LT(best, 1e-8) << a << " " << b << " " << c;
        }
    }
}

TEST(CubicSolver, RepeatedAndZeroRoots) {
    const auto z = solve_monic_cubic(0.0, 0.0, 0.0);
    for (const auto& r : z) EXPECT_EQ(r, cplx(0.0));
    const auto d = solve_monic_cubic(-4.0, 5.0, -2.0);  // (x-1)^2 (x-2)
    std::vector<double> re{d[0].real(), d[1].real(), d[2].real()};
    std::sort(re.begin(), re.end());
    EXPECT_NEAR(re[0], 1.0, 1e-6);
    EXPECT_NEAR(re[1], 1.0, 1e-6);
    EXPECT_NEAR(re[2], 2.0, 1e-12);
}

TEST(RouthHurwitz, ReferenceVerdicts) {
    const auto k1 = k_constants(paper(), e41());
    const auto k2 = k_constants(paper(), e42());
    const auto rh1 = routh_hurwitz(k1);
    const auto rh2 = routh_hurwitz(k2);
    EXPECT_TRUE(rh1.satisfied);
    EXPECT_FALSE(rh1.marginal);
    EXPECT_GT(rh1.derived, 0.0);
    EXPECT_FALSE(rh2.satisfied);
    EXPECT_LT(rh2.trace, 0.0);
    EXPECT_LT(rh2.constant, 0.0);
    EXPECT_LT(max_re(char_cubic(k1).roots()), 0.0);
    EXPECT_GT(max_re(char_cubic(k2).roots()), 0.0);
}

TEST(RouthHurwitz, EquivalentToRootSignsOnRandomParameters) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> f(0.7, 1.3);
    int checked = 0, stable = 0;
    for (int t = 0; t < 2000 && checked < 50; ++t) {
        ModelParams p = ModelParams::paper();
        p.r *= f(rng);
        p.gamma = std::min(1.0, p.gamma * f(rng));
        p.eta_p *= f(rng);
        p.xi = std::max(1.0, p.xi * f(rng));
        p.kappa2 *= f(rng);
        p.nu *= f(rng);
        if (!p.violations().empty()) continue;
        const Model m(p);
        std::vector<Equilibrium> e4;
        try {
            e4 = find_e4(m);
        } catch (const std::exception&) {
            continue;
        }
        for (const auto& e : e4) {
            if (!e.admissible || checked >= 50) continue;
            const auto k = k_constants(m, e);
            const auto c = char_cubic(k);
            const auto roots = durand_kerner(c.c2 / c.c3, c.c1 / c.c3, c.c0 / c.c3);
            const bool all_left = max_re(roots) < 0.0;
            EXPECT_EQ(routh_hurwitz(k).satisfied, all_left);
            stable += all_left ? 1 : 0;
            ++checked;
        }
    }
    EXPECT_EQ(checked, 50);
    EXPECT_GT(stable, 0);
    EXPECT_LT(stable, 50);
}
