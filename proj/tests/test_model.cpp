#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "keen_delay/model.hpp"
#include "keen_delay/params.hpp"

using namespace keen;

namespace {

const Model& paper() {
    static const Model m(ModelParams::paper());
    return m;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <typename F>
double centered(F f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

TEST(Params, BaselineConstantsAreValid) {
    EXPECT_TRUE(ModelParams::paper().violations().empty());
}

TEST(Params, RejectsEachInvariant) {
    auto expect_bad = [](auto mutate) {
        ModelParams p = ModelParams::paper();
        mutate(p);
        EXPECT_FALSE(p.violations().empty());
        EXPECT_THROW(Model{p}, config_error);
    };
    expect_bad([](ModelParams& p) { p.nu = 0.0; });
    expect_bad([](ModelParams& p) { p.eta_p = -1.0; });
    expect_bad([](ModelParams& p) { p.xi = 0.9; });
    expect_bad([](ModelParams& p) { p.gamma = 1.2; });
    expect_bad([](ModelParams& p) { p.gamma = -0.1; });
    expect_bad([](ModelParams& p) { p.phi1 = 0.0; });
    expect_bad([](ModelParams& p) { p.kappa2 = 0.0; });
    expect_bad([](ModelParams& p) { p.kappa0 = 1.0; });
    expect_bad([](ModelParams& p) { p.phi0 = -0.1; });  // Phi(0) >= alpha
    expect_bad([](ModelParams& p) { p.alpha = std::nan(""); });
}

TEST(Phillips, ValueAtZero) {
    EXPECT_NEAR(paper().phillips(0.0), -0.04333333, 1e-12);
}

TEST(Phillips, IncreasingOnUnitInterval) {
    for (double l : {0.1, 0.5, 0.9}) EXPECT_GT(paper().phillips_d1(l), 0.0);
}

TEST(Phillips, PoleAtFullEmployment) {
    EXPECT_GT(paper().phillips(0.999), 1e4 * paper().phillips(0.9));
}

TEST(Phillips, DomainErrors) {
    EXPECT_THROW((void)paper().phillips(1.0), domain_error);
    EXPECT_THROW((void)paper().phillips(-0.1), domain_error);
    EXPECT_THROW((void)paper().phillips_d1(1.5), domain_error);
    EXPECT_THROW((void)paper().phillips_d2(1.0), domain_error);
    EXPECT_THROW((void)paper().phillips_inv(paper().phillips(0.0)), domain_error);
}

TEST(Phillips, InverseRoundTrip) {
    const auto& m = paper();
    EXPECT_NEAR(m.phillips_inv(m.phillips(0.5)), 0.5, 1e-12);
    EXPECT_NEAR(m.phillips_inv(m.phillips(0.968365)), 0.968365, 1e-12);
}

TEST(Phillips, InverseAtEquilibriumWageGrowth) {
    const auto& p = paper().params();
    const double y = p.alpha + (1.0 - p.gamma) * 0.0049168;
    EXPECT_NEAR(paper().phillips_inv(y), 0.968365, 1e-5);
}

TEST(Derivatives, MatchFiniteDifferences) {
    const auto& m = paper();
    std::mt19937_64 rng(20241017);
    std::uniform_real_distribution<double> lam(0.05, 0.95);
    std::uniform_real_distribution<double> pi(-0.2, 0.5);
    for (int i = 0; i < 20; ++i) {
        const double l = lam(rng);
        const double h = 1e-5 * (1.0 - l);
        EXPECT_LT(rel(centered([&](double x) { return m.phillips(x); }, l, h), m.phillips_d1(l)), 1e-6);
        EXPECT_LT(rel(centered([&](double x) { return m.phillips_d1(x); }, l, h), m.phillips_d2(l)), 1e-6);
        const double s = pi(rng);
        EXPECT_LT(rel(centered([&](double x) { return m.kappa(x); }, s, 1e-5), m.kappa_d1(s)), 1e-6);
        EXPECT_LT(rel(centered([&](double x) { return m.kappa_d1(x); }, s, 1e-5), m.kappa_d2(s)), 1e-6);
        EXPECT_LT(rel(centered([&](double x) { return m.growth(x); }, s, 1e-5), m.growth_d1(s)), 1e-6);
        EXPECT_LT(rel(centered([&](double x) { return m.growth_d1(x); }, s, 1e-5), m.growth_d2(s)), 1e-6);
    }
}

TEST(Kappa, SecondDerivativeIdentity) {
    const auto& m = paper();
    for (double s : {0.0, 0.16, 0.5}) {
        EXPECT_NEAR(m.kappa_d2(s), m.params().kappa2 * m.kappa_d1(s), 1e-15 * m.kappa_d2(s));
        EXPECT_GT(m.kappa_d1(s), 0.0);
    }
}

TEST(Kappa, InverseRoundTripAndDomain) {
    const auto& m = paper();
    EXPECT_NEAR(m.kappa(m.kappa_inv(0.1)), 0.1, 1e-13);
    EXPECT_THROW((void)m.kappa_inv(m.params().kappa0), domain_error);
    EXPECT_THROW((void)m.kappa_inv(-1.0), domain_error);
}

TEST(Kappa, InverseAtBalancedGrowth) {
    const auto& p = paper().params();
    // 1 - omega* - r b* with the reference E4,1 coordinates
    EXPECT_NEAR(paper().kappa_inv(p.nu * (p.alpha + p.beta + p.delta)),
                1.0 - 0.836260 - p.r * 0.063277, 2e-6);
    EXPECT_NEAR(paper().kappa_inv(p.nu * (p.alpha + p.beta + p.delta)), 0.161841399, 1e-9);
}

TEST(Growth, InverseAndComposition) {
    const auto& m = paper();
    const auto& p = m.params();
    const double ab = p.alpha + p.beta;
    EXPECT_NEAR(m.growth(m.growth_inv(ab)), ab, 1e-14);
    EXPECT_NEAR(m.growth_inv(ab), 0.161842, 1e-6);
    for (double s : {-0.1, 0.161842, 0.4}) {
        EXPECT_EQ(m.growth(s) - (m.kappa(s) / p.nu - p.delta), 0.0);
    }
    EXPECT_DOUBLE_EQ(m.growth_d1(0.161842), m.kappa_d1(0.161842) / p.nu);
    EXPECT_THROW((void)m.growth_inv(-1.0), domain_error);
}

TEST(Inflation, ReferenceRates) {
    const auto& m = paper();
    EXPECT_NEAR(m.inflation(0.836260), 0.0049, 1e-4);
    EXPECT_NEAR(m.inflation(0.808446), -0.0418, 1e-4);
    EXPECT_NEAR(m.inflation(1.0 / m.params().xi), 0.0, 1e-15);
    EXPECT_NEAR(m.inflation(0.7) - m.inflation(0.6), 0.1 * 1.4 * 1.2, 1e-14);
}

TEST(ProfitShare, Definition) {
    EXPECT_NEAR(paper().profit_share(0.8, 0.1), 1.0 - 0.8 - 0.03 * 0.1, 1e-15);
    EXPECT_NEAR(profit_share(ModelParams::paper(), 0.8, 0.1), 0.197, 1e-15);
}
