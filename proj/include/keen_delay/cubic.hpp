#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace keen {

/// Roots of the monic real cubic x^3 + a x^2 + b x + c.
///
/// Trigonometric form when all three roots are real, Cardano otherwise,
/// then one Newton step per root (kept only if it lowers |p|). Real roots
/// come back with zero imaginary part; a complex pair is ordered (+Im, -Im).
[[nodiscard]] inline std::array<std::complex<double>, 3> solve_monic_cubic(double a, double b,
                                                                           double c) {
    using std::complex;
    const double shift = a / 3.0;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double disc = q * q / 4.0 + p * p * p / 27.0;

    std::array<complex<double>, 3> t{};
    if (p == 0.0 && q == 0.0) {
        t = {0.0, 0.0, 0.0};
    } else if (disc <= 0.0) {
        // three real roots
        const double m = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * m);
        arg = std::clamp(arg, -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) t[k] = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
    } else {
        const double s = std::sqrt(disc);
        const double u = std::cbrt(-q / 2.0 + s);
        const double v = std::cbrt(-q / 2.0 - s);
        const double re = -(u + v) / 2.0;
        const double im = std::sqrt(3.0) / 2.0 * (u - v);
        t = {complex<double>(u + v, 0.0), complex<double>(re, std::abs(im)),
             complex<double>(re, -std::abs(im))};
    }

    auto poly = [&](complex<double> x) { return ((x + a) * x + b) * x + c; };
    auto dpoly = [&](complex<double> x) { return (3.0 * x + 2.0 * a) * x + b; };
    std::array<complex<double>, 3> roots{};
    for (int k = 0; k < 3; ++k) {
        complex<double> x = t[k] - shift;
        const auto d = dpoly(x);
        if (std::abs(d) > 0.0) {
            const complex<double> xn = x - poly(x) / d;
            if (std::abs(poly(xn)) < std::abs(poly(x))) x = xn;
        }
        if (disc <= 0.0) x = {x.real(), 0.0};
        roots[k] = x;
    }
    return roots;
}

}  // namespace keen
