#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "keen_delay/errors.hpp"

namespace keen {

using cplx = std::complex<double>;

template <typename T>
using Vec3 = std::array<T, 3>;

template <typename T>
using Mat3 = std::array<std::array<T, 3>, 3>;

template <typename T>
[[nodiscard]] constexpr Mat3<T> identity3() {
    Mat3<T> m{};
    for (std::size_t i = 0; i < 3; ++i) m[i][i] = T{1};
    return m;
}

template <typename T, typename S>
[[nodiscard]] Mat3<T> scaled(const Mat3<S>& a, T s) {
    Mat3<T> out{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) out[i][j] = s * a[i][j];
    return out;
}

template <typename T>
[[nodiscard]] Mat3<T> operator+(const Mat3<T>& a, const Mat3<T>& b) {
    Mat3<T> out{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) out[i][j] = a[i][j] + b[i][j];
    return out;
}

template <typename T>
[[nodiscard]] Mat3<T> operator-(const Mat3<T>& a, const Mat3<T>& b) {
    Mat3<T> out{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) out[i][j] = a[i][j] - b[i][j];
    return out;
}

template <typename T>
[[nodiscard]] Mat3<T> transpose(const Mat3<T>& a) {
    Mat3<T> out{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) out[i][j] = a[j][i];
    return out;
}

[[nodiscard]] inline Mat3<cplx> to_complex(const Mat3<double>& a) {
    Mat3<cplx> out{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) out[i][j] = a[i][j];
    return out;
}

template <typename T>
[[nodiscard]] Vec3<T> operator*(const Mat3<T>& a, const Vec3<T>& x) {
    Vec3<T> y{};
    for (std::size_t i = 0; i < 3; ++i) y[i] = a[i][0] * x[0] + a[i][1] * x[1] + a[i][2] * x[2];
    return y;
}

template <typename T>
[[nodiscard]] Vec3<T> operator-(const Vec3<T>& a, const Vec3<T>& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

template <typename T>
[[nodiscard]] Vec3<T> operator+(const Vec3<T>& a, const Vec3<T>& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

template <typename T, typename S>
[[nodiscard]] Vec3<T> scaled(const Vec3<T>& a, S s) {
    return {s * a[0], s * a[1], s * a[2]};
}

template <typename T>
[[nodiscard]] Vec3<T> conj(const Vec3<T>& a) {
    return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])};
}

/// Unconjugated dot product.
template <typename T>
[[nodiscard]] T dot(const Vec3<T>& a, const Vec3<T>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <typename T>
[[nodiscard]] double max_abs(const Vec3<T>& a) {
    return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

template <typename T>
[[nodiscard]] double inf_norm(const Mat3<T>& a) {
    double best = 0.0;
    for (const auto& row : a)
        best = std::max(best, std::abs(row[0]) + std::abs(row[1]) + std::abs(row[2]));
    return best;
}

template <typename T>
[[nodiscard]] T det3(const Mat3<T>& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

template <typename T>
struct Solve3Result {
    Vec3<T> x{};
    double residual = 0.0;   ///< max |A x - b|
    double condition = 0.0;  ///< infinity-norm condition number estimate
};

namespace detail {

template <typename T>
Vec3<T> lu_solve(Mat3<T> a, Vec3<T> b, double pivot_floor) {
    std::array<std::size_t, 3> perm{0, 1, 2};
    for (std::size_t k = 0; k < 3; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < 3; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (std::abs(a[piv][k]) <= pivot_floor) throw singular_error("singular 3x3 system");
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        std::swap(perm[k], perm[piv]);
        for (std::size_t i = k + 1; i < 3; ++i) {
            const T f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < 3; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    Vec3<T> x{};
    for (std::size_t ii = 3; ii-- > 0;) {
        T s = b[ii];
        for (std::size_t j = ii + 1; j < 3; ++j) s -= a[ii][j] * x[j];
        x[ii] = s / a[ii][ii];
    }
    return x;
}

}  // namespace detail

/// Gaussian elimination with partial pivoting. Throws singular_error when a
/// pivot falls below 1e-14 times the matrix norm.
template <typename T>
[[nodiscard]] Solve3Result<T> solve3(const Mat3<T>& a, const Vec3<T>& b,
                                     const std::string& what = "matrix") {
    const double norm = inf_norm(a);
    const double floor = 1e-14 * (norm > 0.0 ? norm : 1.0);
    Solve3Result<T> out;
    try {
        out.x = detail::lu_solve(a, b, floor);
        Mat3<T> inv{};
        for (std::size_t c = 0; c < 3; ++c) {
            Vec3<T> e{};
            e[c] = T{1};
            const auto col = detail::lu_solve(a, e, floor);
            for (std::size_t r = 0; r < 3; ++r) inv[r][c] = col[r];
        }
        out.condition = norm * inf_norm(inv);
    } catch (const singular_error&) {
        throw singular_error("singular 3x3 system: " + what);
    }
    out.residual = max_abs(a * out.x - b);
    return out;
}

}  // namespace keen
