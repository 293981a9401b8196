#pragma once

// Small fixed-size complex vectors/matrices used throughout. The fields of a
// two-mode waveguide are four amplitudes, so everything here is 2x2 or 4x4;
// no external linear-algebra dependency is warranted at this size.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>

namespace fiberforce {

using cplx = std::complex<double>;

inline constexpr cplx iunit{0.0, 1.0};

using Vec2 = std::array<cplx, 2>;
using Vec4 = std::array<cplx, 4>;

struct Mat2 {
    std::array<cplx, 4> e{};  // row-major

    cplx& operator()(std::size_t r, std::size_t c) { return e[2 * r + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return e[2 * r + c]; }

    static Mat2 identity() {
        Mat2 m;
        m(0, 0) = 1.0;
        m(1, 1) = 1.0;
        return m;
    }
};

struct Mat4 {
    std::array<cplx, 16> e{};  // row-major

    cplx& operator()(std::size_t r, std::size_t c) { return e[4 * r + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return e[4 * r + c]; }

    static Mat4 identity() {
        Mat4 m;
        for (std::size_t i = 0; i < 4; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
}

inline Vec2 operator*(const Mat2& a, const Vec2& v) {
    return {a(0, 0) * v[0] + a(0, 1) * v[1], a(1, 0) * v[0] + a(1, 1) * v[1]};
}

inline Mat4 operator*(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

inline Vec4 operator*(const Mat4& a, const Vec4& v) {
    Vec4 r{};
    for (std::size_t i = 0; i < 4; ++i) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < 4; ++k) s += a(i, k) * v[k];
        r[i] = s;
    }
    return r;
}

inline Mat4 adjoint(const Mat4& a) {
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) r(i, j) = std::conj(a(j, i));
    return r;
}

/// Induced infinity norm (max absolute row sum).
inline double inf_norm(const Mat4& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < 4; ++j) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

/// ||M†M − I||_inf, zero for an exactly unitary M.
inline double unitarity_deviation(const Mat4& m) {
    Mat4 g = adjoint(m) * m;
    for (std::size_t i = 0; i < 4; ++i) g(i, i) -= 1.0;
    return inf_norm(g);
}

inline cplx det(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

inline double inf_norm(const Mat2& a) {
    double r0 = std::abs(a(0, 0)) + std::abs(a(0, 1));
    double r1 = std::abs(a(1, 0)) + std::abs(a(1, 1));
    return std::max(r0, r1);
}

/// Inverse of a 2x2 block; the caller checks invertibility via det/norm.
inline Mat2 inverse(const Mat2& m) {
    const cplx d = det(m);
    Mat2 r;
    r(0, 0) = m(1, 1) / d;
    r(0, 1) = -m(0, 1) / d;
    r(1, 0) = -m(1, 0) / d;
    r(1, 1) = m(0, 0) / d;
    return r;
}

/// Solve the 2x2 system m*x = b.
inline Vec2 solve2(const Mat2& m, const Vec2& b) {
    const cplx d = det(m);
    return {(m(1, 1) * b[0] - m(0, 1) * b[1]) / d,
            (m(0, 0) * b[1] - m(1, 0) * b[0]) / d};
}

/// Condition number estimate in the infinity norm.
inline double cond2(const Mat2& m) {
    const cplx d = det(m);
    if (std::abs(d) == 0.0) return std::numeric_limits<double>::infinity();
    return inf_norm(m) * inf_norm(inverse(m));
}

}  // namespace fiberforce
