#pragma once

#include <cmath>

#include "srbm/errors.hpp"

namespace srbm {

struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x1, s * v.x2}; }
inline double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }

// Row-major 2x2 matrix; a12 is row 1, column 2.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;
};

inline double det(const Mat2& m) { return m.a11 * m.a22 - m.a12 * m.a21; }

inline Mat2 transpose(const Mat2& m) { return {m.a11, m.a21, m.a12, m.a22}; }

inline Vec2 mul(const Mat2& m, Vec2 v) {
    return {m.a11 * v.x1 + m.a12 * v.x2, m.a21 * v.x1 + m.a22 * v.x2};
}

inline Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

// Solve m x = rhs. Throws SingularTransform when |det| is negligible against
// the matrix scale.
inline Vec2 solve(const Mat2& m, Vec2 rhs) {
    const double scale = std::fabs(m.a11) + std::fabs(m.a12) +
                         std::fabs(m.a21) + std::fabs(m.a22);
    const double d = det(m);
    if (std::fabs(d) <= 1e-14 * scale * scale + 1e-300)
        fail(ErrorCode::SingularTransform, "2x2 solve: singular matrix");
    return {(m.a22 * rhs.x1 - m.a12 * rhs.x2) / d,
            (m.a11 * rhs.x2 - m.a21 * rhs.x1) / d};
}

inline Mat2 inverse(const Mat2& m) {
    const double scale = std::fabs(m.a11) + std::fabs(m.a12) +
                         std::fabs(m.a21) + std::fabs(m.a22);
    const double d = det(m);
    if (std::fabs(d) <= 1e-14 * scale * scale + 1e-300)
        fail(ErrorCode::SingularTransform, "2x2 inverse: singular matrix");
    return {m.a22 / d, -m.a12 / d, -m.a21 / d, m.a11 / d};
}

} // namespace srbm
