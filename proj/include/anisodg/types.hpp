#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace anisodg {

/// Raised for invalid input, degenerate geometry, and solver failures.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ElementKind { Triangle, Quad };

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Row-major 2x2 matrix.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    double det() const { return a11 * a22 - a12 * a21; }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }
    Mat2 inverse() const
    {
        const double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    friend Vec2 operator*(const Mat2& m, Vec2 v)
    {
        return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y};
    }
    friend Mat2 operator*(const Mat2& a, const Mat2& b)
    {
        return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
                a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
    }
    friend Mat2 operator*(double s, const Mat2& m)
    {
        return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
    }
    friend Mat2 operator+(const Mat2& a, const Mat2& b)
    {
        return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
    }
};

} // namespace anisodg
