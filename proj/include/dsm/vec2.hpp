#pragma once

#include <cmath>

namespace dsm {

/// Plain 2D vector in double precision, used for points and directions alike.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(const Vec2& o) noexcept { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) noexcept { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) noexcept { x *= s; y *= s; return *this; }

    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2& b) noexcept { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2& b) noexcept { return a -= b; }
constexpr Vec2 operator-(const Vec2& a) noexcept { return {-a.x, -a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) noexcept { return a *= s; }
constexpr Vec2 operator*(double s, Vec2 a) noexcept { return a *= s; }

constexpr double dot(const Vec2& a, const Vec2& b) noexcept { return a.x * b.x + a.y * b.y; }

inline double norm(const Vec2& a) noexcept { return std::hypot(a.x, a.y); }

inline double distance(const Vec2& a, const Vec2& b) noexcept { return norm(a - b); }

inline bool is_finite(const Vec2& a) noexcept { return std::isfinite(a.x) && std::isfinite(a.y); }

/// Unit vector at `radians` from the positive x-axis.
inline Vec2 unit_from_angle(double radians) noexcept { return {std::cos(radians), std::sin(radians)}; }

} // namespace dsm
