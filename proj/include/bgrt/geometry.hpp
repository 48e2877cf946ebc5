#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bgrt {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double c, Vec2 a) { return {c * a.x, c * a.y}; }
    friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
    double det() const { return a11 * a22 - a12 * a21; }
};

/// Counter-clockwise rotation by theta; applied to (1,0) gives (cos theta, sin theta).
struct Rotation {
    double theta = 0.0;
    double c = 1.0;
    double s = 0.0;

    Rotation() = default;
    explicit Rotation(double angle) : theta(angle), c(std::cos(angle)), s(std::sin(angle)) {}

    Vec2 apply(Vec2 v) const { return {c * v.x - s * v.y, s * v.x + c * v.y}; }
    Vec2 apply_inverse(Vec2 v) const { return {c * v.x + s * v.y, -s * v.x + c * v.y}; }
    Mat2 matrix() const { return {c, -s, s, c}; }

    /// True when the rotation is the identity up to the given angular tolerance.
    bool is_identity(double tol = 1e-12) const {
        double m = std::fmod(theta, two_pi);
        if (m < 0) m += two_pi;
        return m <= tol || two_pi - m <= tol;
    }
};

/// Axis-aligned box, used for support bookkeeping.
struct Box {
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

    bool contains(Vec2 p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    Box inflated(double r) const { return {xmin - r, xmax + r, ymin - r, ymax + r}; }

    double min_dist(Vec2 p) const {
        double dx = std::max({xmin - p.x, 0.0, p.x - xmax});
        double dy = std::max({ymin - p.y, 0.0, p.y - ymax});
        return std::hypot(dx, dy);
    }
    double max_dist(Vec2 p) const {
        double dx = std::max(std::abs(p.x - xmin), std::abs(p.x - xmax));
        double dy = std::max(std::abs(p.y - ymin), std::abs(p.y - ymax));
        return std::hypot(dx, dy);
    }
};

} // namespace bgrt
