#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bgrt/geometry.hpp"

namespace bgrt {

enum class InterpMode { nearest, bilinear };

inline const char* to_string(InterpMode m) {
    return m == InterpMode::nearest ? "nearest" : "bilinear";
}
inline InterpMode interp_mode_from_string(const std::string& s) {
    if (s == "nearest") return InterpMode::nearest;
    if (s == "bilinear") return InterpMode::bilinear;
    throw std::invalid_argument("unknown interpolation mode: " + s);
}

/// Uniform node grid on the square [-L,L]^2; node i sits at -L + i*h.
struct GridSpec {
    double half_width = 1.0;
    double spacing = 1.0;
    int axis_nodes = 3; // per axis, endpoints included

    static GridSpec make(double half_width, double spacing) {
        if (!(half_width > 0.0)) throw std::invalid_argument("GridSpec: half_width must be positive");
        if (!(spacing > 0.0)) throw std::invalid_argument("GridSpec: spacing must be positive");
        const double intervals = 2.0 * half_width / spacing;
        const double rounded = std::round(intervals);
        if (rounded < 1.0 || std::abs(intervals - rounded) > 1e-9 * std::max(1.0, rounded)) {
            throw std::invalid_argument("GridSpec: 2L/h must be a positive integer, got " +
                                        std::to_string(intervals));
        }
        GridSpec g;
        g.half_width = half_width;
        g.spacing = spacing;
        g.axis_nodes = static_cast<int>(rounded) + 1;
        return g;
    }

    double coord(int i) const { return -half_width + i * spacing; }
    Vec2 node(int ix, int iy) const { return {coord(ix), coord(iy)}; }
    std::size_t node_count() const {
        return static_cast<std::size_t>(axis_nodes) * static_cast<std::size_t>(axis_nodes);
    }
    bool inside(Vec2 p) const {
        return std::abs(p.x) <= half_width && std::abs(p.y) <= half_width;
    }
    Box box() const { return {-half_width, half_width, -half_width, half_width}; }

    // Trapezoid weight of axis node i; boundary nodes carry half weight so that
    // the weighted cell sum tiles [-L,L]^2 exactly.
    double axis_weight(int i) const { return (i == 0 || i == axis_nodes - 1) ? 0.5 : 1.0; }

    bool same_layout(const GridSpec& o) const {
        return half_width == o.half_width && spacing == o.spacing && axis_nodes == o.axis_nodes;
    }
};

/// Real-valued function on the plane known by its samples on a GridSpec;
/// reads off-grid go through the stored interpolation mode, reads outside
/// [-L,L]^2 return 0.
struct SampledField {
    GridSpec grid;
    InterpMode mode = InterpMode::bilinear;
    std::vector<double> values; // row-major, values[iy*n + ix]

    SampledField() = default;
    SampledField(GridSpec g, InterpMode m)
        : grid(g), mode(m), values(g.node_count(), 0.0) {}

    double& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * grid.axis_nodes + ix]; }
    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * grid.axis_nodes + ix]; }

    double eval(Vec2 p) const {
        const double L = grid.half_width;
        if (std::abs(p.x) > L || std::abs(p.y) > L) return 0.0;
        const double fx = (p.x + L) / grid.spacing;
        const double fy = (p.y + L) / grid.spacing;
        const int n = grid.axis_nodes;
        if (mode == InterpMode::nearest) {
            int ix = static_cast<int>(std::lround(fx));
            int iy = static_cast<int>(std::lround(fy));
            ix = std::clamp(ix, 0, n - 1);
            iy = std::clamp(iy, 0, n - 1);
            return at(ix, iy);
        }
        int i0 = std::clamp(static_cast<int>(std::floor(fx)), 0, n - 2);
        int j0 = std::clamp(static_cast<int>(std::floor(fy)), 0, n - 2);
        const double tx = std::clamp(fx - i0, 0.0, 1.0);
        const double ty = std::clamp(fy - j0, 0.0, 1.0);
        const double v00 = at(i0, j0), v10 = at(i0 + 1, j0);
        const double v01 = at(i0, j0 + 1), v11 = at(i0 + 1, j0 + 1);
        return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 +
               (1 - tx) * ty * v01 + tx * ty * v11;
    }
};

/// Anything readable as a planar scalar field. SampledField models this;
/// AnalyticField wraps a closed-form expression.
template <class T>
concept FieldLike = requires(const T& t, Vec2 p) {
    { t.eval(p) } -> std::convertible_to<double>;
};

template <class Fn>
struct AnalyticField {
    Fn fn;
    double eval(Vec2 p) const { return fn(p); }
};

template <class Fn>
AnalyticField<std::decay_t<Fn>> make_analytic(Fn&& fn) {
    return {std::forward<Fn>(fn)};
}

/// Sample a pointwise expression at every grid node. Rejects non-finite values,
/// reporting the offending node.
template <class Expr>
SampledField sample(Expr&& expr, const GridSpec& grid, InterpMode mode) {
    SampledField f(grid, mode);
    for (int iy = 0; iy < grid.axis_nodes; ++iy) {
        for (int ix = 0; ix < grid.axis_nodes; ++ix) {
            const Vec2 p = grid.node(ix, iy);
            const double v = expr(p);
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "sample: non-finite value at node (" << ix << "," << iy
                   << ") = (" << p.x << "," << p.y << ")";
                throw std::invalid_argument(os.str());
            }
            f.at(ix, iy) = v;
        }
    }
    return f;
}

inline constexpr double infinite_exponent = std::numeric_limits<double>::infinity();

inline void require_exponent(double p) {
    if (!(p >= 1.0)) // also rejects NaN
        throw std::invalid_argument("exponent must satisfy p >= 1 or p = infinity");
}

/// Discrete Lp norm over the grid. Boundary nodes carry trapezoid half-weights,
/// which keeps the norm of fields touching the boundary exact; for fields
/// supported in the interior it coincides with the plain h^2-weighted sum.
inline double lp_norm(const SampledField& f, double p) {
    require_exponent(p);
    const int n = f.grid.axis_nodes;
    if (p == infinite_exponent) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        const double wy = f.grid.axis_weight(iy);
        double row = 0.0;
        for (int ix = 0; ix < n; ++ix) {
            const double a = std::abs(f.at(ix, iy));
            double t;
            if (p == 1.0) t = a;
            else if (p == 2.0) t = a * a;
            else t = std::pow(a, p);
            row += f.grid.axis_weight(ix) * t;
        }
        acc += wy * row;
    }
    const double h2 = f.grid.spacing * f.grid.spacing;
    return std::pow(h2 * acc, 1.0 / p);
}

/// Weighted Riemann integral of f over [-L,L]^2.
inline double integral(const SampledField& f) {
    const int n = f.grid.axis_nodes;
    double acc = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        const double wy = f.grid.axis_weight(iy);
        double row = 0.0;
        for (int ix = 0; ix < n; ++ix) row += f.grid.axis_weight(ix) * f.at(ix, iy);
        acc += wy * row;
    }
    return acc * f.grid.spacing * f.grid.spacing;
}

/// Riemann pairing of two fields on the same grid layout.
inline double inner_product(const SampledField& f, const SampledField& g) {
    if (!f.grid.same_layout(g.grid))
        throw std::invalid_argument("inner_product: grid layouts differ");
    const int n = f.grid.axis_nodes;
    double acc = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        const double wy = f.grid.axis_weight(iy);
        double row = 0.0;
        for (int ix = 0; ix < n; ++ix)
            row += f.grid.axis_weight(ix) * f.at(ix, iy) * g.at(ix, iy);
        acc += wy * row;
    }
    return acc * f.grid.spacing * f.grid.spacing;
}

/// Area of the set marked by a 0/1 indicator field.
inline double measure(const SampledField& f) {
    const int n = f.grid.axis_nodes;
    double acc = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        const double wy = f.grid.axis_weight(iy);
        double row = 0.0;
        for (int ix = 0; ix < n; ++ix) {
            const double v = f.at(ix, iy);
            if (v != 0.0 && v != 1.0)
                throw std::invalid_argument("measure: field is not a 0/1 indicator");
            row += f.grid.axis_weight(ix) * v;
        }
        acc += wy * row;
    }
    return acc * f.grid.spacing * f.grid.spacing;
}

} // namespace bgrt
