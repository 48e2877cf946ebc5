#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "bgrt/grid.hpp"
#include "bgrt/parallel.hpp"
#include "bgrt/quadrature.hpp"

namespace bgrt {

/// Circular average A f(x) = integral of f(x - y) over the unit circle.
template <FieldLike F>
double spherical_average(const F& f, Vec2 x, const CircleQuadrature& quad) {
    double acc = 0.0;
    for (const Vec2& y : quad.nodes) acc += f.eval(x - y);
    return quad.weight * acc;
}

/// Model bilinear operator B_theta(f,g)(x) = integral of f(x-y) g(x-Ty) dsigma(y).
template <FieldLike F, FieldLike G>
double bilinear_theta(const F& f, const G& g, const Rotation& theta, Vec2 x,
                      const CircleQuadrature& quad) {
    double acc = 0.0;
    for (const Vec2& y : quad.nodes) acc += f.eval(x - y) * g.eval(x - theta.apply(y));
    return quad.weight * acc;
}

/// Rotated average A_theta g(x) = integral of g(x + y - Ty) dsigma(y); the
/// shift points y - Ty sweep a circle of radius sqrt(2(1 - cos theta)).
/// The identity rotation is rejected: the operator degenerates to 2*pi*g(x).
template <FieldLike G>
double rotated_average(const G& g, const Rotation& theta, Vec2 x,
                       const CircleQuadrature& quad) {
    if (theta.is_identity())
        throw std::invalid_argument("rotated_average: theta = 0 is degenerate");
    double acc = 0.0;
    for (const Vec2& y : quad.nodes) acc += g.eval(x + y - theta.apply(y));
    return quad.weight * acc;
}

/// First dual operator B^1_theta(h,g)(x') = integral of h(x'+y) g(x'+y-Ty) dsigma(y).
template <FieldLike H, FieldLike G>
double dual_b1(const H& h, const G& g, const Rotation& theta, Vec2 x,
               const CircleQuadrature& quad) {
    double acc = 0.0;
    for (const Vec2& y : quad.nodes) acc += h.eval(x + y) * g.eval(x + y - theta.apply(y));
    return quad.weight * acc;
}

/// Second dual operator B^2_theta(f,h)(x') = integral of h(x'+Ty) f(x'+Ty-y) dsigma(y).
template <FieldLike F, FieldLike H>
double dual_b2(const F& f, const H& h, const Rotation& theta, Vec2 x,
               const CircleQuadrature& quad) {
    double acc = 0.0;
    for (const Vec2& y : quad.nodes) {
        const Vec2 ty = theta.apply(y);
        acc += h.eval(x + ty) * f.eval(x + ty - y);
    }
    return quad.weight * acc;
}

/// Conservative pre-test for B_theta(f,g)(x) != 0 when f and g are supported in
/// known boxes: both reads require a unit vector u with x - u inside the box,
/// i.e. min_dist(x, box) <= 1 <= max_dist(x, box). Boxes must already include
/// the interpolation reach of the fields.
struct SupportHint {
    Box f_box;
    Box g_box;

    bool active(Vec2 x) const {
        return f_box.min_dist(x) <= 1.0 && f_box.max_dist(x) >= 1.0 &&
               g_box.min_dist(x) <= 1.0 && g_box.max_dist(x) >= 1.0;
    }
};

/// B_theta evaluated at every node of `grid`.
template <FieldLike F, FieldLike G>
SampledField bilinear_field(const F& f, const G& g, const Rotation& theta,
                            const GridSpec& grid, const CircleQuadrature& quad,
                            InterpMode out_mode = InterpMode::bilinear,
                            const std::optional<SupportHint>& hint = std::nullopt) {
    SampledField out(grid, out_mode);
    parallel_rows(grid.axis_nodes, [&](int iy) {
        for (int ix = 0; ix < grid.axis_nodes; ++ix) {
            const Vec2 x = grid.node(ix, iy);
            if (hint && !hint->active(x)) continue; // reads are exactly zero there
            out.at(ix, iy) = bilinear_theta(f, g, theta, x, quad);
        }
    });
    return out;
}

/// Lr norm of B_theta(f,g) over the grid without materialising the field.
/// Summation order matches bilinear_field + lp_norm, so results agree bit for bit.
template <FieldLike F, FieldLike G>
double bilinear_norm(const F& f, const G& g, const Rotation& theta,
                     const GridSpec& grid, const CircleQuadrature& quad, double r,
                     const std::optional<SupportHint>& hint = std::nullopt) {
    require_exponent(r);
    const int n = grid.axis_nodes;
    std::vector<double> row_sums(n, 0.0), row_sups(n, 0.0);
    parallel_rows(n, [&](int iy) {
        double row = 0.0, sup = 0.0;
        for (int ix = 0; ix < n; ++ix) {
            const Vec2 x = grid.node(ix, iy);
            if (hint && !hint->active(x)) continue;
            const double v = std::abs(bilinear_theta(f, g, theta, x, quad));
            sup = std::max(sup, v);
            if (r == 1.0) row += grid.axis_weight(ix) * v;
            else if (r == 2.0) row += grid.axis_weight(ix) * v * v;
            else if (r != infinite_exponent) row += grid.axis_weight(ix) * std::pow(v, r);
        }
        row_sums[iy] = row;
        row_sups[iy] = sup;
    });
    if (r == infinite_exponent) {
        double sup = 0.0;
        for (double v : row_sups) sup = std::max(sup, v);
        return sup;
    }
    double acc = 0.0;
    for (int iy = 0; iy < n; ++iy) acc += grid.axis_weight(iy) * row_sums[iy];
    const double h2 = grid.spacing * grid.spacing;
    return std::pow(h2 * acc, 1.0 / r);
}

/// Both sides of the L^1 pairing identity: integral of B_theta(f,g) equals
/// integral of f * (A_theta g). Stated for nonnegative inputs.
struct PairingCheck {
    double lhs = 0.0; // integral of B_theta(f,g)
    double rhs = 0.0; // integral of f * A_theta g
    double relative_gap() const {
        const double scale = std::max(std::abs(lhs), std::abs(rhs));
        return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
    }
};

inline PairingCheck l1_pairing_check(const SampledField& f, const SampledField& g,
                                     const Rotation& theta, const GridSpec& grid,
                                     const CircleQuadrature& quad) {
    if (theta.is_identity()) // checked here: worker threads must not throw
        throw std::invalid_argument("l1_pairing_check: theta = 0 is degenerate");
    for (double v : f.values)
        if (v < 0.0) throw std::invalid_argument("l1_pairing_check: f must be nonnegative");
    for (double v : g.values)
        if (v < 0.0) throw std::invalid_argument("l1_pairing_check: g must be nonnegative");
    const int n = grid.axis_nodes;
    const double h2 = grid.spacing * grid.spacing;
    std::vector<double> lrows(n, 0.0), rrows(n, 0.0);
    parallel_rows(n, [&](int iy) {
        double lrow = 0.0, rrow = 0.0;
        for (int ix = 0; ix < n; ++ix) {
            const Vec2 x = grid.node(ix, iy);
            const double wx = grid.axis_weight(ix);
            lrow += wx * bilinear_theta(f, g, theta, x, quad);
            const double fv = f.eval(x);
            if (fv != 0.0) rrow += wx * fv * rotated_average(g, theta, x, quad);
        }
        lrows[iy] = lrow;
        rrows[iy] = rrow;
    });
    double lhs = 0.0, rhs = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        lhs += grid.axis_weight(iy) * lrows[iy];
        rhs += grid.axis_weight(iy) * rrows[iy];
    }
    return {lhs * h2, rhs * h2};
}

} // namespace bgrt
