#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "bgrt/grid.hpp"

namespace bgrt {

/// Epsilon-thickened general bilinear transform: three defining constraints,
/// sharp indicator windows of half-width eps, prefactor eps^-3.
struct ThickenedKernelSpec {
    std::function<double(Vec2, Vec2)> phi1, phi2, phi3;
    double t1 = 1.0, t2 = 1.0, t3 = 1.0;
    double eps = 0.01;
    std::function<double(Vec2, Vec2)> psi; // optional cut-off, identically 1 when empty
};

namespace detail {

struct WeightedPoint {
    Vec2 p;
    double fv;
};

// Midpoint cells of `box` whose center passes |phi(x,.) - t| < eps, with the
// field value cached per cell.
template <class Phi, FieldLike F>
std::vector<WeightedPoint> slab_cells(const Phi& phi, double t, double eps, Vec2 x,
                                      const F& f, const Box& box, double step) {
    std::vector<WeightedPoint> out;
    const int nx = static_cast<int>(std::ceil((box.xmax - box.xmin) / step));
    const int ny = static_cast<int>(std::ceil((box.ymax - box.ymin) / step));
    for (int j = 0; j < ny; ++j) {
        const double py = box.ymin + (j + 0.5) * step;
        for (int i = 0; i < nx; ++i) {
            const Vec2 p{box.xmin + (i + 0.5) * step, py};
            if (std::abs(phi(x, p) - t) < eps) out.push_back({p, f.eval(p)});
        }
    }
    return out;
}

} // namespace detail

/// Direct evaluation of the thickened operator at x: midpoint rule over the
/// (y,z) cells satisfying all three constraints. The integration step must
/// resolve the slabs (step < eps enforced).
template <class P1, class P2, class P3, FieldLike F, FieldLike G>
double general_b_eps(const P1& phi1, const P2& phi2, const P3& phi3,
                     double t1, double t2, double t3, double eps,
                     const F& f, const G& g, Vec2 x, double step,
                     const Box& y_box, const Box& z_box,
                     const std::function<double(Vec2, Vec2)>& psi = {}) {
    if (!(eps > 0.0)) throw std::invalid_argument("general_b_eps: eps must be positive");
    if (!(step > 0.0) || step >= eps)
        throw std::invalid_argument("general_b_eps: integration step must be smaller than eps");

    const auto ys = detail::slab_cells(phi1, t1, eps, x, f, y_box, step);
    const auto zs = detail::slab_cells(phi2, t2, eps, x, g, z_box, step);

    double acc = 0.0;
    for (const auto& y : ys) {
        if (y.fv == 0.0) continue;
        double inner = 0.0;
        for (const auto& z : zs) {
            if (std::abs(phi3(y.p, z.p) - t3) < eps) {
                double term = z.fv;
                if (psi) term *= psi(y.p, z.p);
                inner += term;
            }
        }
        acc += y.fv * inner;
    }
    const double cell = step * step;
    return acc * cell * cell / (eps * eps * eps);
}

/// std::function-based entry point; domains default to the field grids.
template <FieldLike F, FieldLike G>
double general_b_eps(const ThickenedKernelSpec& spec, const F& f, const G& g,
                     Vec2 x, double step, const Box& y_box, const Box& z_box) {
    return general_b_eps(spec.phi1, spec.phi2, spec.phi3, spec.t1, spec.t2, spec.t3,
                         spec.eps, f, g, x, step, y_box, z_box, spec.psi);
}

inline double general_b_eps(const ThickenedKernelSpec& spec, const SampledField& f,
                            const SampledField& g, Vec2 x, double step) {
    return general_b_eps(spec, f, g, x, step, f.grid.box(), g.grid.box());
}

} // namespace bgrt
