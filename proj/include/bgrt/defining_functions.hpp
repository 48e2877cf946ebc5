#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bgrt/geometry.hpp"

namespace bgrt {

/// Smooth real function of two planar arguments with first derivatives and the
/// mixed second-derivative block. Analytic derivatives are optional; missing
/// ones fall back to central finite differences, and `use_analytic = false`
/// forces the finite-difference path even when analytic forms exist.
struct DefiningFunction {
    std::string name;
    std::function<double(Vec2, Vec2)> value;
    std::function<Vec2(Vec2, Vec2)> grad_a_analytic;
    std::function<Vec2(Vec2, Vec2)> grad_b_analytic;
    std::function<Mat2(Vec2, Vec2)> mixed_hessian_analytic;
    std::function<bool(Vec2, Vec2)> singular_at; // optional domain guard
    double level = 1.0;
    bool use_analytic = true;

    static constexpr double fd_step = 1e-5;

    bool singular(Vec2 a, Vec2 b) const { return singular_at && singular_at(a, b); }

    Vec2 grad_a(Vec2 a, Vec2 b) const {
        if (use_analytic && grad_a_analytic) return grad_a_analytic(a, b);
        return fd_grad_a(a, b);
    }
    Vec2 grad_b(Vec2 a, Vec2 b) const {
        if (use_analytic && grad_b_analytic) return grad_b_analytic(a, b);
        return fd_grad_b(a, b);
    }
    Mat2 mixed_hessian(Vec2 a, Vec2 b) const {
        if (use_analytic && mixed_hessian_analytic) return mixed_hessian_analytic(a, b);
        return fd_mixed_hessian(a, b);
    }

    Vec2 fd_grad_a(Vec2 a, Vec2 b) const {
        const double h = fd_step;
        return {(value({a.x + h, a.y}, b) - value({a.x - h, a.y}, b)) / (2 * h),
                (value({a.x, a.y + h}, b) - value({a.x, a.y - h}, b)) / (2 * h)};
    }
    Vec2 fd_grad_b(Vec2 a, Vec2 b) const {
        const double h = fd_step;
        return {(value(a, {b.x + h, b.y}) - value(a, {b.x - h, b.y})) / (2 * h),
                (value(a, {b.x, b.y + h}) - value(a, {b.x, b.y - h})) / (2 * h)};
    }
    Mat2 fd_mixed_hessian(Vec2 a, Vec2 b) const {
        const double h = fd_step;
        auto cross = [&](int i, int j) {
            Vec2 ap = a, am = a;
            (i == 0 ? ap.x : ap.y) += h;
            (i == 0 ? am.x : am.y) -= h;
            Vec2 bp = b, bm = b;
            (j == 0 ? bp.x : bp.y) += h;
            (j == 0 ? bm.x : bm.y) -= h;
            return (value(ap, bp) - value(ap, bm) - value(am, bp) + value(am, bm)) /
                   (4.0 * h * h);
        };
        return {cross(0, 0), cross(0, 1), cross(1, 0), cross(1, 1)};
    }
};

/// phi(a,b) = |a - b| at level t (defaults to 1). Singular on the diagonal.
inline DefiningFunction euclidean_distance(double level = 1.0) {
    DefiningFunction f;
    f.name = "euclidean_distance";
    f.level = level;
    f.value = [](Vec2 a, Vec2 b) { return norm(a - b); };
    f.grad_a_analytic = [](Vec2 a, Vec2 b) {
        const Vec2 w = a - b;
        return (1.0 / norm(w)) * w;
    };
    f.grad_b_analytic = [](Vec2 a, Vec2 b) {
        const Vec2 w = a - b;
        return (-1.0 / norm(w)) * w;
    };
    f.mixed_hessian_analytic = [](Vec2 a, Vec2 b) {
        const Vec2 d = a - b;
        const double r = norm(d);
        const Vec2 w = (1.0 / r) * d;
        // d(grad_a)/db = (w w^T - I)/r
        return Mat2{(w.x * w.x - 1.0) / r, w.x * w.y / r, w.y * w.x / r,
                    (w.y * w.y - 1.0) / r};
    };
    f.singular_at = [](Vec2 a, Vec2 b) { return norm2(a - b) < 1e-12; };
    return f;
}

/// phi(a,b) = a . b at level t (defaults to 1).
inline DefiningFunction dot_pairing(double level = 1.0) {
    DefiningFunction f;
    f.name = "dot_pairing";
    f.level = level;
    f.value = [](Vec2 a, Vec2 b) { return dot(a, b); };
    f.grad_a_analytic = [](Vec2, Vec2 b) { return b; };
    f.grad_b_analytic = [](Vec2 a, Vec2) { return a; };
    f.mixed_hessian_analytic = [](Vec2, Vec2) { return Mat2{1.0, 0.0, 0.0, 1.0}; };
    return f;
}

/// phi(a,b) = (a - b) . e for a fixed unit direction, level 0 by default.
inline DefiningFunction linear_form(Vec2 e = {1.0, 0.0}, double level = 0.0) {
    DefiningFunction f;
    f.name = "linear_form";
    f.level = level;
    f.value = [e](Vec2 a, Vec2 b) { return dot(a - b, e); };
    f.grad_a_analytic = [e](Vec2, Vec2) { return e; };
    f.grad_b_analytic = [e](Vec2, Vec2) { return -e; };
    f.mixed_hessian_analytic = [](Vec2, Vec2) { return Mat2{}; };
    return f;
}

inline DefiningFunction make_defining_function(const std::string& name) {
    if (name == "euclidean_distance") return euclidean_distance();
    if (name == "dot_pairing") return dot_pairing();
    if (name == "linear_form") return linear_form();
    throw std::invalid_argument("unknown defining function: " + name);
}

struct FiniteDiffReport {
    double max_discrepancy = 0.0;          // worst over gradients and the mixed Hessian
    double max_gradient_discrepancy = 0.0; // first-order parts only
    double max_hessian_discrepancy = 0.0;  // cross differences amplify roundoff by 1/(4h^2)
    std::vector<std::size_t> singular_points; // indices flagged by the domain guard
};

/// Validates analytic derivatives against central differences on a point list;
/// points flagged singular are skipped and reported.
inline FiniteDiffReport finite_diff_check(const DefiningFunction& phi,
                                          const std::vector<std::pair<Vec2, Vec2>>& points) {
    FiniteDiffReport rep;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& [a, b] = points[i];
        if (phi.singular(a, b)) {
            rep.singular_points.push_back(i);
            continue;
        }
        auto track = [&](double got, double want, double& bucket) {
            bucket = std::max(bucket, std::abs(got - want));
        };
        if (phi.grad_a_analytic) {
            const Vec2 g = phi.grad_a_analytic(a, b), fd = phi.fd_grad_a(a, b);
            track(g.x, fd.x, rep.max_gradient_discrepancy);
            track(g.y, fd.y, rep.max_gradient_discrepancy);
        }
        if (phi.grad_b_analytic) {
            const Vec2 g = phi.grad_b_analytic(a, b), fd = phi.fd_grad_b(a, b);
            track(g.x, fd.x, rep.max_gradient_discrepancy);
            track(g.y, fd.y, rep.max_gradient_discrepancy);
        }
        if (phi.mixed_hessian_analytic) {
            const Mat2 m = phi.mixed_hessian_analytic(a, b), fd = phi.fd_mixed_hessian(a, b);
            track(m.a11, fd.a11, rep.max_hessian_discrepancy);
            track(m.a12, fd.a12, rep.max_hessian_discrepancy);
            track(m.a21, fd.a21, rep.max_hessian_discrepancy);
            track(m.a22, fd.a22, rep.max_hessian_discrepancy);
        }
    }
    rep.max_discrepancy = std::max(rep.max_gradient_discrepancy, rep.max_hessian_discrepancy);
    return rep;
}

} // namespace bgrt
