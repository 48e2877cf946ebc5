#pragma once

#include <array>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "bgrt/defining_functions.hpp"
#include "bgrt/linalg.hpp"

namespace bgrt {

using ZPoint = std::array<Vec2, 3>;   // (x, y, z)
using ZZPoint = std::array<Vec2, 5>;  // (x, y, z, y', z')

/// A trio of defining functions with levels, plus the on-surface tolerance for
/// the incidence variety Z = {phi1(x,y)=t1, phi2(x,z)=t2, phi3(y,z)=t3}.
struct TripleConfig {
    DefiningFunction phi1, phi2, phi3;
    double surface_tol = 1e-8;

    static TripleConfig all_distance() {
        return {euclidean_distance(), euclidean_distance(), euclidean_distance(), 1e-8};
    }

    std::array<double, 3> residuals(const ZPoint& p) const {
        return {phi1.value(p[0], p[1]) - phi1.level, phi2.value(p[0], p[2]) - phi2.level,
                phi3.value(p[1], p[2]) - phi3.level};
    }
    std::array<double, 6> residuals(const ZZPoint& p) const {
        return {phi1.value(p[0], p[1]) - phi1.level, phi2.value(p[0], p[2]) - phi2.level,
                phi3.value(p[1], p[2]) - phi3.level, phi1.value(p[0], p[3]) - phi1.level,
                phi2.value(p[0], p[4]) - phi2.level, phi3.value(p[3], p[4]) - phi3.level};
    }

    template <class P>
    void require_on_surface(const P& p) const {
        double worst = 0.0;
        for (double r : residuals(p)) worst = std::max(worst, std::abs(r));
        if (worst > surface_tol) {
            std::ostringstream os;
            os << "point is off the incidence surface: max residual " << worst
               << " exceeds tolerance " << surface_tol;
            throw std::invalid_argument(os.str());
        }
    }
};

/// Phong-Stein rotational curvature determinant of one defining function at an
/// on-surface pair: det [[0, grad_a phi], [-(grad_b phi)^T, mixed Hessian]].
inline double phong_stein_det(const DefiningFunction& phi, Vec2 a, Vec2 b,
                              double surface_tol = 1e-8) {
    const double res = std::abs(phi.value(a, b) - phi.level);
    if (res > surface_tol) {
        std::ostringstream os;
        os << "phong_stein_det: point off the level set, residual " << res;
        throw std::invalid_argument(os.str());
    }
    const Vec2 ga = phi.grad_a(a, b);
    const Vec2 gb = phi.grad_b(a, b);
    const Mat2 h = phi.mixed_hessian(a, b);
    SmallMatrix m(3, 3);
    m(0, 0) = 0.0;  m(0, 1) = ga.x;  m(0, 2) = ga.y;
    m(1, 0) = -gb.x; m(1, 1) = h.a11; m(1, 2) = h.a12;
    m(2, 0) = -gb.y; m(2, 1) = h.a21; m(2, 2) = h.a22;
    return det3(m);
}

namespace detail {

inline void put(SmallMatrix& m, int row, int col_block, Vec2 g) {
    m(row, 2 * col_block) = g.x;
    m(row, 2 * col_block + 1) = g.y;
}

} // namespace detail

/// 3x6 differential of the constraint map at a Z-point; Z is a smooth
/// codimension-3 submanifold where this has full rank.
inline SmallMatrix z_matrix(const TripleConfig& cfg, const ZPoint& p) {
    const auto& [x, y, z] = p;
    SmallMatrix m(3, 6);
    detail::put(m, 0, 0, cfg.phi1.grad_a(x, y));
    detail::put(m, 0, 1, cfg.phi1.grad_b(x, y));
    detail::put(m, 1, 0, cfg.phi2.grad_a(x, z));
    detail::put(m, 1, 2, cfg.phi2.grad_b(x, z));
    detail::put(m, 2, 1, cfg.phi3.grad_a(y, z));
    detail::put(m, 2, 2, cfg.phi3.grad_b(y, z));
    return m;
}

inline int z_rank(const TripleConfig& cfg, const ZPoint& p, double rank_tol = 1e-8) {
    cfg.require_on_surface(p);
    return numerical_rank(z_matrix(cfg, p), rank_tol);
}

/// 6x10 differential at a point of the doubled surface Z x_x Z.
inline SmallMatrix zz_matrix(const TripleConfig& cfg, const ZZPoint& p) {
    const Vec2 x = p[0], y = p[1], z = p[2], yp = p[3], zp = p[4];
    SmallMatrix m(6, 10);
    detail::put(m, 0, 0, cfg.phi1.grad_a(x, y));
    detail::put(m, 0, 1, cfg.phi1.grad_b(x, y));
    detail::put(m, 1, 0, cfg.phi2.grad_a(x, z));
    detail::put(m, 1, 2, cfg.phi2.grad_b(x, z));
    detail::put(m, 2, 1, cfg.phi3.grad_a(y, z));
    detail::put(m, 2, 2, cfg.phi3.grad_b(y, z));
    detail::put(m, 3, 0, cfg.phi1.grad_a(x, yp));
    detail::put(m, 3, 3, cfg.phi1.grad_b(x, yp));
    detail::put(m, 4, 0, cfg.phi2.grad_a(x, zp));
    detail::put(m, 4, 4, cfg.phi2.grad_b(x, zp));
    detail::put(m, 5, 3, cfg.phi3.grad_a(yp, zp));
    detail::put(m, 5, 4, cfg.phi3.grad_b(yp, zp));
    return m;
}

inline int zz_rank(const TripleConfig& cfg, const ZZPoint& p, double rank_tol = 1e-8) {
    cfg.require_on_surface(p);
    return numerical_rank(zz_matrix(cfg, p), rank_tol);
}

/// The four first-order 4x4 determinants controlling the pushforward kernels.
/// Each matrix stacks two unprimed gradient rows in the left 2x2 block and two
/// primed gradient rows in the right 2x2 block. Row 3 of D_yz' admits two
/// readings, phi3(x, z') or phi2(x, z'); the block pattern of the other three
/// determinants calls for phi2, so that is the primary value and the phi3
/// variant is reported whenever the two differ.
struct FirstOrderDets {
    double d_yz = 0.0;
    double d_zy = 0.0;
    double d_zz = 0.0;
    double d_yy = 0.0;
    double d_yz_literal = 0.0;
    bool literal_differs = false;

    bool passes(double tau) const {
        return std::abs(d_yz) > tau || std::abs(d_zy) > tau ||
               (std::abs(d_zz) > tau && std::abs(d_yy) > tau);
    }
};

namespace detail {

inline double block_det4(Vec2 r0, Vec2 r1, Vec2 r2, Vec2 r3) {
    SmallMatrix m(4, 4);
    m(0, 0) = r0.x; m(0, 1) = r0.y;
    m(1, 0) = r1.x; m(1, 1) = r1.y;
    m(2, 2) = r2.x; m(2, 3) = r2.y;
    m(3, 2) = r3.x; m(3, 3) = r3.y;
    return det(m);
}

} // namespace detail

inline FirstOrderDets first_order_dets(const TripleConfig& cfg, const ZZPoint& p) {
    cfg.require_on_surface(p);
    const Vec2 x = p[0], y = p[1], z = p[2], yp = p[3], zp = p[4];
    const Vec2 dy_phi1 = cfg.phi1.grad_b(x, y);
    const Vec2 dy_phi3 = cfg.phi3.grad_a(y, z);
    const Vec2 dz_phi2 = cfg.phi2.grad_b(x, z);
    const Vec2 dz_phi3 = cfg.phi3.grad_b(y, z);
    const Vec2 dyp_phi1 = cfg.phi1.grad_b(x, yp);
    const Vec2 dyp_phi3 = cfg.phi3.grad_a(yp, zp);
    const Vec2 dzp_phi2 = cfg.phi2.grad_b(x, zp);
    const Vec2 dzp_phi3 = cfg.phi3.grad_b(yp, zp);

    FirstOrderDets d;
    d.d_yz = detail::block_det4(dy_phi1, dy_phi3, dzp_phi2, dzp_phi3);
    d.d_zy = detail::block_det4(dz_phi2, dz_phi3, dyp_phi1, dyp_phi3);
    d.d_zz = detail::block_det4(dz_phi2, dz_phi3, dzp_phi2, dzp_phi3);
    d.d_yy = detail::block_det4(dy_phi1, dy_phi3, dyp_phi1, dyp_phi3);

    // Alternate reading of the D_yz' row 3: d_{z'} phi3(x, z').
    const Vec2 literal_row = cfg.phi3.grad_b(x, zp);
    d.d_yz_literal = detail::block_det4(dy_phi1, dy_phi3, literal_row, dzp_phi3);
    d.literal_differs = std::abs(d.d_yz_literal - d.d_yz) > 1e-12;
    return d;
}

struct ConditionSample {
    ZZPoint point;
    FirstOrderDets dets;
    bool pass = false;
};

struct ConditionReport {
    std::vector<ConditionSample> samples;
    double tau = 1e-6;
    bool all_pass = true;
    std::size_t failures = 0;
};

/// Evaluates the disjunction "D_yz' or D_zy' or (D_zz' and D_yy')" at every
/// sampled point of the doubled surface.
inline ConditionReport cond_general(const TripleConfig& cfg, const std::vector<ZZPoint>& points,
                                    double tau = 1e-6) {
    if (points.empty())
        throw std::invalid_argument("cond_general: empty sample set");
    ConditionReport rep;
    rep.tau = tau;
    rep.samples.reserve(points.size());
    for (const auto& p : points) {
        ConditionSample s;
        s.point = p;
        s.dets = first_order_dets(cfg, p);
        s.pass = s.dets.passes(tau);
        if (!s.pass) {
            rep.all_pass = false;
            ++rep.failures;
        }
        rep.samples.push_back(std::move(s));
    }
    return rep;
}

struct SurfaceSample {
    std::vector<ZPoint> points;
    bool complete = true; // false when the retry budget ran out
};

struct SurfaceSampleZZ {
    std::vector<ZZPoint> points;
    bool complete = true;
};

namespace detail {

// Gauss-Newton projection onto {F = 0}: p <- p - J^T (J J^T)^{-1} F.
// Returns true on convergence to max residual <= 1e-10.
template <int NC, int NV, class Residuals, class Jacobian, class SingularGuard>
bool newton_project(std::array<double, NV>& p, const Residuals& residuals,
                    const Jacobian& jacobian, const SingularGuard& singular) {
    for (int iter = 0; iter < 60; ++iter) {
        if (singular(p)) return false;
        const std::array<double, NC> f = residuals(p);
        double worst = 0.0;
        for (double v : f) worst = std::max(worst, std::abs(v));
        if (worst <= 1e-10) return true;
        const SmallMatrix j = jacobian(p);
        SmallMatrix jjt(NC, NC);
        for (int r = 0; r < NC; ++r)
            for (int c = 0; c < NC; ++c) {
                double s = 0.0;
                for (int k = 0; k < NV; ++k) s += j(r, k) * j(c, k);
                jjt(r, c) = s;
            }
        std::vector<double> lambda;
        if (!solve_linear(jjt, std::vector<double>(f.begin(), f.end()), lambda)) return false;
        for (int k = 0; k < NV; ++k) {
            double s = 0.0;
            for (int r = 0; r < NC; ++r) s += j(r, k) * lambda[r];
            p[k] -= s;
        }
    }
    return false;
}

inline ZPoint unpack3(const std::array<double, 6>& v) {
    return {Vec2{v[0], v[1]}, Vec2{v[2], v[3]}, Vec2{v[4], v[5]}};
}
inline ZZPoint unpack5(const std::array<double, 10>& v) {
    return {Vec2{v[0], v[1]}, Vec2{v[2], v[3]}, Vec2{v[4], v[5]}, Vec2{v[6], v[7]},
            Vec2{v[8], v[9]}};
}

} // namespace detail

/// Newton projection of random seeds onto Z. Seeds that fail to converge are
/// discarded; if the retry budget runs out a partial list is returned with
/// complete = false.
inline SurfaceSample sample_surface(const TripleConfig& cfg, int count,
                                    std::uint64_t seed = 1234, double box = 1.5) {
    if (count < 1) throw std::invalid_argument("sample_surface: count must be >= 1");
    SurfaceSample out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-box, box);
    const long budget = 400L * count;
    long attempts = 0;
    while (static_cast<int>(out.points.size()) < count && attempts < budget) {
        ++attempts;
        std::array<double, 6> v;
        for (auto& c : v) c = u(rng);
        const auto res = [&](const std::array<double, 6>& w) {
            const auto r = cfg.residuals(detail::unpack3(w));
            return std::array<double, 3>{r[0], r[1], r[2]};
        };
        const auto jac = [&](const std::array<double, 6>& w) {
            return z_matrix(cfg, detail::unpack3(w));
        };
        const auto guard = [&](const std::array<double, 6>& w) {
            const ZPoint p = detail::unpack3(w);
            return cfg.phi1.singular(p[0], p[1]) || cfg.phi2.singular(p[0], p[2]) ||
                   cfg.phi3.singular(p[1], p[2]);
        };
        if (detail::newton_project<3, 6>(v, res, jac, guard)) out.points.push_back(detail::unpack3(v));
    }
    out.complete = static_cast<int>(out.points.size()) == count;
    return out;
}

/// Newton projection onto the doubled surface (x, y, z, y', z').
inline SurfaceSampleZZ sample_surface_zz(const TripleConfig& cfg, int count,
                                         std::uint64_t seed = 1234, double box = 1.5) {
    if (count < 1) throw std::invalid_argument("sample_surface_zz: count must be >= 1");
    SurfaceSampleZZ out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-box, box);
    const long budget = 400L * count;
    long attempts = 0;
    while (static_cast<int>(out.points.size()) < count && attempts < budget) {
        ++attempts;
        std::array<double, 10> v;
        for (auto& c : v) c = u(rng);
        const auto res = [&](const std::array<double, 10>& w) {
            return cfg.residuals(detail::unpack5(w));
        };
        const auto jac = [&](const std::array<double, 10>& w) {
            return zz_matrix(cfg, detail::unpack5(w));
        };
        const auto guard = [&](const std::array<double, 10>& w) {
            const ZZPoint p = detail::unpack5(w);
            return cfg.phi1.singular(p[0], p[1]) || cfg.phi2.singular(p[0], p[2]) ||
                   cfg.phi3.singular(p[1], p[2]) || cfg.phi1.singular(p[0], p[3]) ||
                   cfg.phi2.singular(p[0], p[4]) || cfg.phi3.singular(p[3], p[4]);
        };
        if (detail::newton_project<6, 10>(v, res, jac, guard))
            out.points.push_back(detail::unpack5(v));
    }
    out.complete = static_cast<int>(out.points.size()) == count;
    return out;
}

} // namespace bgrt
