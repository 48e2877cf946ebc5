#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bgrt/polytope.hpp"
#include "bgrt/transforms.hpp"

namespace bgrt {

enum class FamilyKind { small_ball, annulus, large_ball, tangent_rectangle };

/// One extremal family: a small ball, an annulus, a large ball, or an
/// eps x eps^2 rectangle straddling the unit circle at its tangency angle with
/// the long side along the tangent direction.
struct ExtremalFamily {
    FamilyKind kind = FamilyKind::small_ball;
    double scale = 0.1;           // delta, R, or eps
    double annulus_radius = 2.0;  // annulus only
    double annulus_width = 0.1;   // annulus only
    double tangency_angle = M_PI / 2.0; // rectangle only

    static ExtremalFamily small_ball(double delta) {
        require_positive(delta);
        ExtremalFamily f;
        f.kind = FamilyKind::small_ball;
        f.scale = delta;
        return f;
    }
    static ExtremalFamily annulus(double radius, double width) {
        require_positive(radius);
        require_positive(width);
        ExtremalFamily f;
        f.kind = FamilyKind::annulus;
        f.scale = width;
        f.annulus_radius = radius;
        f.annulus_width = width;
        return f;
    }
    static ExtremalFamily large_ball(double radius) {
        require_positive(radius);
        ExtremalFamily f;
        f.kind = FamilyKind::large_ball;
        f.scale = radius;
        return f;
    }
    static ExtremalFamily tangent_rectangle(double eps, double angle) {
        require_positive(eps);
        ExtremalFamily f;
        f.kind = FamilyKind::tangent_rectangle;
        f.scale = eps;
        f.tangency_angle = angle;
        return f;
    }

    static void require_positive(double v) {
        if (!(v > 0.0))
            throw std::invalid_argument("ExtremalFamily: scale parameters must be positive");
    }

    double feature_width() const {
        switch (kind) {
            case FamilyKind::small_ball: return scale;
            case FamilyKind::annulus: return annulus_width;
            case FamilyKind::large_ball: return scale;
            case FamilyKind::tangent_rectangle: return scale * scale;
        }
        return scale;
    }

    Box bounding_box() const {
        switch (kind) {
            case FamilyKind::small_ball:
            case FamilyKind::large_ball:
                return {-scale, scale, -scale, scale};
            case FamilyKind::annulus: {
                const double r = annulus_radius + annulus_width / 2.0;
                return {-r, r, -r, r};
            }
            case FamilyKind::tangent_rectangle: {
                const Vec2 c{std::cos(tangency_angle), std::sin(tangency_angle)};
                const Vec2 t{-std::sin(tangency_angle), std::cos(tangency_angle)};
                const Vec2 n = c;
                const double he = scale / 2.0, hn = scale * scale / 2.0;
                const double ex = he * std::abs(t.x) + hn * std::abs(n.x);
                const double ey = he * std::abs(t.y) + hn * std::abs(n.y);
                return {c.x - ex, c.x + ex, c.y - ey, c.y + ey};
            }
        }
        return {};
    }

    double indicator(Vec2 p) const {
        switch (kind) {
            case FamilyKind::small_ball:
            case FamilyKind::large_ball:
                return norm2(p) <= scale * scale ? 1.0 : 0.0;
            case FamilyKind::annulus: {
                const double r = norm(p);
                return std::abs(r - annulus_radius) <= annulus_width / 2.0 ? 1.0 : 0.0;
            }
            case FamilyKind::tangent_rectangle: {
                const Vec2 c{std::cos(tangency_angle), std::sin(tangency_angle)};
                const Vec2 t{-std::sin(tangency_angle), std::cos(tangency_angle)};
                const Vec2 d = p - c;
                return (std::abs(dot(d, t)) <= scale / 2.0 &&
                        std::abs(dot(d, c)) <= scale * scale / 2.0)
                           ? 1.0
                           : 0.0;
            }
        }
        return 0.0;
    }
};

/// Thrown when a grid or quadrature cannot resolve the requested family.
struct ResolutionError : std::invalid_argument {
    double required = 0.0;
    ResolutionError(const std::string& msg, double req)
        : std::invalid_argument(msg), required(req) {}
};

/// 0/1 indicator sample of the family; the grid must resolve the smallest
/// feature (h <= feature/4).
inline SampledField generate(const ExtremalFamily& family, const GridSpec& grid) {
    const double need = family.feature_width() / 4.0;
    if (grid.spacing > need * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "generate: grid spacing " << grid.spacing
           << " cannot resolve the family; required h <= " << need;
        throw ResolutionError(os.str(), need);
    }
    return sample([&](Vec2 p) { return family.indicator(p); }, grid, InterpMode::nearest);
}

/// Least-squares slope of log(norm) against log(scale).
struct SlopeFit {
    std::vector<double> scales;
    std::vector<double> norms;
    double slope = 0.0;
    double residual = 0.0; // max |fit - data| in log coordinates

    static SlopeFit fit(std::vector<double> scales, std::vector<double> norms) {
        if (scales.size() != norms.size() || scales.size() < 3)
            throw std::invalid_argument("SlopeFit: need at least 3 (scale, norm) pairs");
        for (std::size_t i = 0; i < scales.size(); ++i) {
            if (!(scales[i] > 0.0) || !(norms[i] > 0.0))
                throw std::invalid_argument("SlopeFit: scales and norms must be positive");
            if (i > 0 && !(scales[i] < scales[i - 1]))
                throw std::invalid_argument("SlopeFit: scales must be strictly decreasing");
        }
        const std::size_t n = scales.size();
        double sx = 0.0, sy = 0.0;
        std::vector<double> lx(n), ly(n);
        for (std::size_t i = 0; i < n; ++i) {
            lx[i] = std::log(scales[i]);
            ly[i] = std::log(norms[i]);
            sx += lx[i];
            sy += ly[i];
        }
        const double mx = sx / n, my = sy / n;
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num += (lx[i] - mx) * (ly[i] - my);
            den += (lx[i] - mx) * (lx[i] - mx);
        }
        SlopeFit f;
        f.slope = num / den;
        const double intercept = my - f.slope * mx;
        for (std::size_t i = 0; i < n; ++i)
            f.residual = std::max(f.residual, std::abs(f.slope * lx[i] + intercept - ly[i]));
        f.scales = std::move(scales);
        f.norms = std::move(norms);
        return f;
    }
};

enum class SweepExample {
    ball_annulus,
    rectangles_degenerate,
    rectangles_nondegenerate,
    large_ball,
};

inline const char* to_string(SweepExample e) {
    switch (e) {
        case SweepExample::ball_annulus: return "ball_annulus";
        case SweepExample::rectangles_degenerate: return "rectangles_degenerate";
        case SweepExample::rectangles_nondegenerate: return "rectangles_nondegenerate";
        case SweepExample::large_ball: return "large_ball";
    }
    return "?";
}

/// Resolution policy for the sweeps. Presets follow the experiment rules
/// h <= feature/4 and M >= 64/feature; scaling either below 1 triggers a
/// resolution rejection instead of silently degrading the run.
struct SweepSettings {
    double h_scale = 1.0;
    double m_scale = 1.0;
    int m_floor = 256;
    int m_cap = 1 << 17;
};

struct ScaleData {
    double scale = 0.0;
    double norm_b = 0.0;
    double norm_f = 0.0; // filled when input exponents are requested
    double norm_g = 0.0;
    int quadrature_nodes = 0;
    double grid_spacing = 0.0;
};

struct SweepResult {
    SweepExample example = SweepExample::ball_annulus;
    double theta = 0.0;
    double r = 1.0;
    double expected_slope = 0.0;
    std::vector<ScaleData> data;
    SlopeFit fit;
};

namespace detail {

struct ExamplePair {
    ExtremalFamily f;
    ExtremalFamily g;
    double domain_half_width;
};

inline ExamplePair example_pair(SweepExample example, double theta, double scale) {
    switch (example) {
        case SweepExample::ball_annulus: {
            // Annulus radius 2 sin(theta/2), width 4*delta: the safety factor
            // keeps the second constraint slack for every theta.
            const double radius = 2.0 * std::sin(theta / 2.0);
            return {ExtremalFamily::small_ball(scale),
                    ExtremalFamily::annulus(radius, 4.0 * scale), 3.5};
        }
        case SweepExample::rectangles_degenerate:
        case SweepExample::rectangles_nondegenerate:
            return {ExtremalFamily::tangent_rectangle(scale, M_PI / 2.0),
                    ExtremalFamily::tangent_rectangle(scale, M_PI / 2.0 + theta), 2.0};
        case SweepExample::large_ball:
            return {ExtremalFamily::large_ball(scale), ExtremalFamily::large_ball(scale),
                    scale + 1.5};
    }
    throw std::logic_error("example_pair: unreachable");
}

// Grid with spacing <= target that divides [-L, L] exactly.
inline GridSpec grid_for(double half_width, double target_h) {
    const double intervals = std::ceil(2.0 * half_width / target_h - 1e-9);
    return GridSpec::make(half_width, 2.0 * half_width / intervals);
}

// Smallest length scale the experiment must resolve: the families' features
// capped by the unit circle the kernel lives on.
inline double effective_feature(const ExamplePair& pair) {
    return std::min({pair.f.feature_width(), pair.g.feature_width(), 1.0});
}

inline int quadrature_size(const ExamplePair& pair, const SweepSettings& s) {
    const double feature = effective_feature(pair);
    const double m = s.m_scale * std::max(64.0 / feature, double(s.m_floor));
    const double required = 64.0 / feature;
    if (m + 1e-9 < required) {
        std::ostringstream os;
        os << "sweep: quadrature size " << m << " cannot resolve feature width " << feature
           << "; required M >= " << required;
        throw ResolutionError(os.str(), required);
    }
    if (m > s.m_cap) {
        std::ostringstream os;
        os << "sweep: required quadrature size " << m << " exceeds the cap " << s.m_cap;
        throw ResolutionError(os.str(), m);
    }
    return static_cast<int>(std::lround(m));
}

inline SupportHint hint_for(const ExamplePair& pair, double h) {
    const double slack = 2.0 * h;
    return {pair.f.bounding_box().inflated(slack), pair.g.bounding_box().inflated(slack)};
}

} // namespace detail

inline double expected_sweep_slope(SweepExample example, double r) {
    switch (example) {
        case SweepExample::ball_annulus: return 1.0 + 1.0 / r;
        case SweepExample::rectangles_degenerate: return 1.0 + 3.0 / r;
        case SweepExample::rectangles_nondegenerate: return 1.0 + 4.0 / r;
        case SweepExample::large_ball: return 2.0 / r;
    }
    return 0.0;
}

inline void validate_sweep_args(SweepExample example, double theta,
                                const std::vector<double>& scales) {
    if (scales.size() < 3)
        throw std::invalid_argument("sweep: need at least 3 scales");
    for (std::size_t i = 1; i < scales.size(); ++i) {
        const double ratio = scales[i] / scales[i - 1];
        if (std::abs(ratio - 0.5) > 1e-9)
            throw std::invalid_argument("sweep: scales must be geometric with ratio 1/2");
    }
    const Rotation rot(theta);
    if (rot.is_identity())
        throw std::invalid_argument("sweep: theta = 0 is excluded");
    const bool is_pi = std::abs(theta - M_PI) <= 1e-12;
    if (example == SweepExample::rectangles_degenerate && !is_pi)
        throw std::invalid_argument("sweep: rectangles_degenerate requires theta = pi");
    if (example == SweepExample::rectangles_nondegenerate && is_pi)
        throw std::invalid_argument("sweep: rectangles_nondegenerate requires theta != pi");
}

/// Runs one scaling experiment: builds the example's extremal pair (f,g) at
/// every scale, measures ||B_theta(f,g)||_r over the grid, and fits the
/// log-log slope.
/// Optional exponents (p,q) additionally record ||f||_p, ||g||_q per scale.
inline SweepResult scaling_sweep(SweepExample example, double theta, double r,
                                 const std::vector<double>& scales,
                                 const SweepSettings& settings = {},
                                 std::optional<double> p = std::nullopt,
                                 std::optional<double> q = std::nullopt) {
    validate_sweep_args(example, theta, scales);
    SweepResult result;
    result.example = example;
    result.theta = theta;
    result.r = r;
    result.expected_slope = expected_sweep_slope(example, r);
    const Rotation rot(theta);
    for (double scale : scales) {
        const auto pair = detail::example_pair(example, theta, scale);
        const double feature = detail::effective_feature(pair);
        const double target_h = settings.h_scale * feature / 4.0;
        if (target_h > feature / 4.0 * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "sweep: spacing " << target_h << " cannot resolve feature width " << feature
               << "; required h <= " << feature / 4.0;
            throw ResolutionError(os.str(), feature / 4.0);
        }
        const GridSpec grid = detail::grid_for(pair.domain_half_width, target_h);
        const int M = detail::quadrature_size(pair, settings);
        const auto quad = CircleQuadrature::make(M);
        const auto f = generate(pair.f, grid);
        const auto g = generate(pair.g, grid);
        const auto hint = detail::hint_for(pair, grid.spacing);
        ScaleData row;
        row.scale = scale;
        row.norm_b = bilinear_norm(f, g, rot, grid, quad, r, hint);
        if (p) row.norm_f = lp_norm(f, *p);
        if (q) row.norm_g = lp_norm(g, *q);
        row.quadrature_nodes = M;
        row.grid_spacing = grid.spacing;
        result.data.push_back(row);
    }
    std::vector<double> ss, ns;
    for (const auto& row : result.data) {
        ss.push_back(row.scale);
        ns.push_back(row.norm_b);
    }
    result.fit = SlopeFit::fit(ss, ns);
    return result;
}

/// The constraint each extremal example witnesses, as an exact half-space in
/// (1/p, 1/q, 1/r).
inline HalfSpace constraint_for(SweepExample example) {
    auto hs = [](long long a1, long long a2, long long a3, long long b, const char* label) {
        return HalfSpace{{Rational(a1), Rational(a2), Rational(a3)}, Rational(b), label};
    };
    switch (example) {
        case SweepExample::ball_annulus:
            return hs(2, 1, -1, 1, "small ball and annulus: 2/p + 1/q <= 1 + 1/r");
        case SweepExample::rectangles_degenerate:
            return hs(3, 3, -3, 1, "tangent rectangles (theta = pi): 3/p + 3/q <= 1 + 3/r");
        case SweepExample::rectangles_nondegenerate:
            return hs(3, 3, -4, 1, "tangent rectangles (theta != pi): 3/p + 3/q <= 1 + 4/r");
        case SweepExample::large_ball:
            return hs(-1, -1, 1, 0, "large ball: 1/r <= 1/p + 1/q");
    }
    throw std::logic_error("constraint_for: unreachable");
}

/// Verdict of one constraint check: the exact algebraic side at the triple and
/// the measured ratio slope of ||B||_r / (||f||_p ||g||_q) as the scale shrinks.
struct ConstraintReport {
    SweepExample example = SweepExample::ball_annulus;
    HalfSpace constraint;
    RationalTriple triple; // (1/p, 1/q, 1/r)
    bool algebraic_satisfied = true;
    bool algebraic_equality = false;
    double ratio_slope = 0.0;
    bool measured_bounded = true; // ratio slope above the divergence threshold
    bool match = true;
    double divergence_threshold = -0.1;
    SweepResult sweep;
};

/// Plugs an exact exponent triple into the example's constraint and compares
/// the verdict with the measured behaviour of the norm ratio.
inline ConstraintReport check_constraint(SweepExample example, double theta,
                                         const RationalTriple& inv_pqr,
                                         const std::vector<double>& scales,
                                         const SweepSettings& settings = {}) {
    for (const auto& coord : inv_pqr)
        if (coord < Rational(0) || Rational(1) < coord)
            throw std::invalid_argument("check_constraint: triple must lie in [0,1]^3");
    ConstraintReport rep;
    rep.example = example;
    rep.constraint = constraint_for(example);
    rep.triple = inv_pqr;
    const Rational lhs = rep.constraint.lhs(inv_pqr);
    rep.algebraic_satisfied = lhs <= rep.constraint.b;
    rep.algebraic_equality = lhs == rep.constraint.b;

    auto exponent = [](const Rational& u) {
        return u.is_zero() ? infinite_exponent : 1.0 / u.to_double();
    };
    const double p = exponent(inv_pqr[0]);
    const double q = exponent(inv_pqr[1]);
    const double r = exponent(inv_pqr[2]);
    rep.sweep = scaling_sweep(example, theta, r, scales, settings, p, q);

    std::vector<double> ss, ratios;
    for (const auto& row : rep.sweep.data) {
        ss.push_back(row.scale);
        ratios.push_back(row.norm_b / (row.norm_f * row.norm_g));
    }
    rep.ratio_slope = SlopeFit::fit(ss, ratios).slope;
    rep.measured_bounded = rep.ratio_slope > rep.divergence_threshold;
    rep.match = (rep.algebraic_satisfied == rep.measured_bounded);
    return rep;
}

/// Restricted-type functional ||B_theta(chi_E, chi_F)||_2 / (|E|^(1/2) |F|^(1/2)).
inline double restricted_type_ratio(const SampledField& e_field, const SampledField& f_field,
                                    double theta, const CircleQuadrature& quad,
                                    const std::optional<SupportHint>& hint = std::nullopt) {
    if (!(theta > 0.0 && theta < M_PI))
        throw std::invalid_argument("restricted_type_ratio: theta must lie in (0, pi)");
    const double me = measure(e_field); // also validates the indicator shape
    const double mf = measure(f_field);
    if (me == 0.0 || mf == 0.0)
        throw std::invalid_argument("restricted_type_ratio: zero-measure input set");
    const double b2 =
        bilinear_norm(e_field, f_field, Rotation(theta), e_field.grid, quad, 2.0, hint);
    return b2 / std::sqrt(me * mf);
}

struct ThetaSweepRow {
    double theta = 0.0;
    double ratio = 0.0;
    double bounded_proxy = 0.0; // ratio * min(theta, pi - theta)
};

/// Restricted-type theta sweep on the ball/annulus pair at fixed delta.
/// The annulus width here is delta itself (width_factor = 1): the 4*delta
/// safety factor used by the norm sweeps keeps the annulus constraint slack at
/// every theta, which flattens ||B||_2 in theta and leaves the proxy
/// ratio * min(theta, pi - theta) with the full 1/sqrt(sin(theta/2)) spread of
/// |F| (factor ~4.7 over the standard sweep). The narrow annulus retains the
/// near-degenerate clipping that the C_theta proxy is meant to observe.
inline std::vector<ThetaSweepRow> restricted_type_theta_sweep(
    double delta, const std::vector<double>& thetas, const SweepSettings& settings = {},
    double width_factor = 1.0) {
    std::vector<ThetaSweepRow> rows;
    for (double theta : thetas) {
        auto pair = detail::example_pair(SweepExample::ball_annulus, theta, delta);
        pair.g.annulus_width = width_factor * delta;
        pair.g.scale = pair.g.annulus_width;
        const double feature = detail::effective_feature(pair);
        const GridSpec grid = detail::grid_for(pair.domain_half_width,
                                               settings.h_scale * feature / 4.0);
        const int M = detail::quadrature_size(pair, settings);
        const auto quad = CircleQuadrature::make(M);
        const auto e_field = generate(pair.f, grid);
        const auto f_field = generate(pair.g, grid);
        const auto hint = detail::hint_for(pair, grid.spacing);
        ThetaSweepRow row;
        row.theta = theta;
        row.ratio = restricted_type_ratio(e_field, f_field, theta, quad, hint);
        row.bounded_proxy = row.ratio * std::min(theta, M_PI - theta);
        rows.push_back(row);
    }
    return rows;
}

} // namespace bgrt
