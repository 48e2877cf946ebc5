#include <doctest.h>

#include <random>

#include "bgrt/linalg.hpp"
#include "bgrt/transforms.hpp"

using namespace bgrt;

namespace {

const auto gauss1 = make_analytic([](Vec2 p) { return std::exp(-norm2(p)); });
const auto gauss2 =
    make_analytic([](Vec2 p) { return std::exp(-norm2(p - Vec2{0.3, 0.1}) / 2.0); });
const auto gauss3 =
    make_analytic([](Vec2 p) { return std::exp(-norm2(p + Vec2{0.2, -0.4}) / 1.5); });
const auto one = make_analytic([](Vec2) { return 1.0; });

SampledField random_field(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    SampledField f(g, InterpMode::bilinear);
    for (auto& v : f.values) v = dist(rng);
    return f;
}

} // namespace

TEST_CASE("quadrature: total mass 2*pi, unit nodes") {
    for (int M : {64, 256, 1024}) {
        const auto quad = CircleQuadrature::make(M);
        CHECK(std::abs(quad.weight_sum() - two_pi) <= 1e-12);
        for (const Vec2& y : quad.nodes) CHECK(std::abs(norm(y) - 1.0) <= 1e-12);
    }
    CHECK_THROWS_AS(CircleQuadrature::make(0), std::invalid_argument);
}

TEST_CASE("rotation basics") {
    const Rotation r(1.0);
    const Vec2 e = r.apply({1.0, 0.0});
    CHECK(e.x == doctest::Approx(std::cos(1.0)).epsilon(1e-15));
    CHECK(e.y == doctest::Approx(std::sin(1.0)).epsilon(1e-15));
    CHECK(std::abs(r.matrix().det() - 1.0) <= 1e-15);
    CHECK(Rotation(0.0).is_identity());
    CHECK(Rotation(two_pi).is_identity());
    CHECK_FALSE(Rotation(M_PI).is_identity());
}

TEST_CASE("spherical average: constants, disjoint supports, self-convergence") {
    const auto quad = CircleQuadrature::make(256);
    CHECK(std::abs(spherical_average(one, {0.4, -0.8}, quad) - two_pi) <= 1e-12);

    const auto smallball = make_analytic([](Vec2 p) { return norm2(p) <= 0.25 ? 1.0 : 0.0; });
    CHECK(spherical_average(smallball, {0.0, 0.0}, quad) == 0.0);

    const auto ref = CircleQuadrature::make(4096);
    for (Vec2 x : {Vec2{0.0, 0.0}, Vec2{0.7, -0.3}}) {
        const double coarse = spherical_average(gauss1, x, quad);
        const double fine = spherical_average(gauss1, x, ref);
        CHECK(std::abs(coarse - fine) <= 1e-10);
    }
}

TEST_CASE("bilinear_theta: constants, theta -> 0 degeneration") {
    const auto quad = CircleQuadrature::make(512);
    for (double th : {0.3, M_PI / 3.0, M_PI, 5.0}) {
        CHECK(std::abs(bilinear_theta(one, one, Rotation(th), {0.2, 0.1}, quad) - two_pi) <=
              1e-12);
    }
    // B_0(f,g) = A(f*g) on the same quadrature nodes.
    const auto prod = make_analytic(
        [](Vec2 p) { return std::exp(-norm2(p)) * std::exp(-norm2(p - Vec2{0.3, 0.1}) / 2.0); });
    for (Vec2 x : {Vec2{0.0, 0.0}, Vec2{-0.5, 0.9}, Vec2{1.4, 0.4}}) {
        const double b0 = bilinear_theta(gauss1, gauss2, Rotation(0.0), x, quad);
        const double avg = spherical_average(prod, x, quad);
        CHECK(std::abs(b0 - avg) <= 1e-12);
    }
}

TEST_CASE("ball/annulus pair: B_pi is of size delta on the unit circle") {
    // f = indicator of B_delta, g = annulus of radius 2 sin(theta/2) = 2 and
    // width 4*delta; at x on the unit circle the value stays within a fixed
    // multiple band of delta across the delta-halving ladder.
    std::vector<double> ratios;
    for (double delta : {0.1, 0.05, 0.025}) {
        const int M = static_cast<int>(std::lround(64.0 / delta));
        const auto quad = CircleQuadrature::make(M);
        const double h = delta / 4.0;
        const GridSpec grid = GridSpec::make(3.5, 3.5 / std::round(3.5 / h));
        const auto f = sample([&](Vec2 p) { return norm2(p) <= delta * delta ? 1.0 : 0.0; },
                              grid, InterpMode::nearest);
        const auto g = sample(
            [&](Vec2 p) {
                const double r = norm(p);
                return std::abs(r - 2.0) <= 2.0 * delta ? 1.0 : 0.0;
            },
            grid, InterpMode::nearest);
        const double value = bilinear_theta(f, g, Rotation(M_PI), {1.0, 0.0}, quad);
        ratios.push_back(value / delta);
    }
    for (double r : ratios) {
        CHECK(r >= 1.0);
        CHECK(r <= 3.0);
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    CHECK(*hi / *lo <= 1.5);
}

TEST_CASE("bilinear_field: constants and the large-ball plateau") {
    const auto quad = CircleQuadrature::make(128);
    const GridSpec grid = GridSpec::make(2.0, 0.25);
    const auto field = bilinear_field(one, one, Rotation(1.0), grid, quad);
    for (double v : field.values) CHECK(std::abs(v - two_pi) <= 1e-12);

    const double R = 2.0;
    const GridSpec big = GridSpec::make(3.5, 0.125);
    const auto ball = make_analytic([&](Vec2 p) { return norm2(p) <= R * R ? 1.0 : 0.0; });
    const auto bf = bilinear_field(ball, ball, Rotation(M_PI / 2.0), big, quad);
    auto plateau = sample([&](Vec2 p) { return bf.eval(p) >= 1.0 ? 1.0 : 0.0; }, big,
                          InterpMode::nearest);
    const double area = measure(plateau);
    CHECK(area >= M_PI * (R - 1.0) * (R - 1.0)); // contains B_{R-1}
    CHECK(area <= M_PI * (R + 1.0) * (R + 1.0));
}

TEST_CASE("slot swap under theta -> -theta for node-aligned angles") {
    const int M = 512;
    const auto quad = CircleQuadrature::make(M);
    const double theta = M_PI / 2.0; // 128 quadrature steps, node-aligned
    const GridSpec grid = GridSpec::make(3.0, 0.05);
    const auto f = sample([](Vec2 p) { return std::exp(-norm2(p)); }, grid, InterpMode::bilinear);
    const auto g = sample([](Vec2 p) { return std::exp(-2.0 * norm2(p)); }, grid,
                          InterpMode::bilinear);
    for (Vec2 x : {Vec2{0.0, 0.0}, Vec2{0.6, -0.2}, Vec2{-1.0, 0.4}}) {
        const double ab = bilinear_theta(f, g, Rotation(theta), x, quad);
        const double ba = bilinear_theta(g, f, Rotation(two_pi - theta), x, quad);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
    }
}

TEST_CASE("reflection symmetry about the horizontal axis") {
    const auto quad = CircleQuadrature::make(256);
    const double theta = 1.1;
    const auto fr = make_analytic([](Vec2 p) { return std::exp(-norm2(p - Vec2{0.3, 0.1}) / 2.0); });
    const auto f_ref = make_analytic(
        [](Vec2 p) { return std::exp(-norm2(Vec2{p.x, -p.y} - Vec2{0.3, 0.1}) / 2.0); });
    const auto gr = make_analytic([](Vec2 p) { return std::exp(-norm2(p + Vec2{0.2, -0.4}) / 1.5); });
    const auto g_ref = make_analytic(
        [](Vec2 p) { return std::exp(-norm2(Vec2{p.x, -p.y} + Vec2{0.2, -0.4}) / 1.5); });
    for (Vec2 x : {Vec2{0.2, 0.5}, Vec2{-0.7, -0.1}}) {
        const double lhs = bilinear_theta(fr, gr, Rotation(theta), x, quad);
        const double rhs =
            bilinear_theta(f_ref, g_ref, Rotation(two_pi - theta), Vec2{x.x, -x.y}, quad);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("bilinearity and monotonicity") {
    const GridSpec grid = GridSpec::make(2.0, 0.25);
    const auto quad = CircleQuadrature::make(64);
    const auto f1 = random_field(grid, 1);
    const auto f2 = random_field(grid, 2);
    const auto g = random_field(grid, 3);
    SampledField combo(grid, InterpMode::bilinear);
    for (std::size_t i = 0; i < combo.values.size(); ++i)
        combo.values[i] = 2.0 * f1.values[i] - 0.5 * f2.values[i];
    const Rotation th(0.8);
    for (Vec2 x : {Vec2{0.0, 0.0}, Vec2{0.4, -0.9}}) {
        const double lhs = bilinear_theta(combo, g, th, x, quad);
        const double rhs = 2.0 * bilinear_theta(f1, g, th, x, quad) -
                           0.5 * bilinear_theta(f2, g, th, x, quad);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        // second slot as well
        const double lhs2 = bilinear_theta(g, combo, th, x, quad);
        const double rhs2 = 2.0 * bilinear_theta(g, f1, th, x, quad) -
                            0.5 * bilinear_theta(g, f2, th, x, quad);
        CHECK(lhs2 == doctest::Approx(rhs2).epsilon(1e-12));
    }

    SUBCASE("pointwise domination is preserved") {
        auto fbig = f1;
        for (auto& v : fbig.values) v = std::abs(v) + 0.3;
        auto fsmall = fbig;
        for (auto& v : fsmall.values) v -= 0.25;
        auto gpos = g;
        for (auto& v : gpos.values) v = std::abs(v);
        for (Vec2 x : {Vec2{0.1, 0.1}, Vec2{-0.6, 0.2}}) {
            CHECK(bilinear_theta(fsmall, gpos, th, x, quad) <=
                  bilinear_theta(fbig, gpos, th, x, quad) + 1e-12);
        }
    }
}

TEST_CASE("trivial pointwise bounds") {
    const GridSpec grid = GridSpec::make(2.0, 0.25);
    const auto quad = CircleQuadrature::make(128);
    const Rotation th(2.0);
    for (std::uint64_t seed : {10ULL, 11ULL, 12ULL}) {
        const auto f = random_field(grid, seed);
        const auto g = random_field(grid, seed + 50);
        auto absf = f;
        for (auto& v : absf.values) v = std::abs(v);
        const double fi = lp_norm(f, infinite_exponent);
        const double gi = lp_norm(g, infinite_exponent);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> c(-1.5, 1.5);
        for (int k = 0; k < 20; ++k) {
            const Vec2 x{c(rng), c(rng)};
            const double b = bilinear_theta(f, g, th, x, quad);
            CHECK(std::abs(b) <= two_pi * fi * gi + 1e-12);
            CHECK(std::abs(b) <= spherical_average(absf, x, quad) * gi + 1e-12);
        }
    }
}

TEST_CASE("rotated average: constants, radius identity, theta = pi rescaling") {
    const auto quad = CircleQuadrature::make(512);
    CHECK(std::abs(rotated_average(one, Rotation(2.2), {0.3, 0.3}, quad) - two_pi) <= 1e-12);
    CHECK_THROWS_AS(rotated_average(one, Rotation(0.0), {0, 0}, quad), std::invalid_argument);
    CHECK_THROWS_AS(rotated_average(one, Rotation(two_pi), {0, 0}, quad), std::invalid_argument);

    for (double th : {0.4, M_PI / 3.0, M_PI, 4.4}) {
        const Rotation rot(th);
        double worst = 0.0;
        for (const Vec2& y : quad.nodes)
            worst = std::max(worst, std::abs(norm2(y - rot.apply(y)) - 2.0 * (1.0 - std::cos(th))));
        CHECK(worst <= 1e-12);
    }

    // theta = pi: average over the circle of radius 2, cross-checked against the
    // circular average of the dilated field.
    const auto dilated = make_analytic([](Vec2 u) { return std::exp(-norm2(-2.0 * u)); });
    for (Vec2 x : {Vec2{0.0, 0.0}, Vec2{0.5, -0.1}}) {
        const double lhs = rotated_average(gauss1, Rotation(M_PI), x, quad);
        const double rhs = spherical_average(dilated, {-x.x / 2.0, -x.y / 2.0}, quad);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("change-of-variables Jacobians behind the restricted-type bound") {
    // The substitutions u = x - y(a), v = x - Ty(a') and u = x - y(a),
    // v = x - y(a') have Jacobians sin(a - a' - theta) and sin(a - a').
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ang(0.0, two_pi);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = ang(rng), ap = ang(rng), theta = ang(rng);
        auto jac = [&](double shift) {
            SmallMatrix j(4, 4);
            j(0, 0) = 1; j(0, 2) = std::sin(a);
            j(1, 1) = 1; j(1, 2) = -std::cos(a);
            j(2, 0) = 1; j(2, 3) = std::sin(ap + shift);
            j(3, 1) = 1; j(3, 3) = -std::cos(ap + shift);
            return det(j);
        };
        CHECK(jac(theta) == doctest::Approx(std::sin(a - ap - theta)).epsilon(1e-12));
        CHECK(jac(0.0) == doctest::Approx(std::sin(a - ap)).epsilon(1e-12));
    }
}

TEST_CASE("L1 pairing identity") {
    const auto quad = CircleQuadrature::make(512);
    const GridSpec grid = GridSpec::make(3.0, 0.01);
    const auto box = sample(
        [](Vec2 p) { return (std::abs(p.x) <= 1.0 && std::abs(p.y) <= 1.0) ? 1.0 : 0.0; }, grid,
        InterpMode::nearest);
    const auto check = l1_pairing_check(box, box, Rotation(M_PI / 2.0), grid, quad);
    CHECK(check.lhs > 0.0);
    CHECK(check.relative_gap() <= 1e-2);

    SUBCASE("zero input gives the zero pair") {
        const GridSpec small = GridSpec::make(2.0, 0.25);
        const auto z = sample([](Vec2) { return 0.0; }, small, InterpMode::nearest);
        const auto o = sample([](Vec2) { return 1.0; }, small, InterpMode::nearest);
        const auto res = l1_pairing_check(z, o, Rotation(1.0), small, CircleQuadrature::make(64));
        CHECK(res.lhs == 0.0);
        CHECK(res.rhs == 0.0);
    }

    SUBCASE("negative inputs are rejected") {
        const GridSpec small = GridSpec::make(2.0, 0.25);
        auto bad = sample([](Vec2) { return 1.0; }, small, InterpMode::nearest);
        bad.values[0] = -0.1;
        CHECK_THROWS_AS(l1_pairing_check(bad, bad, Rotation(1.0), small, quad),
                        std::invalid_argument);
    }

    SUBCASE("gap shrinks under refinement for Gaussians") {
        auto run = [&](double h, int M) {
            const GridSpec g = GridSpec::make(3.0, h);
            const auto f1 = sample([](Vec2 p) { return std::exp(-norm2(p)); }, g,
                                   InterpMode::bilinear);
            const auto f2 = sample([](Vec2 p) { return std::exp(-2.0 * norm2(p)); }, g,
                                   InterpMode::bilinear);
            return l1_pairing_check(f1, f2, Rotation(M_PI / 2.0), g, CircleQuadrature::make(M))
                .relative_gap();
        };
        const double coarse = run(0.04, 128);
        const double fine = run(0.02, 256);
        CHECK(fine < coarse);
    }
}

TEST_CASE("adjoint identities for the dual operators") {
    const auto quad = CircleQuadrature::make(512);
    CHECK(std::abs(dual_b1(one, one, Rotation(1.3), {0.1, 0.2}, quad) - two_pi) <= 1e-12);
    CHECK(std::abs(dual_b2(one, one, Rotation(1.3), {0.1, 0.2}, quad) - two_pi) <= 1e-12);

    const Rotation th(M_PI / 3.0);
    const GridSpec grid = GridSpec::make(3.0, 0.02);
    // <B(f,g), h> = <f, B1(h,g)> = <g, B2(f,h)> via the grid pairing.
    const int n = grid.axis_nodes;
    double pair_b = 0.0, pair_b1 = 0.0, pair_b2 = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        const double wy = grid.axis_weight(iy);
        for (int ix = 0; ix < n; ++ix) {
            const double w = wy * grid.axis_weight(ix);
            const Vec2 x = grid.node(ix, iy);
            pair_b += w * bilinear_theta(gauss1, gauss2, th, x, quad) * gauss3.eval(x);
            pair_b1 += w * gauss1.eval(x) * dual_b1(gauss3, gauss2, th, x, quad);
            pair_b2 += w * gauss2.eval(x) * dual_b2(gauss1, gauss3, th, x, quad);
        }
    }
    const double h2 = grid.spacing * grid.spacing;
    pair_b *= h2;
    pair_b1 *= h2;
    pair_b2 *= h2;
    CHECK(std::abs(pair_b - pair_b1) <= 1e-3 * std::abs(pair_b));
    CHECK(std::abs(pair_b - pair_b2) <= 1e-3 * std::abs(pair_b));
}

TEST_CASE("worker count does not change results (ordered row reduction)") {
    const GridSpec grid = GridSpec::make(2.0, 0.1);
    const auto quad = CircleQuadrature::make(128);
    const auto f = sample([](Vec2 p) { return std::exp(-norm2(p)); }, grid, InterpMode::bilinear);
    const auto g = sample([](Vec2 p) { return std::exp(-2.0 * norm2(p)); }, grid,
                          InterpMode::bilinear);
    const Rotation th(1.3);
    setenv("BGRT_THREADS", "1", 1);
    const double serial = bilinear_norm(f, g, th, grid, quad, 2.0);
    const auto serial_field = bilinear_field(f, g, th, grid, quad);
    setenv("BGRT_THREADS", "3", 1);
    const double threaded = bilinear_norm(f, g, th, grid, quad, 2.0);
    const auto threaded_field = bilinear_field(f, g, th, grid, quad);
    unsetenv("BGRT_THREADS");
    CHECK(serial == threaded);
    CHECK(serial_field.values == threaded_field.values);
}

TEST_CASE("support hints never change values, only skip exact zeros") {
    const GridSpec grid = GridSpec::make(3.5, 0.0625);
    const auto quad = CircleQuadrature::make(256);
    const double delta = 0.25;
    const auto f = sample([&](Vec2 p) { return norm2(p) <= delta * delta ? 1.0 : 0.0; }, grid,
                          InterpMode::nearest);
    const auto g = sample(
        [&](Vec2 p) { return std::abs(norm(p) - std::sqrt(2.0)) <= 2.0 * delta ? 1.0 : 0.0; },
        grid, InterpMode::nearest);
    const Rotation th(M_PI / 2.0);
    const double slack = 2.0 * grid.spacing;
    const SupportHint hint{Box{-delta, delta, -delta, delta}.inflated(slack),
                           Box{-std::sqrt(2.0) - 2 * delta, std::sqrt(2.0) + 2 * delta,
                               -std::sqrt(2.0) - 2 * delta, std::sqrt(2.0) + 2 * delta}
                               .inflated(slack)};
    const auto full = bilinear_field(f, g, th, grid, quad, InterpMode::nearest);
    const auto pruned = bilinear_field(f, g, th, grid, quad, InterpMode::nearest, hint);
    REQUIRE(full.values.size() == pruned.values.size());
    for (std::size_t i = 0; i < full.values.size(); ++i)
        CHECK(full.values[i] == pruned.values[i]);
    CHECK(bilinear_norm(f, g, th, grid, quad, 1.0, hint) == lp_norm(full, 1.0));
    CHECK(bilinear_norm(f, g, th, grid, quad, 2.0, hint) == lp_norm(full, 2.0));
}
