#include <doctest.h>

#include <cstdio>
#include <random>

#include "bgrt/field_io.hpp"
#include "bgrt/grid.hpp"

using namespace bgrt;

namespace {

SampledField random_field(const GridSpec& g, InterpMode mode, std::uint64_t seed,
                          double lo = -2.0, double hi = 2.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    SampledField f(g, mode);
    for (auto& v : f.values) v = dist(rng);
    return f;
}

} // namespace

TEST_CASE("GridSpec validates and lays out nodes exactly") {
    const GridSpec g = GridSpec::make(1.0, 0.5);
    CHECK(g.axis_nodes == 5);
    CHECK(g.coord(0) == -1.0);
    CHECK(g.coord(4) == 1.0);
    CHECK_THROWS_AS(GridSpec::make(-1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec::make(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec::make(1.0, 0.3), std::invalid_argument); // 2L/h not integral
}

TEST_CASE("sample: constants, indicators, odd symmetry, rejection") {
    const GridSpec g = GridSpec::make(1.0, 0.5);
    const auto ones = sample([](Vec2) { return 1.0; }, g, InterpMode::nearest);
    CHECK(ones.values.size() == 25);
    for (double v : ones.values) CHECK(v == 1.0);

    const GridSpec fine = GridSpec::make(1.0, 0.01);
    const auto disk = sample([](Vec2 p) { return norm2(p) <= 0.25 * 0.25 ? 1.0 : 0.0; },
                             fine, InterpMode::nearest);
    const double area = M_PI * 0.25 * 0.25;
    CHECK(std::abs(measure(disk) - area) <= 2.0 * (2.0 * M_PI * 0.25) * fine.spacing);

    const auto odd = sample([](Vec2 p) { return p.x; }, g, InterpMode::bilinear);
    double total = 0.0;
    for (double v : odd.values) total += v;
    CHECK(total == 0.0);

    CHECK_THROWS_WITH_AS(
        sample([](Vec2 p) { return p.x == 0.0 && p.y == 0.0 ? std::nan("") : 1.0; }, g,
               InterpMode::nearest),
        doctest::Contains("non-finite"), std::invalid_argument);
}

TEST_CASE("eval_at: node exactness, affine reproduction, zero extension") {
    const GridSpec g = GridSpec::make(1.0, 0.5);
    const auto c3 = sample([](Vec2) { return 3.0; }, g, InterpMode::bilinear);
    CHECK(c3.eval({0.2, -0.7}) == 3.0);

    const auto affine = sample([](Vec2 p) { return 2.0 * p.x + p.y - 1.0; }, g,
                               InterpMode::bilinear);
    CHECK(affine.eval({0.3, 0.7}) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(affine.eval({1.2, 0.0}) == 0.0);
    CHECK(affine.eval({0.0, -1.0001}) == 0.0);

    for (InterpMode mode : {InterpMode::nearest, InterpMode::bilinear}) {
        const auto f = random_field(g, mode, 7);
        for (int iy = 0; iy < g.axis_nodes; ++iy)
            for (int ix = 0; ix < g.axis_nodes; ++ix)
                CHECK(f.eval(g.node(ix, iy)) == f.at(ix, iy));
    }

    SUBCASE("bilinear reproduces affine functions at random interior points") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> dist(-0.999, 0.999);
        for (int k = 0; k < 200; ++k) {
            const Vec2 p{dist(rng), dist(rng)};
            const double want = 2.0 * p.x + p.y - 1.0;
            CHECK(affine.eval(p) == doctest::Approx(want).epsilon(1e-13));
        }
    }
}

TEST_CASE("lp_norm: exact constants, disk area, scaling, rejection") {
    const GridSpec g = GridSpec::make(1.0, 0.25);
    const auto ones = sample([](Vec2) { return 1.0; }, g, InterpMode::nearest);
    CHECK(lp_norm(ones, 2.0) == 2.0); // area^(1/2) of [-1,1]^2, exact
    CHECK(lp_norm(ones, infinite_exponent) == 1.0);

    const auto cfield = sample([](Vec2) { return -2.5; }, g, InterpMode::nearest);
    CHECK(lp_norm(cfield, infinite_exponent) == 2.5);

    const GridSpec fine = GridSpec::make(1.5, 0.005);
    const auto disk = sample([](Vec2 p) { return norm2(p) <= 1.0 ? 1.0 : 0.0; }, fine,
                             InterpMode::nearest);
    CHECK(std::abs(lp_norm(disk, 1.0) - M_PI) <= 0.05);

    CHECK_THROWS_AS(lp_norm(ones, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(lp_norm(ones, -1.0), std::invalid_argument);

    SUBCASE("positive homogeneity") {
        const auto f = random_field(g, InterpMode::bilinear, 23);
        for (double p : {1.0, 1.7, 2.0, 3.0, infinite_exponent}) {
            auto cf = f;
            for (auto& v : cf.values) v *= 3.5;
            CHECK(lp_norm(cf, p) == doctest::Approx(3.5 * lp_norm(f, p)).epsilon(1e-12));
        }
    }

    SUBCASE("monotone under pointwise domination") {
        const auto f = random_field(g, InterpMode::bilinear, 37);
        auto dominating = f;
        std::mt19937_64 rng(38);
        std::uniform_real_distribution<double> bump(0.0, 0.5);
        for (auto& v : dominating.values) v = std::abs(v) + bump(rng);
        auto small = f;
        for (auto& v : small.values) v = std::abs(v);
        for (double p : {1.0, 2.0, 2.5, infinite_exponent})
            CHECK(lp_norm(small, p) <= lp_norm(dominating, p) + 1e-12);
    }
}

TEST_CASE("Hoelder inequality on random fields") {
    const GridSpec g = GridSpec::make(1.0, 0.125);
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto f = random_field(g, InterpMode::nearest, seed);
        const auto gg = random_field(g, InterpMode::nearest, seed + 100);
        auto absf = f, absg = gg;
        for (auto& v : absf.values) v = std::abs(v);
        for (auto& v : absg.values) v = std::abs(v);
        for (auto [p, q] : {std::pair{2.0, 2.0}, {3.0, 1.5}, {1.0, infinite_exponent}}) {
            const double lhs = inner_product(absf, absg);
            CHECK(lhs <= lp_norm(f, p) * lp_norm(gg, q) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("measure: exact constants, annulus area, indicator check") {
    const GridSpec g = GridSpec::make(1.0, 0.25);
    const auto ones = sample([](Vec2) { return 1.0; }, g, InterpMode::nearest);
    CHECK(measure(ones) == 4.0);
    const auto zeros = sample([](Vec2) { return 0.0; }, g, InterpMode::nearest);
    CHECK(measure(zeros) == 0.0);

    const GridSpec fine = GridSpec::make(3.0, 0.005);
    const auto ann = sample(
        [](Vec2 p) {
            const double r = norm(p);
            return (r >= 2.0 - 0.05 && r <= 2.0 + 0.05) ? 1.0 : 0.0;
        },
        fine, InterpMode::nearest);
    CHECK(measure(ann) == doctest::Approx(2.0 * M_PI * 2.0 * 0.1).epsilon(0.04));

    auto bad = ones;
    bad.values[3] = 0.5;
    CHECK_THROWS_AS(measure(bad), std::invalid_argument);
}

TEST_CASE("measure converges at first order for smooth-boundary sets") {
    auto disk = [](Vec2 p) { return norm2(p) <= 1.0 ? 1.0 : 0.0; };
    auto rect = [](Vec2 p) {
        return (p.x >= -0.6 && p.x <= 0.35 && p.y >= -0.2 && p.y <= 0.5) ? 1.0 : 0.0;
    };
    for (double h : {0.02, 0.01, 0.005}) {
        const GridSpec g = GridSpec::make(1.5, h);
        const double disk_err = std::abs(measure(sample(disk, g, InterpMode::nearest)) - M_PI);
        CHECK(disk_err <= 1.5 * 2.0 * M_PI * h);
        const double rect_err =
            std::abs(measure(sample(rect, g, InterpMode::nearest)) - 0.95 * 0.7);
        CHECK(rect_err <= 1.5 * 3.3 * h);
    }
}

TEST_CASE("field serialization round-trips bit-exactly") {
    const GridSpec g = GridSpec::make(2.0, 0.125);
    const auto f = random_field(g, InterpMode::nearest, 99, -1e3, 1e3);
    const auto j = field_to_json(f);
    const auto back = field_from_json(nlohmann::json::parse(j.dump()));
    REQUIRE(back.values.size() == f.values.size());
    CHECK(back.grid.half_width == f.grid.half_width);
    CHECK(back.grid.spacing == f.grid.spacing);
    CHECK(back.mode == f.mode);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(back.values[i] == f.values[i]);

    const std::string path = "/tmp/bgrt_field_roundtrip.json";
    save_field(f, path);
    const auto loaded = load_field(path);
    CHECK(loaded.values == f.values);
    std::remove(path.c_str());
}
