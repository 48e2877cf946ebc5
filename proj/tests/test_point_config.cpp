#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "bgrt/point_config.hpp"

using namespace bgrt;

namespace {

// Independent O(n^2)/O(n^3) oracles with the same tolerance semantics.
std::uint64_t brute_pairs(const PointSet& ps, DistanceTolerance tol) {
    std::uint64_t c = 0;
    const auto& p = ps.points;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
            if (i != j && tol.unit(norm2(p[i] - p[j]))) ++c;
    return c;
}

std::uint64_t brute_triangles(const PointSet& ps, DistanceTolerance tol) {
    std::uint64_t c = 0;
    const auto& p = ps.points;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
            for (std::size_t k = 0; k < p.size(); ++k) {
                if (i == j || j == k || i == k) continue;
                if (tol.unit(norm2(p[i] - p[j])) && tol.unit(norm2(p[i] - p[k])) &&
                    tol.unit(norm2(p[j] - p[k])))
                    ++c;
            }
    return c;
}

PointSet triangular_lattice(int rows, int cols) {
    PointSet ps;
    const double s = std::sqrt(3.0) / 2.0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            ps.points.push_back({c + 0.5 * r, s * r});
    return ps;
}

PointSet unit_triangle() {
    PointSet ps;
    ps.points = {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
    return ps;
}

} // namespace

TEST_CASE("count_unit_pairs on two-point sets") {
    PointSet ps;
    ps.points = {{0.0, 0.0}, {1.0, 0.0}};
    ps.exact = true;
    CHECK(count_unit_pairs(ps, {0.0}) == 2);
    ps.points[1] = {2.0, 0.0};
    CHECK(count_unit_pairs(ps, {0.0}) == 0);
}

TEST_CASE("count_unit_pairs on the 10x10 integer lattice") {
    PointSet ps;
    ps.exact = true;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) ps.points.push_back({double(i), double(j)});
    const DistanceTolerance tol = DistanceTolerance::for_set(ps);
    CHECK(tol.tol == 0.0);
    CHECK(count_unit_pairs(ps, tol) == 360); // 2 * (horizontal 90 + vertical 90) ordered
    CHECK(count_unit_pairs(ps, tol) == brute_pairs(ps, tol));
    CHECK(count_unit_triangles(ps, tol) == 0); // no unit equilateral triangle in Z^2
}

TEST_CASE("unit triangle counts 6 ordered triples through both routes") {
    const PointSet ps = unit_triangle();
    const DistanceTolerance tol{1e-9};
    CHECK(count_unit_triangles(ps, tol) == 6);
    const auto tri = trilinear_via_b(ps, tol);
    CHECK(tri.total == 6);
    CHECK(tri.plus == 3);
    CHECK(tri.minus == 3);
    CHECK(brute_triangles(ps, tol) == 6);
}

TEST_CASE("unit square has no unit equilateral triangle") {
    PointSet ps;
    ps.points = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(count_unit_triangles(ps, {1e-9}) == 0);
    CHECK(trilinear_via_b(ps, {1e-9}).total == 0);
}

TEST_CASE("empty set") {
    PointSet ps;
    CHECK(count_unit_pairs(ps, {1e-9}) == 0);
    CHECK(count_unit_triangles(ps, {1e-9}) == 0);
    CHECK(trilinear_via_b(ps, {1e-9}).total == 0);
}

TEST_CASE("tolerance zero demands the exactness flag") {
    PointSet ps;
    ps.points = {{0.0, 0.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(count_unit_pairs(ps, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(count_unit_pairs(ps, {-1e-3}), std::invalid_argument);
    ps.exact = true;
    CHECK(count_unit_pairs(ps, {0.0}) == 2);
}

TEST_CASE("triangular lattice patches: identity against the brute-force oracle") {
    for (auto [rows, cols] : {std::pair{4, 4}, {4, 10}, {10, 10}}) {
        const PointSet ps = triangular_lattice(rows, cols);
        const DistanceTolerance tol{1e-9};
        const auto fast = count_unit_triangles(ps, tol);
        const auto via_b = trilinear_via_b(ps, tol);
        CHECK(fast == brute_triangles(ps, tol));
        CHECK(via_b.total == fast);
        CHECK(count_unit_pairs(ps, tol) == brute_pairs(ps, tol));
    }
}

TEST_CASE("counts are invariant under rigid motions") {
    const PointSet base = triangular_lattice(5, 6);
    const DistanceTolerance tol{1e-9};
    const auto pairs0 = count_unit_pairs(base, tol);
    const auto tris0 = count_unit_triangles(base, tol);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> angle(0.0, two_pi);
    std::uniform_real_distribution<double> shift(-10.0, 10.0);
    for (int trial = 0; trial < 5; ++trial) {
        const Rotation rot(angle(rng));
        const Vec2 t{shift(rng), shift(rng)};
        PointSet moved;
        for (Vec2 p : base.points) moved.points.push_back(rot.apply(p) + t);
        CHECK(count_unit_pairs(moved, tol) == pairs0);
        CHECK(count_unit_triangles(moved, tol) == tris0);
        CHECK(trilinear_via_b(moved, tol).total == tris0);
    }
}

TEST_CASE("counts are monotone under point insertion") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    PointSet ps = unit_triangle();
    const DistanceTolerance tol{1e-9};
    auto pairs = count_unit_pairs(ps, tol);
    auto tris = count_unit_triangles(ps, tol);
    for (int k = 0; k < 30; ++k) {
        ps.points.push_back({coord(rng), coord(rng)});
        const auto p2 = count_unit_pairs(ps, tol);
        const auto t2 = count_unit_triangles(ps, tol);
        CHECK(p2 >= pairs);
        CHECK(t2 >= tris);
        pairs = p2;
        tris = t2;
    }
}

TEST_CASE("duplicates are flagged but permitted") {
    PointSet ps;
    ps.points = {{0, 0}, {1, 0}, {0, 0}};
    CHECK(ps.has_duplicates());
    CHECK_FALSE(unit_triangle().has_duplicates());
    CHECK(count_unit_pairs(ps, {1e-9}) == 4); // both copies pair with (1,0)
}

TEST_CASE("perturbed lattices keep the identity at tol = 1e-9") {
    std::mt19937_64 rng(2027);
    std::uniform_real_distribution<double> noise(-1e-11, 1e-11);
    const PointSet base = triangular_lattice(6, 6);
    const DistanceTolerance tol{1e-9};
    const auto expect = brute_triangles(base, tol);
    for (int trial = 0; trial < 10; ++trial) {
        PointSet jig;
        for (Vec2 p : base.points) jig.points.push_back({p.x + noise(rng), p.y + noise(rng)});
        CHECK(count_unit_triangles(jig, tol) == expect);
        CHECK(trilinear_via_b(jig, tol).total == expect);
    }
}

TEST_CASE("repository fixture lattice loads and satisfies the identity") {
    const PointSet ps = PointSet::from_csv(std::string(BGRT_TEST_DATA_DIR) + "/tri_lattice_10.csv");
    REQUIRE(ps.points.size() == 100);
    const DistanceTolerance tol{1e-9};
    const auto triangles = count_unit_triangles(ps, tol);
    CHECK(triangles == 972);
    CHECK(trilinear_via_b(ps, tol).total == triangles);
    CHECK(count_unit_pairs(ps, tol) == 522);
}

TEST_CASE("CSV round trip with and without header") {
    const char* path = "/tmp/bgrt_points.csv";
    {
        std::ofstream out(path);
        out.precision(17);
        out << "x,y\n0.0,0.0\n1.0,0.0\n0.5," << std::sqrt(3.0) / 2.0 << "\n";
    }
    const PointSet ps = PointSet::from_csv(path);
    REQUIRE(ps.points.size() == 3);
    CHECK(count_unit_triangles(ps, {1e-9}) == 6);
    std::remove(path);
}
