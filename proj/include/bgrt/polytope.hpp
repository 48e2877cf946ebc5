#pragma once

#include <algorithm>
#include <array>
#include <iterator>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bgrt/rational.hpp"

namespace bgrt {

using RationalTriple = std::array<Rational, 3>;

inline bool lex_less(const RationalTriple& a, const RationalTriple& b) {
    for (int i = 0; i < 3; ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
    }
    return false;
}

/// One linear restriction a . (1/p, 1/q, 1/r) <= b on exponent triples.
struct HalfSpace {
    RationalTriple a;
    Rational b;
    std::string label;

    Rational lhs(const RationalTriple& x) const {
        return a[0] * x[0] + a[1] * x[1] + a[2] * x[2];
    }
    bool satisfied(const RationalTriple& x) const { return lhs(x) <= b; }
};

enum class TypeSetCase { nondegenerate, degenerate };

inline const char* to_string(TypeSetCase c) {
    return c == TypeSetCase::nondegenerate ? "nondegenerate" : "degenerate";
}

/// Exact inequality description of a type-set polytope in (1/p, 1/q, 1/r).
struct InequalitySystem {
    TypeSetCase tag = TypeSetCase::nondegenerate;
    std::vector<HalfSpace> rows;
};

/// Sharpness constraints in the variables u = 1/p, v = 1/q, w = 1/r. The
/// degenerate case swaps the tangent-rectangle constraint and drops the
/// dual-rectangle pair (derived from the non-degenerate example only); the
/// flag re-adds it to show the vertex list is unchanged.
inline InequalitySystem build_system(TypeSetCase which,
                                     bool degenerate_with_dual_rectangles = false) {
    InequalitySystem sys;
    sys.tag = which;
    auto add = [&](long long a1, long long a2, long long a3, long long b, std::string label) {
        sys.rows.push_back({{Rational(a1), Rational(a2), Rational(a3)}, Rational(b), std::move(label)});
    };
    add(-1, 0, 0, 0, "cube: 1/p >= 0");
    add(1, 0, 0, 1, "cube: 1/p <= 1");
    add(0, -1, 0, 0, "cube: 1/q >= 0");
    add(0, 1, 0, 1, "cube: 1/q <= 1");
    add(0, 0, -1, 0, "cube: 1/r >= 0");
    add(0, 0, 1, 1, "cube: 1/r <= 1");
    add(2, 1, -1, 1, "small ball and annulus: 2/p + 1/q <= 1 + 1/r");
    add(1, 2, -1, 1, "small ball and annulus: 1/p + 2/q <= 1 + 1/r");
    add(1, 1, -2, 0, "dual of small ball and annulus: 1/p + 1/q <= 2/r");
    if (which == TypeSetCase::nondegenerate) {
        add(3, 3, -4, 1, "tangent rectangles (theta != pi): 3/p + 3/q <= 1 + 4/r");
        add(4, 3, -3, 2, "dual of tangent rectangles: 4/p + 3/q <= 2 + 3/r");
        add(3, 4, -3, 2, "dual of tangent rectangles: 3/p + 4/q <= 2 + 3/r");
    } else {
        add(3, 3, -3, 1, "tangent rectangles (theta = pi): 3/p + 3/q <= 1 + 3/r");
        if (degenerate_with_dual_rectangles) {
            add(4, 3, -3, 2, "dual of tangent rectangles: 4/p + 3/q <= 2 + 3/r");
            add(3, 4, -3, 2, "dual of tangent rectangles: 3/p + 4/q <= 2 + 3/r");
        }
    }
    add(-1, -1, 1, 0, "large ball: 1/r <= 1/p + 1/q");
    return sys;
}

/// Deduplicated, lexicographically sorted exact vertex list.
struct VertexSet {
    std::vector<RationalTriple> vertices;
};

namespace detail {

// Exact 3x3 solve by Cramer; empty when the rows are linearly dependent.
inline std::optional<RationalTriple> solve3(const HalfSpace& r0, const HalfSpace& r1,
                                            const HalfSpace& r2) {
    const auto det3 = [](const RationalTriple& a, const RationalTriple& b,
                         const RationalTriple& c) {
        return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
               a[2] * (b[0] * c[1] - b[1] * c[0]);
    };
    const Rational d = det3(r0.a, r1.a, r2.a);
    if (d.is_zero()) return std::nullopt;
    RationalTriple x;
    for (int col = 0; col < 3; ++col) {
        RationalTriple c0 = r0.a, c1 = r1.a, c2 = r2.a;
        c0[col] = r0.b;
        c1[col] = r1.b;
        c2[col] = r2.b;
        x[col] = det3(c0, c1, c2) / d;
    }
    return x;
}

} // namespace detail

struct Containment {
    bool inside = true;
    std::vector<std::string> violated;
};

/// Exact membership test with the list of violated constraints.
inline Containment contains(const InequalitySystem& sys, const RationalTriple& x) {
    Containment c;
    for (const auto& row : sys.rows) {
        if (!row.satisfied(x)) {
            c.inside = false;
            c.violated.push_back(row.label);
        }
    }
    return c;
}

/// Vertex enumeration by exact solution of every 3-subset of constraint
/// hyperplanes, keeping solutions feasible for the whole system. The cube
/// rows bound the polytope, so no unbounded direction can occur.
inline VertexSet enumerate_vertices(const InequalitySystem& sys) {
    if (sys.rows.empty()) throw std::invalid_argument("enumerate_vertices: empty system");
    const std::size_t n = sys.rows.size();
    std::vector<RationalTriple> found;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                auto x = detail::solve3(sys.rows[i], sys.rows[j], sys.rows[k]);
                if (!x) continue; // singular subset
                if (contains(sys, *x).inside) found.push_back(*x);
            }
        }
    }
    std::sort(found.begin(), found.end(), lex_less);
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return {found};
}

/// Exact feasibility of p in conv(vertices): phase-I simplex with Bland's rule
/// on the system {sum l_i v_i = p, sum l_i = 1, l >= 0}.
inline bool hull_contains(const std::vector<RationalTriple>& vertices, const RationalTriple& p) {
    if (vertices.empty()) return false;
    const std::size_t n = vertices.size();
    constexpr std::size_t m = 4; // three coordinates + the affine row
    // Tableau columns: n lambda columns, m artificial columns, then the rhs.
    std::vector<std::vector<Rational>> tab(m, std::vector<Rational>(n + m + 1, Rational(0)));
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < 3; ++r) tab[r][c] = vertices[c][r];
        tab[3][c] = Rational(1);
    }
    std::array<Rational, m> rhs{p[0], p[1], p[2], Rational(1)};
    for (std::size_t r = 0; r < m; ++r) {
        // Flip rows with negative rhs so the artificial basis is feasible.
        const bool flip = rhs[r] < Rational(0);
        for (std::size_t c = 0; c < n; ++c)
            if (flip) tab[r][c] = -tab[r][c];
        tab[r][n + r] = Rational(1);
        tab[r][n + m] = flip ? -rhs[r] : rhs[r];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;

    // Reduced costs for minimising the artificial sum.
    auto reduced_cost = [&](std::size_t col) {
        Rational c(0);
        for (std::size_t r = 0; r < m; ++r)
            if (basis[r] >= n) c = c - tab[r][col];
        if (col >= n) c = c + Rational(1);
        return c;
    };

    for (int iter = 0; iter < 10000; ++iter) {
        std::size_t enter = n + m;
        for (std::size_t c = 0; c < n + m; ++c) {
            if (reduced_cost(c) < Rational(0)) { enter = c; break; } // Bland: lowest index
        }
        if (enter == n + m) break; // optimal
        std::size_t leave = m;
        for (std::size_t r = 0; r < m; ++r) {
            if (tab[r][enter] > Rational(0)) {
                if (leave == m) { leave = r; continue; }
                const Rational cur = tab[r][n + m] / tab[r][enter];
                const Rational best = tab[leave][n + m] / tab[leave][enter];
                if (cur < best || (cur == best && basis[r] < basis[leave])) leave = r;
            }
        }
        if (leave == m) break; // unbounded cannot happen here, stop defensively
        const Rational piv = tab[leave][enter];
        for (auto& v : tab[leave]) v = v / piv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave || tab[r][enter].is_zero()) continue;
            const Rational factor = tab[r][enter];
            for (std::size_t c = 0; c <= n + m; ++c)
                tab[r][c] = tab[r][c] - factor * tab[leave][c];
        }
        basis[leave] = enter;
    }
    Rational artificial_mass(0);
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] >= n) artificial_mass = artificial_mass + tab[r][n + m];
    return artificial_mass.is_zero();
}

/// Vertex adjacency for plotting: two vertices share an edge when their common
/// active constraints contain two with linearly independent normals (two
/// facets meeting in the line through both).
inline std::vector<std::pair<std::size_t, std::size_t>> polytope_edges(
    const VertexSet& vs, const InequalitySystem& sys) {
    const std::size_t nv = vs.vertices.size();
    std::vector<std::vector<std::size_t>> active(nv);
    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t r = 0; r < sys.rows.size(); ++r)
            if (sys.rows[r].lhs(vs.vertices[i]) == sys.rows[r].b) active[i].push_back(r);

    auto independent_pair = [&](const std::vector<std::size_t>& common) {
        for (std::size_t a = 0; a < common.size(); ++a)
            for (std::size_t b = a + 1; b < common.size(); ++b) {
                const auto& u = sys.rows[common[a]].a;
                const auto& v = sys.rows[common[b]].a;
                const Rational cx = u[1] * v[2] - u[2] * v[1];
                const Rational cy = u[2] * v[0] - u[0] * v[2];
                const Rational cz = u[0] * v[1] - u[1] * v[0];
                if (!cx.is_zero() || !cy.is_zero() || !cz.is_zero()) return true;
            }
        return false;
    };

    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < nv; ++i) {
        for (std::size_t j = i + 1; j < nv; ++j) {
            std::vector<std::size_t> common;
            std::set_intersection(active[i].begin(), active[i].end(), active[j].begin(),
                                  active[j].end(), std::back_inserter(common));
            if (common.size() >= 2 && independent_pair(common)) edges.push_back({i, j});
        }
    }
    return edges;
}

struct ConvexityReport {
    bool ok = true;
    std::optional<RationalTriple> witness; // feasible point outside the hull
};

/// Two-sided validation: random rational convex combinations of the vertices
/// satisfy the system, and random rational points of the system lie in the
/// convex hull of the vertices.
inline ConvexityReport convexity_cross_check(const VertexSet& vs, const InequalitySystem& sys,
                                             int hull_samples = 10000,
                                             std::uint64_t seed = 20250408) {
    ConvexityReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> wdist(0, 64);

    const std::size_t nv = vs.vertices.size();
    for (int s = 0; s < 200 && nv > 0; ++s) {
        std::vector<long long> w(nv);
        long long total = 0;
        for (auto& wi : w) { wi = wdist(rng); total += wi; }
        if (total == 0) { w[0] = 1; total = 1; }
        RationalTriple p{Rational(0), Rational(0), Rational(0)};
        for (std::size_t i = 0; i < nv; ++i) {
            const Rational li(w[i], total);
            for (int c = 0; c < 3; ++c) p[c] = p[c] + li * vs.vertices[i][c];
        }
        if (!contains(sys, p).inside) {
            rep.ok = false;
            rep.witness = p;
            return rep;
        }
    }

    std::uniform_int_distribution<int> kdist(0, 64);
    int accepted = 0;
    while (accepted < hull_samples) {
        RationalTriple p{Rational(kdist(rng), 64), Rational(kdist(rng), 64),
                         Rational(kdist(rng), 64)};
        if (!contains(sys, p).inside) continue;
        ++accepted;
        if (!hull_contains(vs.vertices, p)) {
            rep.ok = false;
            rep.witness = p;
            return rep;
        }
    }
    return rep;
}

/// Expected vertex lists (lexicographic order).
inline std::vector<RationalTriple> expected_vertices(TypeSetCase which) {
    std::vector<RationalTriple> v = {
        {Rational(0), Rational(0), Rational(0)},
        {Rational(0), Rational(2, 3), Rational(1, 3)},
        {Rational(0), Rational(1), Rational(1)},
        {Rational(2, 3), Rational(0), Rational(1, 3)},
        {Rational(2, 3), Rational(2, 3), Rational(1)},
        {Rational(1), Rational(0), Rational(1)},
    };
    if (which == TypeSetCase::nondegenerate)
        v.push_back({Rational(1, 2), Rational(1, 2), Rational(1, 2)});
    std::sort(v.begin(), v.end(), lex_less);
    return v;
}

/// Exponent formatting: 1/u printed as a fraction, zero as "inf".
inline std::string exponent_string(const Rational& u) {
    if (u.is_zero()) return "inf";
    const Rational p = Rational(1) / u;
    return p.str();
}

} // namespace bgrt
