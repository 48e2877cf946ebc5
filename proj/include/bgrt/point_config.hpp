#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "bgrt/geometry.hpp"

namespace bgrt {

/// Finite planar point set for discrete configuration counting. The exact flag
/// asserts that squared pairwise distances are exactly representable (integer
/// lattices and the like), which permits tol = 0.
struct PointSet {
    std::vector<Vec2> points;
    bool exact = false;

    static PointSet from_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("PointSet::from_csv: cannot open " + path);
        PointSet ps;
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            for (char& c : line)
                if (c == ',' || c == ';' || c == '\t') c = ' ';
            std::istringstream row(line);
            double x, y;
            if (!(row >> x >> y)) {
                if (first) { first = false; continue; } // header line
                throw std::runtime_error("PointSet::from_csv: bad row: " + line);
            }
            if (std::isnan(x) || std::isnan(y))
                throw std::runtime_error("PointSet::from_csv: NaN coordinate");
            ps.points.push_back({x, y});
            first = false;
        }
        return ps;
    }

    bool has_duplicates() const {
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j)
                if (points[i].x == points[j].x && points[i].y == points[j].y) return true;
        return false;
    }
};

/// Comparison is on squared distances: a pair is "unit" when its squared
/// distance is within tol of 1.
struct DistanceTolerance {
    double tol = 1e-9;

    static DistanceTolerance for_set(const PointSet& ps) {
        return {ps.exact ? 0.0 : 1e-9};
    }
    bool unit(double d2) const { return std::abs(d2 - 1.0) <= tol; }
};

namespace detail {

// Spatial hash with cell side exceeding the largest unit-tolerant distance,
// so partners always live in the 3x3 neighborhood.
class CellIndex {
public:
    CellIndex(const std::vector<Vec2>& pts, double reach) : pts_(pts), side_(reach + 0.01) {
        cells_.reserve(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) cells_[key(pts[i])].push_back(i);
    }

    template <class Visit>
    void for_neighbors(Vec2 p, Visit&& visit) const {
        const std::int64_t cx = coord(p.x), cy = coord(p.y);
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
            for (std::int64_t dx = -1; dx <= 1; ++dx) {
                auto it = cells_.find(pack(cx + dx, cy + dy));
                if (it == cells_.end()) continue;
                for (std::size_t idx : it->second) visit(idx);
            }
        }
    }

    /// Index of a stored point within squared distance mem_tol2 of q, or -1.
    std::ptrdiff_t find_near(Vec2 q, double mem_tol2) const {
        std::ptrdiff_t found = -1;
        const std::int64_t cx = coord(q.x), cy = coord(q.y);
        for (std::int64_t dy = -1; dy <= 1 && found < 0; ++dy) {
            for (std::int64_t dx = -1; dx <= 1 && found < 0; ++dx) {
                auto it = cells_.find(pack(cx + dx, cy + dy));
                if (it == cells_.end()) continue;
                for (std::size_t idx : it->second) {
                    if (norm2(pts_[idx] - q) <= mem_tol2) { found = static_cast<std::ptrdiff_t>(idx); break; }
                }
            }
        }
        return found;
    }

private:
    std::int64_t coord(double v) const { return static_cast<std::int64_t>(std::floor(v / side_)); }
    static std::int64_t pack(std::int64_t x, std::int64_t y) {
        return (x << 32) ^ (y & 0xffffffffLL);
    }
    std::int64_t key(Vec2 p) const { return pack(coord(p.x), coord(p.y)); }

    const std::vector<Vec2>& pts_;
    double side_;
    std::unordered_map<std::int64_t, std::vector<std::size_t>> cells_;
};

inline double unit_reach(DistanceTolerance tol) { return std::sqrt(1.0 + tol.tol); }

inline void validate_tolerance(const PointSet& ps, DistanceTolerance tol) {
    if (!(tol.tol >= 0.0))
        throw std::invalid_argument("distance tolerance must be nonnegative");
    if (tol.tol == 0.0 && !ps.exact)
        throw std::invalid_argument(
            "tol = 0 requires the exactness flag (squared distances exactly representable)");
}

} // namespace detail

/// Ordered pairs (x,y), x != y, at unit distance.
inline std::uint64_t count_unit_pairs(const PointSet& ps, DistanceTolerance tol) {
    detail::validate_tolerance(ps, tol);
    const auto& pts = ps.points;
    detail::CellIndex index(pts, detail::unit_reach(tol));
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        index.for_neighbors(pts[i], [&](std::size_t j) {
            if (j != i && tol.unit(norm2(pts[i] - pts[j]))) ++count;
        });
    }
    return count;
}

/// Ordered triples (x,y,z) with all three pairwise distances unit; one
/// geometric unit equilateral triangle contributes 3! = 6.
inline std::uint64_t count_unit_triangles(const PointSet& ps, DistanceTolerance tol) {
    detail::validate_tolerance(ps, tol);
    const auto& pts = ps.points;
    detail::CellIndex index(pts, detail::unit_reach(tol));
    std::uint64_t count = 0;
    std::vector<std::size_t> nbr;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        nbr.clear();
        index.for_neighbors(pts[i], [&](std::size_t j) {
            if (j != i && tol.unit(norm2(pts[i] - pts[j]))) nbr.push_back(j);
        });
        for (std::size_t a : nbr)
            for (std::size_t b : nbr)
                if (a != b && tol.unit(norm2(pts[a] - pts[b]))) ++count;
    }
    return count;
}

struct TrilinearCount {
    std::uint64_t total = 0;
    std::uint64_t plus = 0;  // contribution of the +pi/3 rotation
    std::uint64_t minus = 0; // contribution of the -pi/3 rotation
};

/// Triangle count through the discrete bilinear operators: for each x in P,
/// counts u with |u|^2 ~ 1, x-u in P and x-Tu in P, T rotation by +-pi/3.
/// Membership snaps to the nearest stored point within a tolerance derived
/// from tol (floating-point rotation is never exact, so a small snap remains
/// even at tol = 0).
inline TrilinearCount trilinear_via_b(const PointSet& ps, DistanceTolerance tol) {
    detail::validate_tolerance(ps, tol);
    const auto& pts = ps.points;
    detail::CellIndex index(pts, detail::unit_reach(tol));
    const Rotation plus(std::numbers::pi / 3.0);
    const double mem_tol = 2.5 * tol.tol + 1e-12;
    const double mem_tol2 = mem_tol * mem_tol;
    TrilinearCount out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec2 x = pts[i];
        index.for_neighbors(x, [&](std::size_t j) {
            if (j == i) return;
            const Vec2 u = x - pts[j];
            if (!tol.unit(norm2(u))) return;
            if (index.find_near(x - plus.apply(u), mem_tol2) >= 0) ++out.plus;
            if (index.find_near(x - plus.apply_inverse(u), mem_tol2) >= 0) ++out.minus;
        });
    }
    out.total = out.plus + out.minus;
    return out;
}

} // namespace bgrt
