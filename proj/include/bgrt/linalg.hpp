#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bgrt {

/// Dense row-major matrix for the small rank/determinant computations
/// (nothing here exceeds 6 x 10).
struct SmallMatrix {
    int rows = 0, cols = 0;
    std::vector<double> data;

    SmallMatrix() = default;
    SmallMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

inline double det2(double a, double b, double c, double d) { return a * d - b * c; }

inline double det3(const SmallMatrix& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

/// Determinant by partial-pivot LU; fine for n <= 4 uses here.
inline double det(SmallMatrix m) {
    if (m.rows != m.cols) throw std::invalid_argument("det: matrix not square");
    const int n = m.rows;
    double result = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int r = k + 1; r < n; ++r)
            if (std::abs(m(r, k)) > std::abs(m(piv, k))) piv = r;
        if (m(piv, k) == 0.0) return 0.0;
        if (piv != k) {
            for (int c = 0; c < n; ++c) std::swap(m(k, c), m(piv, c));
            result = -result;
        }
        result *= m(k, k);
        for (int r = k + 1; r < n; ++r) {
            const double f = m(r, k) / m(k, k);
            for (int c = k; c < n; ++c) m(r, c) -= f * m(k, c);
        }
    }
    return result;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps.
inline std::vector<double> symmetric_eigenvalues(SmallMatrix a) {
    const int n = a.rows;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-300) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

/// Singular values (descending) via the Gram matrix of the shorter side.
inline std::vector<double> singular_values(const SmallMatrix& a) {
    const bool wide = a.cols >= a.rows;
    const int m = wide ? a.rows : a.cols;
    SmallMatrix gram(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            const int inner = wide ? a.cols : a.rows;
            for (int k = 0; k < inner; ++k)
                s += (wide ? a(i, k) * a(j, k) : a(k, i) * a(k, j));
            gram(i, j) = s;
        }
    }
    auto ev = symmetric_eigenvalues(gram);
    for (auto& v : ev) v = std::sqrt(std::max(v, 0.0));
    return ev;
}

/// Numerical rank: singular values above rel_tol times the largest.
inline int numerical_rank(const SmallMatrix& a, double rel_tol = 1e-8) {
    const auto sv = singular_values(a);
    if (sv.empty() || sv[0] == 0.0) return 0;
    int rank = 0;
    for (double s : sv)
        if (s > rel_tol * sv[0]) ++rank;
    return rank;
}

/// Gaussian elimination with partial pivoting; returns false when singular.
inline bool solve_linear(SmallMatrix a, std::vector<double> b, std::vector<double>& x) {
    const int n = a.rows;
    if (a.cols != n || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("solve_linear: shape mismatch");
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int r = k + 1; r < n; ++r)
            if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
        if (std::abs(a(piv, k)) < 1e-14) return false;
        if (piv != k) {
            for (int c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
            std::swap(b[k], b[piv]);
        }
        for (int r = k + 1; r < n; ++r) {
            const double f = a(r, k) / a(k, k);
            for (int c = k; c < n; ++c) a(r, c) -= f * a(k, c);
            b[r] -= f * b[k];
        }
    }
    x.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
        x[r] = s / a(r, r);
    }
    return true;
}

} // namespace bgrt
