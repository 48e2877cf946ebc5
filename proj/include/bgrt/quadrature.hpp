#pragma once

#include <stdexcept>
#include <vector>

#include "bgrt/geometry.hpp"

namespace bgrt {

/// Uniform quadrature for arc-length measure on S^1: nodes at angles 2*pi*k/M,
/// equal weights 2*pi/M. Exact total mass 2*pi; spectrally accurate for smooth
/// periodic integrands.
struct CircleQuadrature {
    int node_count = 0;
    double weight = 0.0;
    std::vector<double> angles;
    std::vector<Vec2> nodes;

    static CircleQuadrature make(int M) {
        if (M < 1) throw std::invalid_argument("CircleQuadrature: node count must be positive");
        CircleQuadrature q;
        q.node_count = M;
        q.weight = two_pi / M;
        q.angles.reserve(M);
        q.nodes.reserve(M);
        for (int k = 0; k < M; ++k) {
            const double a = two_pi * k / M;
            q.angles.push_back(a);
            q.nodes.push_back({std::cos(a), std::sin(a)});
        }
        return q;
    }

    double weight_sum() const {
        double s = 0.0;
        for (int k = 0; k < node_count; ++k) s += weight;
        return s;
    }
};

} // namespace bgrt
