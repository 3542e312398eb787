#pragma once

#include <vector>

#include "anisodg/types.hpp"

namespace anisodg {

/// Rule on a reference element: [-1,1]^2 for quads, the unit triangle
/// {x, y >= 0, x + y <= 1} for triangles.
struct QuadRule {
    std::vector<Vec2> points;
    std::vector<double> weights;
    int exactness = 0;

    std::size_t size() const { return points.size(); }
};

/// Rule on the reference edge [-1, 1].
struct QuadRule1D {
    std::vector<double> points;
    std::vector<double> weights;
    int exactness = 0;

    std::size_t size() const { return points.size(); }
};

constexpr int kMaxQuadratureExactness = 61;

QuadRule1D gauss_legendre(int n);
/// Gauss-Lobatto-Legendre nodes on [-1, 1], ascending, endpoints included.
std::vector<double> gauss_lobatto_points(int n);

QuadRule1D face_quadrature(int exactness);
QuadRule volume_quadrature(ElementKind kind, int exactness);

} // namespace anisodg
