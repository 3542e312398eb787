#pragma once

#include <array>
#include <memory>
#include <vector>

#include "anisodg/types.hpp"

namespace anisodg {

constexpr int kMaxDegree = 8;

/// Reference element geometry shared by the basis and the mesh.
///
/// Triangle: vertices (0,0), (1,0), (0,1). Quad: [-1,1]^2 with vertices
/// (-1,-1), (1,-1), (1,1), (-1,1). Local edge e runs from vertex e to vertex
/// (e+1) mod nv and is parametrized by t in [-1,1].
int num_vertices(ElementKind kind);
Vec2 reference_vertex(ElementKind kind, int v);
Vec2 reference_edge_point(ElementKind kind, int edge, double t);
/// d(ref point)/dt along a local edge.
Vec2 reference_edge_tangent(ElementKind kind, int edge);
double reference_measure(ElementKind kind);

/// Nodal Lagrange basis of degree k: Q_k on GLL points for quads, P_k on
/// warp-and-blend points for triangles.
class ReferenceBasis {
public:
    ReferenceBasis(ElementKind kind, int k);

    ElementKind kind() const { return kind_; }
    int degree() const { return k_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<Vec2>& nodes() const { return nodes_; }

    /// Writes size() values.
    void eval(Vec2 x, double* values) const;
    /// Writes size() reference gradients.
    void eval_grad(Vec2 x, Vec2* grads) const;
    std::vector<double> values(Vec2 x) const;
    std::vector<Vec2> gradients(Vec2 x) const;

    /// Node indices on a local edge, ordered from the edge's start vertex.
    const std::vector<int>& edge_nodes(int edge) const { return edge_nodes_[edge]; }
    int vertex_node(int v) const { return vertex_nodes_[v]; }

    /// 2-norm condition number of the generalized Vandermonde matrix
    /// (1 for the tensor-product quad basis, which needs none).
    double vandermonde_condition() const { return vandermonde_cond_; }

private:
    void eval_modal(Vec2 x, double* psi, Vec2* dpsi) const;
    void find_edge_nodes();

    ElementKind kind_;
    int k_;
    std::vector<Vec2> nodes_;
    std::vector<double> gll_;       // quad: 1D nodes
    std::vector<double> vinv_;      // triangle: inverse Vandermonde, row-major
    std::vector<std::vector<int>> edge_nodes_;
    std::vector<int> vertex_nodes_;
    double vandermonde_cond_ = 1.0;
};

/// Cached, shared instance.
std::shared_ptr<const ReferenceBasis> nodal_basis(ElementKind kind, int k);

/// Orthonormal Jacobi polynomial P_n^{(a,b)} on [-1,1] and its derivative.
double jacobi_p(double x, double alpha, double beta, int n);
double grad_jacobi_p(double x, double alpha, double beta, int n);

} // namespace anisodg
