#pragma once

#include <functional>
#include <span>
#include <vector>

#include "anisodg/mesh.hpp"
#include "anisodg/sparse.hpp"

namespace anisodg {

enum class Continuity { DG, CG };

struct DofMap {
    Continuity continuity = Continuity::DG;
    int k = 1;
    int num_dofs = 0;
    /// Local basis node -> global dof, per element.
    std::vector<std::vector<int>> element_dofs;
    /// Physical location of each dof's node.
    std::vector<Vec2> dof_points;
    /// CG only: dof lies on the boundary of the domain.
    std::vector<char> on_boundary;
    /// CG only: dof lies on a Dirichlet segment and is eliminated.
    std::vector<char> dirichlet;
    /// CG only: compressed index among non-Dirichlet dofs, -1 if eliminated.
    std::vector<int> free_index;
    int num_free = 0;
    /// CG only: mesh vertex -> dof.
    std::vector<int> vertex_dof;
};

DofMap build_dofmap(const Mesh& mesh, int k, Continuity continuity);

/// Pi: (DG dofs) x (CG dofs). With `free_only`, columns are restricted to the
/// non-Dirichlet CG dofs in free_index order.
CsrMatrix build_inclusion(const Mesh& mesh, const DofMap& cg, const DofMap& dg,
                          bool free_only = true);

/// I_lin: (degree-k CG dofs) x (degree-1 CG dofs); column j holds the values
/// of hat function j at the degree-k nodes.
CsrMatrix build_linear_inclusion(const Mesh& mesh, const DofMap& cg_k, const DofMap& cg_1,
                                 bool free_only = true);

using ScalarFn = std::function<double(Vec2)>;

/// Nodal interpolation (values at dof points).
std::vector<double> interpolate(const DofMap& dofs, const ScalarFn& fn);

/// Field value at a reference point of an element.
double evaluate_field(const Mesh& mesh, const DofMap& dofs, std::span<const double> coeffs,
                      int element, Vec2 ref);

/// Expands a free-dof CG vector to all CG dofs, filling eliminated dofs with
/// `dirichlet_values` (or zero when empty).
std::vector<double> expand_free(const DofMap& cg, std::span<const double> free_values,
                                std::span<const double> dirichlet_values = {});

} // namespace anisodg
