#pragma once

#include <filesystem>
#include <vector>

#include "anisodg/mesh.hpp"
#include "anisodg/problems.hpp"
#include "anisodg/space.hpp"
#include "anisodg/sparse.hpp"

namespace anisodg {

enum class Scheme { CG, IPDG };
enum class PenaltyChoice { Alpha1, Alpha2 };

PenaltyChoice parse_penalty(const std::string& name);
std::string penalty_name(PenaltyChoice choice);

struct AssembledSystem {
    CsrMatrix a;
    std::vector<double> rhs;
    Scheme scheme = Scheme::IPDG;
    double beta = 1.0;
    PenaltyChoice penalty = PenaltyChoice::Alpha1;
    int k = 1;
    int num_dofs = 0;
    /// CG only: nodal Dirichlet values on all CG dofs (zero on free dofs).
    std::vector<double> dirichlet_values;
};

/// Volume and face quadrature exactness: 2k+2, plus 2 on curved elements.
int assembly_quadrature_exactness(int k, bool curved);

/// alpha1 = 4k(k+1) d_par / h_face, alpha2 = 4k(k+1) n^T D n / h_face.
double penalty_value(PenaltyChoice choice, int k, double h_face, const Mat2& d, Vec2 n, double d_par);

/// Full CG stiffness on all dofs (no boundary elimination).
CsrMatrix assemble_cg_stiffness(const Mesh& mesh, const DofMap& cg, const ProblemCase& problem);

/// CG system on the free dofs: Dirichlet dofs carry interpolated data and are
/// eliminated symmetrically. Homogeneous Neumann segments contribute nothing.
AssembledSystem assemble_cg(const Mesh& mesh, const DofMap& cg, const ProblemCase& problem);

/// Interior penalty DG system with weak (Nitsche) Dirichlet data.
AssembledSystem assemble_ipdg(const Mesh& mesh, const DofMap& dg, const ProblemCase& problem,
                              double beta = 1.0, PenaltyChoice penalty = PenaltyChoice::Alpha1);

/// Writes A as MatrixMarket and the rhs as a plain vector.
void export_system(const AssembledSystem& system, const std::filesystem::path& matrix_path,
                   const std::filesystem::path& rhs_path);

} // namespace anisodg
