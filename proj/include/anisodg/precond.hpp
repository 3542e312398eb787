#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <vector>

#include "anisodg/amg.hpp"
#include "anisodg/mesh.hpp"
#include "anisodg/problems.hpp"
#include "anisodg/smoothers.hpp"
#include "anisodg/space.hpp"
#include "anisodg/sparse.hpp"

namespace anisodg {

enum class LineDirection { Radial, Circular };

/// One block per vertex line of the annulus: every free CG dof coupled (in
/// the full stiffness pattern `a_cg_full`) to a dof of the line's vertices.
/// Blocks are returned in free-dof numbering. Throws on non-annulus meshes.
std::vector<DofBlock> build_line_blocks(const Mesh& mesh, const DofMap& cg,
                                        const CsrMatrix& a_cg_full, LineDirection direction);

struct PrecondOptions {
    double jacobi_omega = 1.0;
    int jacobi_sweeps = 1;
    double inner_tol = 1e-2;
    int inner_max_iterations = 50;
    AmgParams amg{};
    bool use_radial = true;
    bool use_circular = true;
    int schwarz_dense_limit = 400;
    /// Line-smoother weight; <= 0 picks 1 / (max block multiplicity).
    double schwarz_weight = 0.0;
};

enum class PrecondVariant { Exact, Inexact };

PrecondVariant parse_variant(const std::string& name);

/// Counters for the inner Krylov solves of the inexact variant.
struct InnerStats {
    long applications = 0;
    long iterations = 0;
    long not_converged = 0;
};

/// B r = S_DG r + Pi C (Pi^T r), where C is the CG-branch operator.
class PreconditionerStack {
public:
    PreconditionerStack(PrecondVariant variant, int k, LinearOperator s_dg, LinearOperator cg_branch,
                        CsrMatrix pi, bool symmetric);

    PrecondVariant variant() const { return variant_; }
    int degree() const { return k_; }
    int size() const { return pi_.rows(); }
    const CsrMatrix& pi() const { return pi_; }
    const CsrMatrix& pi_t() const { return pi_t_; }
    const LinearOperator& smoother() const { return s_dg_; }
    const LinearOperator& cg_branch() const { return cg_branch_; }

    void apply(std::span<const double> r, std::span<double> z) const;
    /// Keeps the stack alive through shared ownership.
    static LinearOperator as_operator(std::shared_ptr<const PreconditionerStack> stack);

    /// Zero for the exact variant and for k = 1.
    InnerStats inner_stats() const;

    struct Counters;
    void attach_counters(std::shared_ptr<Counters> c) { counters_ = std::move(c); }

private:
    PrecondVariant variant_;
    int k_;
    LinearOperator s_dg_;
    LinearOperator cg_branch_;
    CsrMatrix pi_;
    CsrMatrix pi_t_;
    bool symmetric_;
    std::shared_ptr<Counters> counters_;
};

struct PreconditionerStack::Counters {
    std::atomic<long> applications{0};
    std::atomic<long> iterations{0};
    std::atomic<long> not_converged{0};
};

/// Exact A_CG^{-1} (sparse Cholesky; tight PCG with AMG if factorization fails).
LinearOperator exact_cg_solver(const CsrMatrix& a_cg);

std::shared_ptr<PreconditionerStack> build_bdg_exact(const CsrMatrix& a_dg, const CsrMatrix& a_cg,
                                                     const CsrMatrix& pi,
                                                     const PrecondOptions& options = {});

/// Ingredients of the CG-branch preconditioner for degree k.
struct CgBranchInputs {
    const Mesh* mesh = nullptr;
    const DofMap* cg = nullptr;          ///< degree k
    const CsrMatrix* a_cg = nullptr;     ///< free dofs
    const CsrMatrix* a_cg_full = nullptr;  ///< all dofs, for line blocks
    const DofMap* cg1 = nullptr;         ///< degree 1 (k >= 2)
    const CsrMatrix* a_linear = nullptr; ///< degree-1 stiffness on free dofs (k >= 2)
};

/// k = 1: one AMG V-cycle. k >= 2: S_CG + I_lin B_MG Q with
/// S_CG = S_cir + S_rad - S_cir A S_rad.
LinearOperator build_bcg(const CgBranchInputs& in, const PrecondOptions& options = {});

std::shared_ptr<PreconditionerStack> build_bdg_inexact(const CsrMatrix& a_dg, const CgBranchInputs& in,
                                                       const CsrMatrix& pi,
                                                       const PrecondOptions& options = {});

/// Everything needed to build either variant from a mesh and a case.
struct AuxiliarySystems {
    DofMap cg;
    DofMap cg1;
    CsrMatrix pi;
    CsrMatrix a_cg;
    CsrMatrix a_cg_full;
    CsrMatrix a_linear;
};

AuxiliarySystems build_auxiliary(const Mesh& mesh, const DofMap& dg, const ProblemCase& problem,
                                 bool need_linear);

std::shared_ptr<PreconditionerStack> build_preconditioner(PrecondVariant variant, const Mesh& mesh,
                                                          const DofMap& dg, const ProblemCase& problem,
                                                          const CsrMatrix& a_dg,
                                                          const PrecondOptions& options = {});

} // namespace anisodg
