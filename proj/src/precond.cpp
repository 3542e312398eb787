#include "anisodg/precond.hpp"

#include <algorithm>

#include "anisodg/assembly.hpp"
#include "anisodg/direct.hpp"
#include "anisodg/krylov.hpp"

namespace anisodg {

PrecondVariant parse_variant(const std::string& name)
{
    if (name == "bdg-exact" || name == "exact") return PrecondVariant::Exact;
    if (name == "bdg-inexact" || name == "inexact") return PrecondVariant::Inexact;
    throw Error("unknown preconditioner variant '" + name + "'");
}

std::vector<DofBlock> build_line_blocks(const Mesh& mesh, const DofMap& cg, const CsrMatrix& a_cg_full,
                                        LineDirection direction)
{
    if (!is_annulus(mesh.spec.family)) {
        throw Error("build_line_blocks: line blocks need an annulus mesh");
    }
    if (a_cg_full.rows() != cg.num_dofs) {
        throw Error("build_line_blocks: stiffness must be indexed by all CG dofs");
    }
    const auto& lines = direction == LineDirection::Radial ? mesh.radial_lines : mesh.circular_lines;
    if (lines.empty()) {
        throw Error("build_line_blocks: mesh carries no line metadata");
    }
    const auto rp = a_cg_full.row_ptr();
    const auto ci = a_cg_full.col_index();
    std::vector<DofBlock> blocks;
    for (const auto& line : lines) {
        DofBlock block;
        for (int v : line) {
            const int d = cg.vertex_dof[v];
            for (int p = rp[d]; p < rp[d + 1]; ++p) {
                const int f = cg.free_index[ci[p]];
                if (f >= 0) {
                    block.push_back(f);
                }
            }
        }
        std::sort(block.begin(), block.end());
        block.erase(std::unique(block.begin(), block.end()), block.end());
        blocks.push_back(std::move(block));
    }
    return blocks;
}

PreconditionerStack::PreconditionerStack(PrecondVariant variant, int k, LinearOperator s_dg,
                                         LinearOperator cg_branch, CsrMatrix pi, bool symmetric)
    : variant_(variant),
      k_(k),
      s_dg_(std::move(s_dg)),
      cg_branch_(std::move(cg_branch)),
      pi_(std::move(pi)),
      pi_t_(pi_.transpose()),
      symmetric_(symmetric)
{
    if (s_dg_.rows() != pi_.rows() || cg_branch_.rows() != pi_.cols()) {
        throw Error("PreconditionerStack: inconsistent component dimensions");
    }
}

void PreconditionerStack::apply(std::span<const double> r, std::span<double> z) const
{
    std::vector<double> rc(pi_t_.rows());
    std::vector<double> zc(pi_t_.rows());
    s_dg_.apply(r, z);
    pi_t_.multiply(r, rc);
    cg_branch_.apply(rc, zc);
    std::vector<double> zf(pi_.rows());
    pi_.multiply(zc, zf);
    kernels::axpy(1.0, zf, z);
}

LinearOperator PreconditionerStack::as_operator(std::shared_ptr<const PreconditionerStack> stack)
{
    const int n = stack->size();
    const bool sym = stack->symmetric_;
    return {n, n, [stack](std::span<const double> r, std::span<double> z) { stack->apply(r, z); }, sym};
}

InnerStats PreconditionerStack::inner_stats() const
{
    InnerStats s;
    if (counters_) {
        s.applications = counters_->applications.load();
        s.iterations = counters_->iterations.load();
        s.not_converged = counters_->not_converged.load();
    }
    return s;
}

LinearOperator exact_cg_solver(const CsrMatrix& a_cg)
{
    try {
        auto solver = std::make_shared<const SparseDirectSolver>(a_cg, SparseDirectSolver::Kind::Cholesky);
        return SparseDirectSolver::as_operator(solver);
    } catch (const Error&) {
        // Fall back to a tightly converged AMG-preconditioned CG.
    }
    auto mat = std::make_shared<const CsrMatrix>(a_cg);
    auto amg = std::make_shared<const AmgHierarchy>(a_cg);
    const int n = a_cg.rows();
    return {n, n,
            [mat, amg](std::span<const double> r, std::span<double> z) {
                std::fill(z.begin(), z.end(), 0.0);
                const auto op = LinearOperator::from_matrix(*mat, true);
                const auto m = AmgHierarchy::as_operator(amg);
                const auto rep = cg_solve(op, r, z, {1e-12, 5000}, &m);
                if (!rep.converged) {
                    throw Error("exact CG solve did not converge; use the inexact variant");
                }
            },
            true};
}

std::shared_ptr<PreconditionerStack> build_bdg_exact(const CsrMatrix& a_dg, const CsrMatrix& a_cg,
                                                     const CsrMatrix& pi, const PrecondOptions& options)
{
    if (pi.rows() != a_dg.rows() || pi.cols() != a_cg.rows()) {
        throw Error("build_bdg_exact: dimension mismatch");
    }
    return std::make_shared<PreconditionerStack>(PrecondVariant::Exact, 0,
                                                 jacobi(a_dg, options.jacobi_omega, options.jacobi_sweeps),
                                                 exact_cg_solver(a_cg), pi, true);
}

LinearOperator build_bcg(const CgBranchInputs& in, const PrecondOptions& options)
{
    if (!in.cg || !in.a_cg) {
        throw Error("build_bcg: missing CG system");
    }
    const int k = in.cg->k;
    if (k == 1) {
        auto amg = std::make_shared<const AmgHierarchy>(*in.a_cg, options.amg);
        return AmgHierarchy::as_operator(amg);
    }
    if (!in.mesh || !in.a_cg_full || !in.cg1 || !in.a_linear) {
        throw Error("build_bcg: degree >= 2 needs mesh lines and the linear system");
    }
    if (in.mesh->radial_lines.empty() || in.mesh->circular_lines.empty()) {
        throw Error("build_bcg: mesh carries no line metadata");
    }
    const int n = in.a_cg->rows();
    LinearOperator s_cg;
    auto zero = LinearOperator(n, n, [](std::span<const double>, std::span<double> z) {
        std::fill(z.begin(), z.end(), 0.0);
    }, true);
    LinearOperator s_rad = zero;
    LinearOperator s_cir = zero;
    if (options.use_radial) {
        auto s = std::make_shared<const AdditiveSchwarz>(
            *in.a_cg, build_line_blocks(*in.mesh, *in.cg, *in.a_cg_full, LineDirection::Radial),
            options.schwarz_dense_limit, options.schwarz_weight);
        s_rad = AdditiveSchwarz::as_operator(s);
    }
    if (options.use_circular) {
        auto s = std::make_shared<const AdditiveSchwarz>(
            *in.a_cg, build_line_blocks(*in.mesh, *in.cg, *in.a_cg_full, LineDirection::Circular),
            options.schwarz_dense_limit, options.schwarz_weight);
        s_cir = AdditiveSchwarz::as_operator(s);
    }
    s_cg = multiplicative_combine(s_cir, s_rad, *in.a_cg);

    auto i_lin = std::make_shared<const CsrMatrix>(build_linear_inclusion(*in.mesh, *in.cg, *in.cg1, true));
    auto q = std::make_shared<const CsrMatrix>(i_lin->transpose());
    auto amg = std::make_shared<const AmgHierarchy>(*in.a_linear, options.amg);
    if (i_lin->cols() != amg->size()) {
        throw Error("build_bcg: linear system does not match the linear inclusion");
    }
    return {n, n,
            [s_cg, i_lin, q, amg](std::span<const double> r, std::span<double> z) {
                s_cg.apply(r, z);
                std::vector<double> rl(q->rows());
                std::vector<double> zl(q->rows());
                q->multiply(r, rl);
                amg->vcycle(rl, zl);
                std::vector<double> zk(i_lin->rows());
                i_lin->multiply(zl, zk);
                kernels::axpy(1.0, zk, z);
            },
            false};
}

std::shared_ptr<PreconditionerStack> build_bdg_inexact(const CsrMatrix& a_dg, const CgBranchInputs& in,
                                                       const CsrMatrix& pi, const PrecondOptions& options)
{
    if (!in.cg || !in.a_cg || pi.rows() != a_dg.rows() || pi.cols() != in.a_cg->rows()) {
        throw Error("build_bdg_inexact: dimension mismatch");
    }
    const int k = in.cg->k;
    auto s_dg = jacobi(a_dg, options.jacobi_omega, options.jacobi_sweeps);
    if (k == 1) {
        return std::make_shared<PreconditionerStack>(PrecondVariant::Inexact, 1, s_dg, build_bcg(in, options),
                                                     pi, true);
    }
    const LinearOperator bcg = build_bcg(in, options);
    auto mat = std::make_shared<const CsrMatrix>(*in.a_cg);
    auto counters = std::make_shared<PreconditionerStack::Counters>();
    GmresOptions inner;
    inner.tol = options.inner_tol;
    inner.max_iterations = options.inner_max_iterations;
    inner.restart = options.inner_max_iterations;
    const int n = mat->rows();
    LinearOperator branch(n, n,
                          [bcg, mat, inner, counters](std::span<const double> r, std::span<double> z) {
                              std::fill(z.begin(), z.end(), 0.0);
                              const auto op = LinearOperator::from_matrix(*mat, true);
                              const auto rep = gmres_solve(op, r, z, inner, &bcg);
                              counters->applications += 1;
                              counters->iterations += rep.iterations;
                              if (!rep.converged) {
                                  counters->not_converged += 1;
                              }
                          },
                          false);
    auto stack = std::make_shared<PreconditionerStack>(PrecondVariant::Inexact, k, s_dg, branch, pi, false);
    stack->attach_counters(counters);
    return stack;
}

AuxiliarySystems build_auxiliary(const Mesh& mesh, const DofMap& dg, const ProblemCase& problem,
                                 bool need_linear)
{
    AuxiliarySystems aux;
    aux.cg = build_dofmap(mesh, dg.k, Continuity::CG);
    aux.pi = build_inclusion(mesh, aux.cg, dg, true);
    aux.a_cg_full = assemble_cg_stiffness(mesh, aux.cg, problem);
    std::vector<int> keep;
    for (int g = 0; g < aux.cg.num_dofs; ++g) {
        if (aux.cg.free_index[g] >= 0) {
            keep.push_back(g);
        }
    }
    aux.a_cg = aux.a_cg_full.submatrix(keep);
    if (need_linear) {
        aux.cg1 = build_dofmap(mesh, 1, Continuity::CG);
        aux.a_linear = assemble_cg(mesh, aux.cg1, problem).a;
    }
    return aux;
}

std::shared_ptr<PreconditionerStack> build_preconditioner(PrecondVariant variant, const Mesh& mesh,
                                                          const DofMap& dg, const ProblemCase& problem,
                                                          const CsrMatrix& a_dg, const PrecondOptions& options)
{
    const bool need_linear = variant == PrecondVariant::Inexact && dg.k >= 2;
    const AuxiliarySystems aux = build_auxiliary(mesh, dg, problem, need_linear);
    if (variant == PrecondVariant::Exact) {
        return build_bdg_exact(a_dg, aux.a_cg, aux.pi, options);
    }
    CgBranchInputs in;
    in.mesh = &mesh;
    in.cg = &aux.cg;
    in.a_cg = &aux.a_cg;
    in.a_cg_full = &aux.a_cg_full;
    in.cg1 = need_linear ? &aux.cg1 : nullptr;
    in.a_linear = need_linear ? &aux.a_linear : nullptr;
    return build_bdg_inexact(a_dg, in, aux.pi, options);
}

} // namespace anisodg
