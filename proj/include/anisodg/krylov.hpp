#pragma once

#include <span>
#include <string>
#include <vector>

#include "anisodg/sparse.hpp"

namespace anisodg {

struct SolveReport {
    int iterations = 0;
    /// ||r_i|| / ||r_0||, one entry per iteration plus the initial one.
    std::vector<double> residuals{};
    bool converged = false;
    bool stagnated = false;
    double seconds = 0.0;

    double final_residual() const { return residuals.empty() ? 1.0 : residuals.back(); }
};

struct CgOptions {
    double tol = 1e-6;
    int max_iterations = 5000;
};

struct GmresOptions {
    double tol = 1e-6;
    int max_iterations = 5000;
    int restart = 200;
    /// Keep the preconditioned directions so the preconditioner may change
    /// between applications (FGMRES).
    bool flexible = false;
};

/// (Preconditioned) conjugate gradients. `x` holds the initial guess on entry.
/// Convergence is ||b - A x|| <= tol * ||r_0||. Throws when p^T A p <= 0.
SolveReport cg_solve(const LinearOperator& a, std::span<const double> b, std::span<double> x,
                     const CgOptions& options = {}, const LinearOperator* preconditioner = nullptr);

/// Right-preconditioned restarted GMRES; with `flexible` set this is FGMRES.
SolveReport gmres_solve(const LinearOperator& a, std::span<const double> b, std::span<double> x,
                        const GmresOptions& options = {}, const LinearOperator* preconditioner = nullptr);

} // namespace anisodg
