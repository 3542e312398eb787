#pragma once

#include "anisodg/sparse.hpp"

namespace anisodg {

/// Hager-Higham estimate of ||A||_1 ||A^{-1}||_1. `solve` applies A^{-1};
/// `solve_transpose` applies A^{-T} and may be omitted for symmetric A.
/// Deterministic; never exceeds the true kappa_1 beyond round-off.
double condest_1norm(const CsrMatrix& a, const LinearOperator& solve, const LinearOperator* solve_transpose = nullptr);

/// Estimate of ||A^{-1}||_1 alone (same algorithm).
double inverse_norm1_estimate(const LinearOperator& solve, const LinearOperator* solve_transpose = nullptr);

struct Cond2Estimate {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double cond = 0.0;
    int iterations = 0;
    /// False when the Ritz values had not settled or Lanczos broke down early.
    bool converged = false;
};

struct LanczosOptions {
    int max_iterations = 300;
    double tol = 1e-6;
    unsigned seed = 12345;
};

/// Extreme eigenvalues of B A for SPD A and SPD B (B = I when null) by
/// Lanczos in the A-inner product with full reorthogonalization.
Cond2Estimate spd_cond2(const LinearOperator& a, const LinearOperator* b = nullptr, const LanczosOptions& options = {});

} // namespace anisodg
