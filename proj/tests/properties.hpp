#pragma once
// Measured quantities behind the property suite. Each function returns the
// worst value found over a fixed set of small problems; callers compare it
// with a threshold. Shared by the unit tests and the acceptance runner.

#include <string>
#include <vector>

namespace anisodg::properties {

/// max ||A - A^T||_max / ||A||_max over IPDG systems with beta = 1.
double ipdg_asymmetry();
/// min lambda_min / lambda_max of A_DG over tiny meshes, k <= 3, both penalties.
double ipdg_min_eigenvalue_ratio(double d_par);
/// max ||Pi^T A_DG Pi - A_CG||_max / ||A_CG||_max on the non-Dirichlet dofs.
double cg_subspace_mismatch();
/// max |[[Pi v]]| at face quadrature points over random v with |v| <= 1.
double inclusion_jump();
/// max ||u_h - u|| / ||u|| for polynomial exact solutions in the discrete space.
double patch_test_error();
/// max |-div(D grad u) - f| / max |f| at random points, every case with exact u.
double forcing_residual();
/// Largest per-cycle residual ratio of V-cycle iteration on 64x64 isotropic Poisson.
double amg_contraction();
struct CondestRange {
    double min_ratio = 0.0;  ///< min estimate / kappa_1
    double max_ratio = 0.0;  ///< max estimate / kappa_1
};
/// condest against the dense kappa_1 on 50 random SPD matrices.
CondestRange condest_ratios();
/// ||(I - S A) - (I - S_cir A)(I - S_rad A)||_F / ||I - S A||_F on a tiny annulus.
double multiplicative_identity_error();

struct Check {
    std::string name;
    double value = 0.0;
    std::string bound;
    bool pass = false;
};
/// Every property with its threshold.
std::vector<Check> run_all();

} // namespace anisodg::properties
