#pragma once

#include <memory>
#include <vector>

#include <Eigen/Cholesky>

#include "anisodg/sparse.hpp"

namespace anisodg {

enum class AmgSmoother { GaussSeidel, Jacobi };

struct AmgParams {
    /// Symmetric strength: |a_ij| >= theta * sqrt(|a_ii a_jj|).
    double strength_theta = 0.08;
    /// Prolongator smoothing weight is prolongator_omega / rho(D^{-1} A).
    double prolongator_omega = 4.0 / 3.0;
    int coarse_size = 64;
    int max_levels = 20;
    int pre_sweeps = 1;
    int post_sweeps = 1;
    AmgSmoother smoother = AmgSmoother::GaussSeidel;
    double jacobi_omega = 2.0 / 3.0;
};

struct AmgLevel {
    CsrMatrix a;
    CsrMatrix p;  ///< prolongator to this level from the next coarser one
    CsrMatrix r;  ///< p^T
    std::vector<double> inv_diag;
    std::vector<int> aggregates;  ///< fine node -> aggregate id
};

/// Smoothed-aggregation hierarchy; V-cycles are symmetric (forward Gauss-Seidel
/// before, backward after) so the cycle is usable inside CG.
class AmgHierarchy {
public:
    AmgHierarchy(const CsrMatrix& a, const AmgParams& params = {});

    int num_levels() const { return static_cast<int>(levels_.size()); }
    const AmgLevel& level(int l) const { return levels_[l]; }
    const AmgParams& params() const { return params_; }
    int size() const { return levels_.front().a.rows(); }

    /// One V(pre, post) cycle from a zero initial guess: z ~ A^{-1} r.
    void vcycle(std::span<const double> r, std::span<double> z) const;

    static LinearOperator as_operator(std::shared_ptr<const AmgHierarchy> h);

private:
    void cycle(int l, std::span<const double> b, std::span<double> x) const;
    void smooth(int l, std::span<const double> b, std::span<double> x, bool forward) const;

    AmgParams params_;
    std::vector<AmgLevel> levels_;
    Eigen::LLT<Eigen::MatrixXd> coarse_;
};

/// Strength-of-connection graph (diagonal excluded).
CsrMatrix strength_graph(const CsrMatrix& a, double theta);
/// Greedy standard aggregation; returns node -> aggregate id and the count.
std::vector<int> aggregate(const CsrMatrix& strength, int& num_aggregates);
/// Largest eigenvalue of D^{-1} A by power iteration (deterministic start).
double spectral_radius_dinv_a(const CsrMatrix& a, int iterations = 20);

} // namespace anisodg
