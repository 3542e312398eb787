#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "anisodg/mesh.hpp"
#include "anisodg/space.hpp"

namespace anisodg {

/// D = R diag(d_par, d_perp) R^T with R = [[b1, -b2], [b2, b1]].
/// Throws when |b| differs from 1 by more than 1e-8.
Mat2 diffusion_tensor(Vec2 b, double d_par, double d_perp);

struct ProblemParams {
    double d_par = 1.0;
    double d_perp = 1.0;
    /// Radial frequency of the annulus_omega solution.
    double omega = 1.0;
};

/// A diffusion problem -div(D grad u) = f with D built from a unit field b.
struct ProblemCase {
    std::string name;
    double d_par = 1.0;
    double d_perp = 1.0;
    /// Unit field direction; the zero vector marks points where the field is
    /// undefined, and there D = d_perp * I.
    std::function<Vec2(Vec2)> field;
    std::function<double(Vec2)> forcing;
    /// Empty when no closed-form solution is known.
    std::function<double(Vec2)> exact;
    std::function<Vec2(Vec2)> exact_gradient;
    /// Dirichlet data.
    std::function<double(Vec2)> dirichlet;
    /// Domain and boundary tags; counts are left for the caller.
    MeshSpec domain;

    bool has_exact() const { return static_cast<bool>(exact); }
    Mat2 tensor(Vec2 x) const;
};

std::vector<std::string> case_names();
/// Throws on an unknown name or invalid parameters.
ProblemCase get_case(const std::string& name, const ProblemParams& params = {});

/// Case with constant field direction b, constant coefficients and a
/// user-supplied smooth exact solution (value, gradient, Hessian entries).
struct SmoothSolution {
    std::function<double(Vec2)> u;
    std::function<Vec2(Vec2)> grad;
    /// (u_xx, u_xy, u_yy)
    std::function<std::array<double, 3>(Vec2)> hessian;
};
ProblemCase constant_field_case(const std::string& name, Vec2 b, double d_par, double d_perp,
                                const SmoothSolution& solution, const MeshSpec& domain);

/// Volume quadrature exactness used for error norms: 2k+4 (+2 on curved elements).
int error_quadrature_exactness(int k, bool curved);

/// sqrt(sum_T int_T (u_h - u)^2). Throws when the case has no exact solution.
double l2_error(const Mesh& mesh, const DofMap& dofs, std::span<const double> coeffs,
                const ProblemCase& problem);
double l2_norm(const Mesh& mesh, int k, const std::function<double(Vec2)>& fn);

/// Locates the element containing x; returns false if none.
bool locate_point(const Mesh& mesh, Vec2 x, int& element, Vec2& ref);

struct TraceLine {
    Vec2 start;
    Vec2 end;
};

struct TraceSample {
    double s = 0.0;   ///< arclength from the start point
    Vec2 x;
    double value = 0.0;
};

struct TraceResult {
    std::vector<TraceSample> samples;
    int skipped = 0;
};

/// Samples u_h at n_points equally spaced points of the segment. Points that
/// fall outside the mesh are skipped and counted. With `normalize`, values are
/// divided by the maximum absolute sample.
TraceResult trace_sample(const Mesh& mesh, const DofMap& dofs, std::span<const double> coeffs,
                         const TraceLine& line, int n_points, bool normalize = false);

/// order_i = log(e_{i-1}/e_i) / log(h_{i-1}/h_i); result has size n-1.
std::vector<double> convergence_order(std::span<const double> errors, std::span<const double> hs);

} // namespace anisodg
