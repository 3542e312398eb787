#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>

#include <Eigen/Dense>

#include "anisodg/amg.hpp"
#include "anisodg/assembly.hpp"
#include "anisodg/condition.hpp"
#include "anisodg/direct.hpp"
#include "anisodg/precond.hpp"
#include "anisodg/smoothers.hpp"

namespace anisodg::properties {

namespace {

constexpr double pi = 3.14159265358979323846;

struct Setup {
    std::string case_name;
    MeshFamily family;
    int n = 2;  ///< n_x = n_y, or n_r with n_theta = 4 n_r
};

Mesh make_mesh(const ProblemCase& pc, MeshFamily family, int n)
{
    MeshSpec s = pc.domain;
    s.family = family;
    s.n_r = n;
    s.n_theta = 4 * n;
    s.n_x = n;
    s.n_y = n;
    return build_mesh(s);
}

const std::vector<Setup>& small_setups()
{
    static const std::vector<Setup> setups{
        {"polynomial_patch", MeshFamily::RectQuad, 2}, {"polynomial_patch", MeshFamily::RectTri, 2},
        {"polynomial_patch", MeshFamily::RectTri, 4},  {"two_islands", MeshFamily::RectQuad, 4},
        {"annulus_omega", MeshFamily::AnnulusQuad, 2}, {"annulus_omega", MeshFamily::AnnulusTri, 2},
        {"vertical_field_square", MeshFamily::RectTri, 3},
    };
    return setups;
}

double relative_max_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

} // namespace

double ipdg_asymmetry()
{
    double worst = 0.0;
    for (const auto& s : small_setups()) {
        for (double d : {1.0, 1e6}) {
            const auto pc = get_case(s.case_name, {d, 1.0, 1.0});
            const Mesh mesh = make_mesh(pc, s.family, s.n);
            for (int k = 1; k <= 3; ++k) {
                const DofMap dg = build_dofmap(mesh, k, Continuity::DG);
                for (auto p : {PenaltyChoice::Alpha1, PenaltyChoice::Alpha2}) {
                    const auto sys = assemble_ipdg(mesh, dg, pc, 1.0, p);
                    worst = std::max(worst, sys.a.asymmetry() / sys.a.max_abs());
                }
            }
        }
    }
    return worst;
}

double ipdg_min_eigenvalue_ratio(double d_par)
{
    double worst = 1.0;
    for (const auto& s : small_setups()) {
        const auto pc = get_case(s.case_name, {d_par, 1.0, 1.0});
        const Mesh mesh = make_mesh(pc, s.family, s.n);
        for (int k = 1; k <= 3; ++k) {
            const DofMap dg = build_dofmap(mesh, k, Continuity::DG);
            for (auto p : {PenaltyChoice::Alpha1, PenaltyChoice::Alpha2}) {
                const auto sys = assemble_ipdg(mesh, dg, pc, 1.0, p);
                const auto o = dense_oracle(sys.a, true);
                const double ratio = o.eigenvalues(0) / o.eigenvalues(o.eigenvalues.size() - 1);
                worst = std::min(worst, ratio);
            }
        }
    }
    return worst;
}

double cg_subspace_mismatch()
{
    double worst = 0.0;
    for (const auto& s : small_setups()) {
        for (double d : {1.0, 1e6}) {
            const auto pc = get_case(s.case_name, {d, 1.0, 1.0});
            const Mesh mesh = make_mesh(pc, s.family, s.n);
            for (int k = 1; k <= 3; ++k) {
                const DofMap dg = build_dofmap(mesh, k, Continuity::DG);
                const DofMap cg = build_dofmap(mesh, k, Continuity::CG);
                const CsrMatrix pi = build_inclusion(mesh, cg, dg, true);
                const auto a_dg = assemble_ipdg(mesh, dg, pc).a;
                const auto a_cg = assemble_cg(mesh, cg, pc).a;
                const CsrMatrix galerkin = multiply(pi.transpose(), multiply(a_dg, pi));
                worst = std::max(worst, relative_max_diff(galerkin.to_dense(), a_cg.to_dense()));
            }
        }
    }
    return worst;
}

double inclusion_jump()
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (const auto& s : small_setups()) {
        const auto pc = get_case(s.case_name);
        const Mesh mesh = make_mesh(pc, s.family, s.n);
        for (int k = 1; k <= 4; ++k) {
            const DofMap dg = build_dofmap(mesh, k, Continuity::DG);
            const DofMap cg = build_dofmap(mesh, k, Continuity::CG);
            const CsrMatrix pi = build_inclusion(mesh, cg, dg, false);
            std::vector<double> v(cg.num_dofs);
            for (auto& x : v) {
                x = u(gen);
            }
            const auto w = pi.multiply(v);
            const auto rule = face_quadrature(2 * k + 2);
            for (int f = 0; f < mesh.num_faces(); ++f) {
                const Face& face = mesh.faces[f];
                if (face.boundary()) {
                    continue;
                }
                const auto g = face_geometry(mesh, f, rule);
                for (std::size_t q = 0; q < g.points.size(); ++q) {
                    const double a = evaluate_field(mesh, dg, w, face.elem_minus, g.ref_minus[q]);
                    const double b = evaluate_field(mesh, dg, w, face.elem_plus, g.ref_plus[q]);
                    worst = std::max(worst, std::abs(a - b));
                }
            }
        }
    }
    return worst;
}

double patch_test_error()
{
    // x^2 y^2 lies in Q_2 and in P_4.
    struct Patch {
        MeshFamily family;
        int n;
        int k;
    };
    const std::vector<Patch> patches{{MeshFamily::RectQuad, 2, 2}, {MeshFamily::RectQuad, 3, 3},
                                     {MeshFamily::RectTri, 2, 4}, {MeshFamily::RectTri, 2, 5}};
    double worst = 0.0;
    for (const auto& p : patches) {
        for (double d : {1.0, 1e3}) {
            const auto pc = get_case("polynomial_patch", {d, 1.0, 1.0});
            const Mesh mesh = make_mesh(pc, p.family, p.n);
            const DofMap dg = build_dofmap(mesh, p.k, Continuity::DG);
            const auto sys = assemble_ipdg(mesh, dg, pc);
            SparseDirectSolver solver(sys.a);
            std::vector<double> x(sys.num_dofs);
            solver.solve(sys.rhs, x);
            const double err = l2_error(mesh, dg, x, pc);
            worst = std::max(worst, err / l2_norm(mesh, p.k, pc.exact));
        }
    }
    return worst;
}

double forcing_residual()
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (const auto& name : case_names()) {
        for (double d : {1.0, 1e4}) {
            const auto pc = get_case(name, {d, 1.0, 1.0});
            if (!pc.has_exact()) {
                continue;
            }
            const MeshSpec& dom = pc.domain;
            const bool annulus = is_annulus(dom.family);
            auto flux = [&](Vec2 x) { return pc.tensor(x) * pc.exact_gradient(x); };
            const double h = 1e-3;
            std::vector<double> res;
            std::vector<double> f;
            for (int i = 0; i < 100; ++i) {
                Vec2 x;
                if (annulus) {
                    // Keep the stencil inside the annulus.
                    const double r = dom.r_in + 0.01 + (dom.r_out - dom.r_in - 0.02) * u01(gen);
                    const double t = 2 * pi * u01(gen);
                    x = {r * std::cos(t), r * std::sin(t)};
                } else {
                    x = {dom.x0 + (dom.x1 - dom.x0) * u01(gen), dom.y0 + (dom.y1 - dom.y0) * u01(gen)};
                }
                auto d1 = [&](Vec2 e, bool first) {
                    auto c = [&](double s) {
                        const Vec2 q = flux(x + s * e);
                        return first ? q.x : q.y;
                    };
                    return (-c(2 * h) + 8 * c(h) - 8 * c(-h) + c(-2 * h)) / (12 * h);
                };
                const double div = d1({1.0, 0.0}, true) + d1({0.0, 1.0}, false);
                res.push_back(std::abs(-div - pc.forcing(x)));
                f.push_back(std::abs(pc.forcing(x)));
            }
            const double scale = *std::max_element(f.begin(), f.end());
            worst = std::max(worst, *std::max_element(res.begin(), res.end()) / scale);
        }
    }
    return worst;
}

double amg_contraction()
{
    const auto pc = get_case("isotropic_sine");
    MeshSpec s = pc.domain;
    s.family = MeshFamily::RectQuad;
    s.n_x = 64;
    s.n_y = 64;
    const Mesh mesh = build_mesh(s);
    const DofMap cg = build_dofmap(mesh, 1, Continuity::CG);
    const auto a = assemble_cg(mesh, cg, pc).a;
    const AmgHierarchy amg(a);
    const int n = a.rows();
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> b(n), x(n, 0.0), r(n), z(n);
    for (auto& v : b) {
        v = u(gen);
    }
    double prev = kernels::nrm2(b);
    double worst = 0.0;
    for (int it = 0; it < 10; ++it) {
        a.multiply(x, r);
        for (int i = 0; i < n; ++i) {
            r[i] = b[i] - r[i];
        }
        amg.vcycle(r, z);
        kernels::axpy(1.0, z, x);
        a.multiply(x, r);
        for (int i = 0; i < n; ++i) {
            r[i] = b[i] - r[i];
        }
        const double now = kernels::nrm2(r);
        worst = std::max(worst, now / prev);
        prev = now;
    }
    return worst;
}

CondestRange condest_ratios()
{
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> size(4, 60);
    std::uniform_real_distribution<double> expo(0.0, 8.0);
    CondestRange range{1e300, 0.0};
    for (int m = 0; m < 50; ++m) {
        const int n = size(gen);
        Eigen::MatrixXd b(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                b(i, j) = u(gen);
            }
        }
        // Graded column scaling spreads the spectrum over several decades.
        const double spread = expo(gen);
        Eigen::VectorXd scale(n);
        for (int j = 0; j < n; ++j) {
            scale(j) = std::pow(10.0, -spread * j / std::max(1, n - 1));
        }
        const Eigen::MatrixXd bs = b * scale.asDiagonal();
        const Eigen::MatrixXd dense = bs.transpose() * bs + 1e-3 * Eigen::MatrixXd::Identity(n, n);
        const CsrMatrix a = CsrMatrix::from_dense(dense);
        auto solver = std::make_shared<const SparseDirectSolver>(a);
        const double est = condest_1norm(a, SparseDirectSolver::as_operator(solver));
        const double exact = dense_oracle(dense, true).cond1;
        range.min_ratio = std::min(range.min_ratio, est / exact);
        range.max_ratio = std::max(range.max_ratio, est / exact);
    }
    return range;
}

double multiplicative_identity_error()
{
    const auto pc = get_case("test5_annulus", {1e4, 1.0, 1.0});
    MeshSpec s = pc.domain;
    s.n_r = 2;
    s.n_theta = 8;
    const Mesh mesh = build_mesh(s);
    const DofMap dg = build_dofmap(mesh, 2, Continuity::DG);
    const auto aux = build_auxiliary(mesh, dg, pc, false);
    const auto s_rad = AdditiveSchwarz::as_operator(std::make_shared<const AdditiveSchwarz>(
        aux.a_cg, build_line_blocks(mesh, aux.cg, aux.a_cg_full, LineDirection::Radial), 400, 0.0));
    const auto s_cir = AdditiveSchwarz::as_operator(std::make_shared<const AdditiveSchwarz>(
        aux.a_cg, build_line_blocks(mesh, aux.cg, aux.a_cg_full, LineDirection::Circular), 400, 0.0));
    const auto s_cg = multiplicative_combine(s_cir, s_rad, aux.a_cg);
    // Propagate each unit error through one combined step and through the two
    // factor steps in sequence.
    const int n = aux.a_cg.rows();
    auto step = [&](const LinearOperator& s, std::vector<double>& e) {
        const auto c = s(aux.a_cg.multiply(e));
        for (int i = 0; i < n; ++i) {
            e[i] -= c[i];
        }
    };
    double num = 0.0, den = 0.0;
    for (int j = 0; j < n; ++j) {
        std::vector<double> e1(n, 0.0);
        e1[j] = 1.0;
        std::vector<double> e2 = e1;
        step(s_cg, e1);
        step(s_rad, e2);
        step(s_cir, e2);
        for (int i = 0; i < n; ++i) {
            num += (e1[i] - e2[i]) * (e1[i] - e2[i]);
            den += e1[i] * e1[i];
        }
    }
    return std::sqrt(num / den);
}

std::vector<Check> run_all()
{
    std::vector<Check> out;
    auto add = [&](std::string name, double value, std::string bound, bool pass) {
        out.push_back({std::move(name), value, std::move(bound), pass});
    };
    double v = ipdg_asymmetry();
    add("IPDG symmetry (beta = 1)", v, "<= 1e-12", v <= 1e-12);
    for (double d : {1.0, 1e6}) {
        v = ipdg_min_eigenvalue_ratio(d);
        char name[64];
        std::snprintf(name, sizeof name, "A_DG positive definite, D_par = %g", d);
        add(name, v, "lambda_min / lambda_max > 1e-12", v > 1e-12);
    }
    v = cg_subspace_mismatch();
    add("Pi^T A_DG Pi = A_CG", v, "<= 1e-10", v <= 1e-10);
    v = inclusion_jump();
    add("jump of Pi v", v, "<= 1e-11", v <= 1e-11);
    v = patch_test_error();
    add("patch test", v, "<= 1e-9", v <= 1e-9);
    v = forcing_residual();
    add("forcing consistency", v, "<= 1e-6", v <= 1e-6);
    v = amg_contraction();
    add("AMG V-cycle contraction (64x64 Poisson)", v, "<= 0.5", v <= 0.5);
    const auto c = condest_ratios();
    add("condest / kappa_1, smallest", c.min_ratio, ">= 0.1", c.min_ratio >= 0.1);
    add("condest / kappa_1, largest", c.max_ratio, "<= 1 + 1e-10", c.max_ratio <= 1.0 + 1e-10);
    v = multiplicative_identity_error();
    add("multiplicative S_CG error propagation", v, "<= 1e-12", v <= 1e-12);
    return out;
}

} // namespace anisodg::properties
