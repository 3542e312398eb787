#include "anisodg/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "anisodg/basis.hpp"
#include "anisodg/matrix_market.hpp"

namespace anisodg {

PenaltyChoice parse_penalty(const std::string& name)
{
    if (name == "alpha1") return PenaltyChoice::Alpha1;
    if (name == "alpha2") return PenaltyChoice::Alpha2;
    throw Error("unknown penalty choice '" + name + "'");
}

std::string penalty_name(PenaltyChoice choice)
{
    return choice == PenaltyChoice::Alpha1 ? "alpha1" : "alpha2";
}

int assembly_quadrature_exactness(int k, bool curved) { return 2 * k + 2 + (curved ? 2 : 0); }

double penalty_value(PenaltyChoice choice, int k, double h_face, const Mat2& d, Vec2 n, double d_par)
{
    if (!(h_face > 0.0)) {
        throw Error("penalty_value: nonpositive face length scale");
    }
    const double c = 4.0 * k * (k + 1) / h_face;
    if (choice == PenaltyChoice::Alpha1) {
        return c * d_par;
    }
    return c * dot(n, d * n);
}

namespace {

// Basis values and reference gradients at the points of a volume rule.
struct Tabulation {
    int nb = 0;
    std::vector<double> phi;  // q * nb + i
    std::vector<Vec2> dphi;
};

Tabulation tabulate(const ReferenceBasis& basis, const std::vector<Vec2>& points)
{
    Tabulation t;
    t.nb = basis.size();
    t.phi.resize(points.size() * t.nb);
    t.dphi.resize(points.size() * t.nb);
    for (std::size_t q = 0; q < points.size(); ++q) {
        basis.eval(points[q], &t.phi[q * t.nb]);
        basis.eval_grad(points[q], &t.dphi[q * t.nb]);
    }
    return t;
}

// Physical gradients: J^{-T} * reference gradient.
void physical_gradients(const Mat2& jac, const Vec2* ref, int n, Vec2* out)
{
    const Mat2 jit = jac.inverse().transpose();
    for (int i = 0; i < n; ++i) {
        out[i] = jit * ref[i];
    }
}

struct ElementRules {
    QuadRule rule;
    Tabulation tab;
};

// Element stiffness (row-major nb x nb) and load vector.
void element_matrices(const Mesh& mesh, int e, const ReferenceBasis& basis, const ElementRules& er,
                      const ProblemCase& problem, std::vector<double>& ke, std::vector<double>& fe)
{
    const int nb = basis.size();
    ke.assign(static_cast<std::size_t>(nb) * nb, 0.0);
    fe.assign(nb, 0.0);
    std::vector<Vec2> grad(nb);
    std::vector<Vec2> dgrad(nb);
    for (std::size_t q = 0; q < er.rule.size(); ++q) {
        const auto g = geometry_eval(mesh, e, er.rule.points[q]);
        const double w = er.rule.weights[q] * g.det;
        physical_gradients(g.jacobian, &er.tab.dphi[q * nb], nb, grad.data());
        const Mat2 d = problem.tensor(g.x);
        for (int j = 0; j < nb; ++j) {
            dgrad[j] = d * grad[j];
        }
        for (int i = 0; i < nb; ++i) {
            double* row = &ke[static_cast<std::size_t>(i) * nb];
            const Vec2 gi = grad[i];
            for (int j = 0; j < nb; ++j) {
                row[j] += w * dot(dgrad[j], gi);
            }
        }
        const double f = problem.forcing(g.x) * w;
        const double* phi = &er.tab.phi[q * nb];
        for (int i = 0; i < nb; ++i) {
            fe[i] += f * phi[i];
        }
    }
}

class RuleCache {
public:
    RuleCache(int k) : k_(k) {}
    const ElementRules& get(const Element& el)
    {
        const int slot = (el.kind == ElementKind::Triangle ? 0 : 2) + (el.polar ? 1 : 0);
        auto& r = rules_[slot];
        if (r.tab.nb == 0) {
            r.rule = volume_quadrature(el.kind, assembly_quadrature_exactness(k_, el.polar));
            r.tab = tabulate(*nodal_basis(el.kind, k_), r.rule.points);
        }
        return r;
    }

private:
    int k_;
    std::array<ElementRules, 4> rules_{};
};

} // namespace

CsrMatrix assemble_cg_stiffness(const Mesh& mesh, const DofMap& cg, const ProblemCase& problem)
{
    if (cg.continuity != Continuity::CG) {
        throw Error("assemble_cg: expected a CG dof map");
    }
    RuleCache cache(cg.k);
    std::vector<Triplet> t;
    std::vector<double> ke, fe;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.elements[e];
        const auto& basis = *nodal_basis(el.kind, cg.k);
        element_matrices(mesh, e, basis, cache.get(el), problem, ke, fe);
        const auto& ed = cg.element_dofs[e];
        const int nb = basis.size();
        for (int i = 0; i < nb; ++i) {
            for (int j = 0; j < nb; ++j) {
                t.push_back({ed[i], ed[j], ke[static_cast<std::size_t>(i) * nb + j]});
            }
        }
    }
    return CsrMatrix::from_triplets(cg.num_dofs, cg.num_dofs, std::move(t));
}

AssembledSystem assemble_cg(const Mesh& mesh, const DofMap& cg, const ProblemCase& problem)
{
    if (cg.continuity != Continuity::CG) {
        throw Error("assemble_cg: expected a CG dof map");
    }
    RuleCache cache(cg.k);
    std::vector<Triplet> t;
    std::vector<double> load(cg.num_dofs, 0.0);
    std::vector<double> ke, fe;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.elements[e];
        const auto& basis = *nodal_basis(el.kind, cg.k);
        element_matrices(mesh, e, basis, cache.get(el), problem, ke, fe);
        const auto& ed = cg.element_dofs[e];
        const int nb = basis.size();
        for (int i = 0; i < nb; ++i) {
            load[ed[i]] += fe[i];
            for (int j = 0; j < nb; ++j) {
                t.push_back({ed[i], ed[j], ke[static_cast<std::size_t>(i) * nb + j]});
            }
        }
    }
    const CsrMatrix full = CsrMatrix::from_triplets(cg.num_dofs, cg.num_dofs, std::move(t));

    AssembledSystem sys;
    sys.scheme = Scheme::CG;
    sys.k = cg.k;
    sys.num_dofs = cg.num_free;
    sys.dirichlet_values.assign(cg.num_dofs, 0.0);
    for (int g = 0; g < cg.num_dofs; ++g) {
        if (cg.dirichlet[g]) {
            sys.dirichlet_values[g] = problem.dirichlet(cg.dof_points[g]);
        }
    }
    const auto lifted = full.multiply(sys.dirichlet_values);
    std::vector<int> keep;
    for (int g = 0; g < cg.num_dofs; ++g) {
        if (cg.free_index[g] >= 0) {
            keep.push_back(g);
        }
    }
    sys.a = full.submatrix(keep);
    sys.rhs.resize(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        sys.rhs[i] = load[keep[i]] - lifted[keep[i]];
    }
    return sys;
}

AssembledSystem assemble_ipdg(const Mesh& mesh, const DofMap& dg, const ProblemCase& problem,
                              double beta, PenaltyChoice penalty)
{
    if (dg.continuity != Continuity::DG) {
        throw Error("assemble_ipdg: expected a DG dof map");
    }
    if (beta != 1.0 && beta != -1.0) {
        throw Error("assemble_ipdg: beta must be +1 or -1");
    }
    const int k = dg.k;

    // Pattern: each element couples to itself and its face neighbours.
    std::vector<std::vector<int>> neighbours(mesh.num_elements());
    for (int e = 0; e < mesh.num_elements(); ++e) {
        neighbours[e].push_back(e);
    }
    for (const auto& f : mesh.faces) {
        if (!f.boundary()) {
            neighbours[f.elem_minus].push_back(f.elem_plus);
            neighbours[f.elem_plus].push_back(f.elem_minus);
        }
    }
    std::vector<std::vector<int>> row_cols(dg.num_dofs);
    for (int e = 0; e < mesh.num_elements(); ++e) {
        std::vector<int> cols;
        for (int n : neighbours[e]) {
            cols.insert(cols.end(), dg.element_dofs[n].begin(), dg.element_dofs[n].end());
        }
        for (int r : dg.element_dofs[e]) {
            row_cols[r] = cols;
        }
    }
    AssembledSystem sys;
    sys.scheme = Scheme::IPDG;
    sys.beta = beta;
    sys.penalty = penalty;
    sys.k = k;
    sys.num_dofs = dg.num_dofs;
    sys.a = CsrMatrix::from_pattern(dg.num_dofs, dg.num_dofs, std::move(row_cols));
    sys.rhs.assign(dg.num_dofs, 0.0);

    // DG element dofs are contiguous, so a block occupies consecutive columns.
    auto add_block = [&](int elem_row, int elem_col, const std::vector<double>& block, int nr, int nc) {
        const auto& rows = dg.element_dofs[elem_row];
        const int c0 = dg.element_dofs[elem_col][0];
        auto vals = sys.a.values();
        for (int i = 0; i < nr; ++i) {
            const long pos = sys.a.find(rows[i], c0);
            for (int j = 0; j < nc; ++j) {
                vals[pos + j] += block[static_cast<std::size_t>(i) * nc + j];
            }
        }
    };

    RuleCache cache(k);
    std::vector<double> ke, fe;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.elements[e];
        const auto& basis = *nodal_basis(el.kind, k);
        element_matrices(mesh, e, basis, cache.get(el), problem, ke, fe);
        add_block(e, e, ke, basis.size(), basis.size());
        const auto& ed = dg.element_dofs[e];
        for (int i = 0; i < basis.size(); ++i) {
            sys.rhs[ed[i]] += fe[i];
        }
    }

    std::vector<double> phi_m, phi_p;
    std::vector<Vec2> gref_m, gref_p, grad_m, grad_p;
    std::vector<double> flux_m, flux_p;  // (D grad phi) . n
    std::vector<double> bmm, bmp, bpm, bpp;
    for (int fi = 0; fi < mesh.num_faces(); ++fi) {
        const Face& f = mesh.faces[fi];
        if (f.boundary() && f.tag == BoundaryTag::Neumann) {
            continue;
        }
        const auto& em = mesh.elements[f.elem_minus];
        const bool curved = em.polar || (!f.boundary() && mesh.elements[f.elem_plus].polar);
        const auto rule = face_quadrature(assembly_quadrature_exactness(k, curved));
        const auto geo = face_geometry(mesh, fi, rule);
        const double hf = face_h(mesh, fi);
        const auto& basis_m = *nodal_basis(em.kind, k);
        const int nm = basis_m.size();
        phi_m.resize(nm);
        gref_m.resize(nm);
        grad_m.resize(nm);
        flux_m.resize(nm);

        if (f.boundary()) {
            bmm.assign(static_cast<std::size_t>(nm) * nm, 0.0);
            const auto& ed = dg.element_dofs[f.elem_minus];
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const Vec2 n = geo.normals[q];
                const double w = geo.weights[q];
                const Mat2 d = problem.tensor(geo.points[q]);
                const double alpha = penalty_value(penalty, k, hf, d, n, problem.d_par);
                const auto gm = geometry_eval(mesh, f.elem_minus, geo.ref_minus[q]);
                basis_m.eval(geo.ref_minus[q], phi_m.data());
                basis_m.eval_grad(geo.ref_minus[q], gref_m.data());
                physical_gradients(gm.jacobian, gref_m.data(), nm, grad_m.data());
                const Vec2 dn = d * n;  // D symmetric: (D grad) . n = grad . (D n)
                for (int i = 0; i < nm; ++i) {
                    flux_m[i] = dot(grad_m[i], dn);
                }
                for (int i = 0; i < nm; ++i) {
                    for (int j = 0; j < nm; ++j) {
                        bmm[static_cast<std::size_t>(i) * nm + j] +=
                            w * (-flux_m[j] * phi_m[i] - beta * flux_m[i] * phi_m[j] +
                                 alpha * phi_m[i] * phi_m[j]);
                    }
                }
                const double g = problem.dirichlet(geo.points[q]);
                for (int i = 0; i < nm; ++i) {
                    sys.rhs[ed[i]] += w * g * (-beta * flux_m[i] + alpha * phi_m[i]);
                }
            }
            add_block(f.elem_minus, f.elem_minus, bmm, nm, nm);
            continue;
        }

        const auto& ep = mesh.elements[f.elem_plus];
        const auto& basis_p = *nodal_basis(ep.kind, k);
        const int np = basis_p.size();
        phi_p.resize(np);
        gref_p.resize(np);
        grad_p.resize(np);
        flux_p.resize(np);
        bmm.assign(static_cast<std::size_t>(nm) * nm, 0.0);
        bmp.assign(static_cast<std::size_t>(nm) * np, 0.0);
        bpm.assign(static_cast<std::size_t>(np) * nm, 0.0);
        bpp.assign(static_cast<std::size_t>(np) * np, 0.0);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec2 n = geo.normals[q];
            const double w = geo.weights[q];
            const Mat2 d = problem.tensor(geo.points[q]);
            const double alpha = penalty_value(penalty, k, hf, d, n, problem.d_par);
            const Vec2 dn = d * n;
            const auto gm = geometry_eval(mesh, f.elem_minus, geo.ref_minus[q]);
            const auto gp = geometry_eval(mesh, f.elem_plus, geo.ref_plus[q]);
            basis_m.eval(geo.ref_minus[q], phi_m.data());
            basis_m.eval_grad(geo.ref_minus[q], gref_m.data());
            physical_gradients(gm.jacobian, gref_m.data(), nm, grad_m.data());
            basis_p.eval(geo.ref_plus[q], phi_p.data());
            basis_p.eval_grad(geo.ref_plus[q], gref_p.data());
            physical_gradients(gp.jacobian, gref_p.data(), np, grad_p.data());
            for (int i = 0; i < nm; ++i) {
                flux_m[i] = 0.5 * dot(grad_m[i], dn);
            }
            for (int i = 0; i < np; ++i) {
                flux_p[i] = 0.5 * dot(grad_p[i], dn);
            }
            // Jump signs: +1 on the minus side, -1 on the plus side.
            auto accumulate = [&](std::vector<double>& b, const std::vector<double>& phi_t,
                                  const std::vector<double>& flux_t, double st, int nt,
                                  const std::vector<double>& phi_s, const std::vector<double>& flux_s,
                                  double ss, int ns) {
                for (int i = 0; i < nt; ++i) {
                    for (int j = 0; j < ns; ++j) {
                        b[static_cast<std::size_t>(i) * ns + j] +=
                            w * (-flux_s[j] * st * phi_t[i] - beta * flux_t[i] * ss * phi_s[j] +
                                 alpha * st * ss * phi_t[i] * phi_s[j]);
                    }
                }
            };
            accumulate(bmm, phi_m, flux_m, 1.0, nm, phi_m, flux_m, 1.0, nm);
            accumulate(bmp, phi_m, flux_m, 1.0, nm, phi_p, flux_p, -1.0, np);
            accumulate(bpm, phi_p, flux_p, -1.0, np, phi_m, flux_m, 1.0, nm);
            accumulate(bpp, phi_p, flux_p, -1.0, np, phi_p, flux_p, -1.0, np);
        }
        add_block(f.elem_minus, f.elem_minus, bmm, nm, nm);
        add_block(f.elem_minus, f.elem_plus, bmp, nm, np);
        add_block(f.elem_plus, f.elem_minus, bpm, np, nm);
        add_block(f.elem_plus, f.elem_plus, bpp, np, np);
    }
    return sys;
}

void export_system(const AssembledSystem& system, const std::filesystem::path& matrix_path,
                   const std::filesystem::path& rhs_path)
{
    write_matrix_market(matrix_path, system.a);
    write_vector(rhs_path, system.rhs);
}

} // namespace anisodg
