#include "anisodg/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "anisodg/basis.hpp"

namespace anisodg {

namespace {

// Clusters points lying within tol of each other. Returns a cluster id per
// point, numbered by first appearance.
std::vector<int> cluster_points(const std::vector<Vec2>& pts, double tol)
{
    const int n = static_cast<int>(pts.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return pts[a].x < pts[b].x || (pts[a].x == pts[b].x && a < b);
    });
    std::vector<int> rep(n, -1);
    for (int s = 0; s < n; ++s) {
        const int a = order[s];
        if (rep[a] >= 0) {
            continue;
        }
        rep[a] = a;
        for (int t = s + 1; t < n && pts[order[t]].x - pts[a].x <= tol; ++t) {
            const int b = order[t];
            if (rep[b] < 0 && norm(pts[b] - pts[a]) <= tol) {
                rep[b] = a;
            }
        }
    }
    // Representatives are arbitrary members; renumber by first appearance.
    std::vector<int> id(n, -1);
    std::vector<int> cluster(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        const int r = rep[i];
        if (id[r] < 0) {
            id[r] = next++;
        }
        cluster[i] = id[r];
    }
    return cluster;
}

} // namespace

DofMap build_dofmap(const Mesh& mesh, int k, Continuity continuity)
{
    DofMap d;
    d.continuity = continuity;
    d.k = k;
    const int ne = mesh.num_elements();
    d.element_dofs.resize(ne);

    std::vector<Vec2> local_points;
    std::vector<int> local_offset(ne + 1, 0);
    for (int e = 0; e < ne; ++e) {
        const auto& basis = *nodal_basis(mesh.elements[e].kind, k);
        for (const Vec2& node : basis.nodes()) {
            local_points.push_back(geometry_eval(mesh, e, node).x);
        }
        local_offset[e + 1] = static_cast<int>(local_points.size());
    }

    if (continuity == Continuity::DG) {
        d.num_dofs = static_cast<int>(local_points.size());
        d.dof_points = local_points;
        for (int e = 0; e < ne; ++e) {
            for (int i = local_offset[e]; i < local_offset[e + 1]; ++i) {
                d.element_dofs[e].push_back(i);
            }
        }
        return d;
    }

    const double tol = 1e-9 * mesh.h;
    const auto cluster = cluster_points(local_points, tol);
    d.num_dofs = cluster.empty() ? 0 : *std::max_element(cluster.begin(), cluster.end()) + 1;
    d.dof_points.resize(d.num_dofs);
    for (int e = 0; e < ne; ++e) {
        for (int i = local_offset[e]; i < local_offset[e + 1]; ++i) {
            d.element_dofs[e].push_back(cluster[i]);
            d.dof_points[cluster[i]] = local_points[i];
        }
    }

    // Shared edges must carry the same dofs in reversed order.
    for (const auto& f : mesh.faces) {
        if (f.boundary()) {
            continue;
        }
        const auto& bm = *nodal_basis(mesh.elements[f.elem_minus].kind, k);
        const auto& bp = *nodal_basis(mesh.elements[f.elem_plus].kind, k);
        const auto& nm = bm.edge_nodes(f.edge_minus);
        const auto& np = bp.edge_nodes(f.edge_plus);
        for (std::size_t a = 0; a < nm.size(); ++a) {
            const int gm = d.element_dofs[f.elem_minus][nm[a]];
            const int gp = d.element_dofs[f.elem_plus][np[np.size() - 1 - a]];
            if (gm != gp) {
                throw Error("build_dofmap: inconsistent shared-node locations");
            }
        }
    }

    d.on_boundary.assign(d.num_dofs, 0);
    d.dirichlet.assign(d.num_dofs, 0);
    for (const auto& f : mesh.faces) {
        if (!f.boundary()) {
            continue;
        }
        const auto& b = *nodal_basis(mesh.elements[f.elem_minus].kind, k);
        for (int node : b.edge_nodes(f.edge_minus)) {
            const int g = d.element_dofs[f.elem_minus][node];
            d.on_boundary[g] = 1;
            if (f.tag == BoundaryTag::Dirichlet) {
                d.dirichlet[g] = 1;
            }
        }
    }
    d.free_index.assign(d.num_dofs, -1);
    for (int g = 0; g < d.num_dofs; ++g) {
        if (!d.dirichlet[g]) {
            d.free_index[g] = d.num_free++;
        }
    }

    d.vertex_dof.assign(mesh.vertices.size(), -1);
    for (int e = 0; e < ne; ++e) {
        const auto& el = mesh.elements[e];
        const auto& b = *nodal_basis(el.kind, k);
        for (int v = 0; v < el.num_vertices(); ++v) {
            d.vertex_dof[el.vertices[v]] = d.element_dofs[e][b.vertex_node(v)];
        }
    }
    return d;
}

CsrMatrix build_inclusion(const Mesh& mesh, const DofMap& cg, const DofMap& dg, bool free_only)
{
    if (cg.continuity != Continuity::CG || dg.continuity != Continuity::DG || cg.k != dg.k ||
        cg.element_dofs.size() != dg.element_dofs.size()) {
        throw Error("build_inclusion: incompatible dof maps");
    }
    const double tol = 1e-9 * mesh.h;
    std::vector<Triplet> t;
    for (std::size_t e = 0; e < dg.element_dofs.size(); ++e) {
        const auto& rows = dg.element_dofs[e];
        const auto& cols = cg.element_dofs[e];
        if (rows.size() != cols.size()) {
            throw Error("build_inclusion: node mismatch");
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (norm(dg.dof_points[rows[i]] - cg.dof_points[cols[i]]) > tol) {
                throw Error("build_inclusion: node mismatch");
            }
            const int c = free_only ? cg.free_index[cols[i]] : cols[i];
            if (c >= 0) {
                t.push_back({rows[i], c, 1.0});
            }
        }
    }
    return CsrMatrix::from_triplets(dg.num_dofs, free_only ? cg.num_free : cg.num_dofs,
                                    std::move(t));
}

CsrMatrix build_linear_inclusion(const Mesh& mesh, const DofMap& cg_k, const DofMap& cg_1,
                                 bool free_only)
{
    if (cg_1.k != 1 || cg_k.continuity != Continuity::CG || cg_1.continuity != Continuity::CG) {
        throw Error("build_linear_inclusion: expected a degree-1 CG target");
    }
    std::vector<char> done(cg_k.num_dofs, 0);
    std::vector<Triplet> t;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto kind = mesh.elements[e].kind;
        const auto& bk = *nodal_basis(kind, cg_k.k);
        const auto& b1 = *nodal_basis(kind, 1);
        std::vector<double> phi(b1.size());
        for (int i = 0; i < bk.size(); ++i) {
            const int g = cg_k.element_dofs[e][i];
            if (done[g]) {
                continue;
            }
            done[g] = 1;
            const int row = free_only ? cg_k.free_index[g] : g;
            if (row < 0) {
                continue;
            }
            b1.eval(bk.nodes()[i], phi.data());
            for (int j = 0; j < b1.size(); ++j) {
                if (std::abs(phi[j]) < 1e-14) {
                    continue;
                }
                const int g1 = cg_1.element_dofs[e][j];
                const int col = free_only ? cg_1.free_index[g1] : g1;
                if (col >= 0) {
                    t.push_back({row, col, phi[j]});
                }
            }
        }
    }
    return CsrMatrix::from_triplets(free_only ? cg_k.num_free : cg_k.num_dofs,
                                    free_only ? cg_1.num_free : cg_1.num_dofs, std::move(t));
}

std::vector<double> interpolate(const DofMap& dofs, const ScalarFn& fn)
{
    std::vector<double> v(dofs.num_dofs);
    for (int i = 0; i < dofs.num_dofs; ++i) {
        v[i] = fn(dofs.dof_points[i]);
    }
    return v;
}

double evaluate_field(const Mesh& mesh, const DofMap& dofs, std::span<const double> coeffs,
                      int element, Vec2 ref)
{
    const auto& b = *nodal_basis(mesh.elements[element].kind, dofs.k);
    double phi[(kMaxDegree + 1) * (kMaxDegree + 1)];
    b.eval(ref, phi);
    double v = 0.0;
    const auto& ed = dofs.element_dofs[element];
    for (int i = 0; i < b.size(); ++i) {
        v += phi[i] * coeffs[ed[i]];
    }
    return v;
}

std::vector<double> expand_free(const DofMap& cg, std::span<const double> free_values,
                                std::span<const double> dirichlet_values)
{
    std::vector<double> full(cg.num_dofs, 0.0);
    for (int g = 0; g < cg.num_dofs; ++g) {
        if (cg.free_index[g] >= 0) {
            full[g] = free_values[cg.free_index[g]];
        } else if (!dirichlet_values.empty()) {
            full[g] = dirichlet_values[g];
        }
    }
    return full;
}

} // namespace anisodg
