#include "anisodg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include <json.hpp>

#include "anisodg/basis.hpp"
#include "anisodg/quadrature.hpp"

namespace anisodg {

MeshFamily parse_mesh_family(const std::string& name)
{
    if (name == "annulus-quad") return MeshFamily::AnnulusQuad;
    if (name == "annulus-tri") return MeshFamily::AnnulusTri;
    if (name == "rect-quad") return MeshFamily::RectQuad;
    if (name == "rect-tri") return MeshFamily::RectTri;
    throw Error("unknown mesh family '" + name + "'");
}

std::string mesh_family_name(MeshFamily family)
{
    switch (family) {
    case MeshFamily::AnnulusQuad: return "annulus-quad";
    case MeshFamily::AnnulusTri: return "annulus-tri";
    case MeshFamily::RectQuad: return "rect-quad";
    case MeshFamily::RectTri: return "rect-tri";
    }
    return "?";
}

bool is_annulus(MeshFamily family)
{
    return family == MeshFamily::AnnulusQuad || family == MeshFamily::AnnulusTri;
}

int num_boundary_segments(MeshFamily family) { return is_annulus(family) ? 2 : 4; }

void MeshSpec::validate() const
{
    if (is_annulus(family)) {
        if (!(r_in > 0.0 && r_in < r_out)) {
            throw Error("mesh: need 0 < r_in < r_out");
        }
        if (n_r < 1 || n_theta < 3) {
            throw Error("mesh: need N_r >= 1 and N_theta >= 3");
        }
    } else {
        if (!(x0 < x1 && y0 < y1)) {
            throw Error("mesh: need x0 < x1 and y0 < y1");
        }
        if (n_x < 1 || n_y < 1) {
            throw Error("mesh: need N_x, N_y >= 1");
        }
    }
    if (!(jitter_amplitude >= 0.0 && jitter_amplitude < 0.3)) {
        throw Error("mesh: jitter amplitude must lie in [0, 0.3)");
    }
    if (!boundary_tags.empty() &&
        static_cast<int>(boundary_tags.size()) != num_boundary_segments(family)) {
        throw Error("mesh: boundary tag count does not match the segment count");
    }
}

int Mesh::num_boundary_faces() const
{
    return static_cast<int>(
        std::count_if(faces.begin(), faces.end(), [](const Face& f) { return f.boundary(); }));
}

GeometryEval geometry_map(const Element& el, Vec2 ref)
{
    const auto& c = el.corners;
    Vec2 p;
    Mat2 jp;
    if (el.kind == ElementKind::Triangle) {
        const Vec2 d1 = c[1] - c[0];
        const Vec2 d2 = c[2] - c[0];
        p = c[0] + ref.x * d1 + ref.y * d2;
        jp = {d1.x, d2.x, d1.y, d2.y};
    } else {
        const double xi = ref.x;
        const double eta = ref.y;
        const double n0 = 0.25 * (1 - xi) * (1 - eta), n1 = 0.25 * (1 + xi) * (1 - eta);
        const double n2 = 0.25 * (1 + xi) * (1 + eta), n3 = 0.25 * (1 - xi) * (1 + eta);
        p = n0 * c[0] + n1 * c[1] + n2 * c[2] + n3 * c[3];
        const Vec2 dxi = 0.25 * ((1 - eta) * (c[1] - c[0]) + (1 + eta) * (c[2] - c[3]));
        const Vec2 deta = 0.25 * ((1 - xi) * (c[3] - c[0]) + (1 + xi) * (c[2] - c[1]));
        jp = {dxi.x, deta.x, dxi.y, deta.y};
    }
    GeometryEval g;
    if (el.polar) {
        const double r = p.x;
        const double cs = std::cos(p.y);
        const double sn = std::sin(p.y);
        g.x = {r * cs, r * sn};
        g.jacobian = Mat2{cs, -r * sn, sn, r * cs} * jp;
    } else {
        g.x = p;
        g.jacobian = jp;
    }
    g.det = g.jacobian.det();
    return g;
}

GeometryEval geometry_eval(const Mesh& mesh, int element, Vec2 ref)
{
    const auto g = geometry_map(mesh.elements.at(element), ref);
    if (!(g.det > 0.0)) {
        throw Error("degenerate element " + std::to_string(element) +
                    ": nonpositive Jacobian determinant");
    }
    return g;
}

Vec2 element_edge_normal(const Element& el, int edge, double t)
{
    const Vec2 ref = reference_edge_point(el.kind, edge, t);
    const auto g = geometry_map(el, ref);
    const Vec2 tau = g.jacobian * reference_edge_tangent(el.kind, edge);
    const double len = norm(tau);
    return {tau.y / len, -tau.x / len};
}

namespace {

double edge_length(const Element& el, int edge)
{
    static const QuadRule1D rule = gauss_legendre(8);
    double len = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto g = geometry_map(el, reference_edge_point(el.kind, edge, rule.points[q]));
        len += rule.weights[q] * norm(g.jacobian * reference_edge_tangent(el.kind, edge));
    }
    return len;
}

double element_diameter(const Element& el)
{
    const int nv = el.num_vertices();
    std::array<Vec2, 4> x{};
    for (int v = 0; v < nv; ++v) {
        x[v] = geometry_map(el, reference_vertex(el.kind, v)).x;
    }
    double h = 0.0;
    for (int a = 0; a < nv; ++a) {
        for (int b = a + 1; b < nv; ++b) {
            h = std::max(h, norm(x[a] - x[b]));
        }
    }
    if (el.polar) {
        for (int e = 0; e < nv; ++e) {
            h = std::max(h, edge_length(el, e));
        }
    }
    return h;
}

double element_area(const Element& el)
{
    const auto rule = volume_quadrature(el.kind, el.polar ? 8 : 2);
    double a = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        a += rule.weights[q] * geometry_map(el, rule.points[q]).det;
    }
    return a;
}

void check_element(const Element& el, int id)
{
    std::vector<Vec2> probes;
    const int n = 4;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            if (el.kind == ElementKind::Triangle) {
                if (i + j > n) continue;
                probes.push_back({double(i) / n, double(j) / n});
            } else {
                probes.push_back({-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n});
            }
        }
    }
    for (const Vec2& p : probes) {
        if (!(geometry_map(el, p).det > 0.0)) {
            throw Error("degenerate element " + std::to_string(id) +
                        ": nonpositive Jacobian determinant");
        }
    }
}

// Uniform in [-1, 1) from the top 53 bits.
double uniform_pm1(std::mt19937_64& gen)
{
    return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
}

struct Grid {
    int ni = 0;          // vertex count in i
    int nj = 0;          // vertex count in j
    bool periodic_j = false;
    std::vector<Vec2> coords; // parameter coordinates, index i * nj + j
    int id(int i, int j) const { return i * nj + (periodic_j ? j % nj : j); }
};

} // namespace

Mesh build_mesh(const MeshSpec& spec)
{
    spec.validate();
    Mesh mesh;
    mesh.spec = spec;
    const bool annulus = is_annulus(spec.family);
    const bool tri = spec.family == MeshFamily::AnnulusTri || spec.family == MeshFamily::RectTri;

    Grid grid;
    int cells_i = 0, cells_j = 0;
    double di = 0.0, dj = 0.0;
    if (annulus) {
        cells_i = spec.n_r;
        cells_j = spec.n_theta;
        grid.ni = spec.n_r + 1;
        grid.nj = spec.n_theta;
        grid.periodic_j = true;
        di = (spec.r_out - spec.r_in) / spec.n_r;
        dj = 2.0 * std::numbers::pi / spec.n_theta;
        for (int i = 0; i < grid.ni; ++i) {
            const double r = i == spec.n_r ? spec.r_out : spec.r_in + i * di;
            for (int j = 0; j < grid.nj; ++j) {
                grid.coords.push_back({r, j * dj});
            }
        }
    } else {
        cells_i = spec.n_x;
        cells_j = spec.n_y;
        grid.ni = spec.n_x + 1;
        grid.nj = spec.n_y + 1;
        di = (spec.x1 - spec.x0) / spec.n_x;
        dj = (spec.y1 - spec.y0) / spec.n_y;
        for (int i = 0; i < grid.ni; ++i) {
            const double x = i == spec.n_x ? spec.x1 : spec.x0 + i * di;
            for (int j = 0; j < grid.nj; ++j) {
                const double y = j == spec.n_y ? spec.y1 : spec.y0 + j * dj;
                grid.coords.push_back({x, y});
            }
        }
    }

    if (tri && spec.jitter_amplitude > 0.0) {
        std::mt19937_64 gen(spec.jitter_seed);
        for (int i = 0; i < grid.ni; ++i) {
            for (int j = 0; j < grid.nj; ++j) {
                const double u = uniform_pm1(gen);
                const double v = uniform_pm1(gen);
                const bool interior_i = i > 0 && i < grid.ni - 1;
                const bool interior_j = annulus || (j > 0 && j < grid.nj - 1);
                if (interior_i && interior_j) {
                    auto& p = grid.coords[grid.id(i, j)];
                    p.x += spec.jitter_amplitude * di * u;
                    p.y += spec.jitter_amplitude * dj * v;
                }
            }
        }
    }

    for (int i = 0; i < grid.ni; ++i) {
        for (int j = 0; j < grid.nj; ++j) {
            const Vec2 p = grid.coords[grid.id(i, j)];
            mesh.vertices.push_back(annulus ? Vec2{p.x * std::cos(p.y), p.x * std::sin(p.y)} : p);
            mesh.vertex_grid.push_back({i, j});
        }
    }

    auto corner = [&](int i, int j) {
        Vec2 p = grid.coords[grid.id(i, j)];
        if (annulus && j == grid.nj) {
            p.y += 2.0 * std::numbers::pi;
        }
        return p;
    };

    for (int j = 0; j < cells_j; ++j) {
        for (int i = 0; i < cells_i; ++i) {
            const std::array<int, 4> v{grid.id(i, j), grid.id(i + 1, j), grid.id(i + 1, j + 1),
                                       grid.id(i, j + 1)};
            const std::array<Vec2, 4> c{corner(i, j), corner(i + 1, j), corner(i + 1, j + 1),
                                        corner(i, j + 1)};
            auto push = [&](std::initializer_list<int> local) {
                Element el;
                el.kind = local.size() == 3 ? ElementKind::Triangle : ElementKind::Quad;
                el.polar = annulus;
                int a = 0;
                for (int l : local) {
                    el.vertices[a] = v[l];
                    el.corners[a] = c[l];
                    ++a;
                }
                mesh.elements.push_back(el);
            };
            if (!tri) {
                push({0, 1, 2, 3});
            } else if ((i + j) % 2 == 0) {
                push({0, 1, 2});
                push({0, 2, 3});
            } else {
                push({0, 1, 3});
                push({1, 2, 3});
            }
        }
    }

    for (int e = 0; e < mesh.num_elements(); ++e) {
        auto& el = mesh.elements[e];
        check_element(el, e);
        el.h = element_diameter(el);
        el.area = element_area(el);
        // Smallest height over an edge: 2|T|/|e| on triangles, |T|/|e| on quads.
        const double c = el.kind == ElementKind::Triangle ? 2.0 : 1.0;
        el.height = std::numeric_limits<double>::infinity();
        for (int l = 0; l < el.num_vertices(); ++l) {
            el.height = std::min(el.height, c * el.area / edge_length(el, l));
        }
    }

    // Face topology by vertex-pair matching.
    std::map<std::pair<int, int>, int> edge_to_face;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.elements[e];
        const int nv = el.num_vertices();
        for (int l = 0; l < nv; ++l) {
            const int a = el.vertices[l];
            const int b = el.vertices[(l + 1) % nv];
            const auto key = std::minmax(a, b);
            auto it = edge_to_face.find(key);
            if (it == edge_to_face.end()) {
                Face f;
                f.elem_minus = e;
                f.edge_minus = l;
                edge_to_face.emplace(key, mesh.num_faces());
                mesh.faces.push_back(f);
            } else {
                Face& f = mesh.faces[it->second];
                if (f.elem_plus >= 0) {
                    throw Error("mesh: edge shared by more than two elements");
                }
                f.elem_plus = e;
                f.edge_plus = l;
            }
        }
    }

    for (auto& f : mesh.faces) {
        if (!f.boundary()) {
            continue;
        }
        const auto& el = mesh.elements[f.elem_minus];
        const auto ga = mesh.vertex_grid[el.vertices[f.edge_minus]];
        const auto gb = mesh.vertex_grid[el.vertices[(f.edge_minus + 1) % el.num_vertices()]];
        if (annulus) {
            f.segment = ga[0] == 0 && gb[0] == 0 ? 0 : 1;
        } else if (ga[0] == 0 && gb[0] == 0) {
            f.segment = 0;
        } else if (ga[0] == spec.n_x && gb[0] == spec.n_x) {
            f.segment = 1;
        } else if (ga[1] == 0 && gb[1] == 0) {
            f.segment = 2;
        } else {
            f.segment = 3;
        }
        f.tag = spec.boundary_tags.empty() ? BoundaryTag::Dirichlet : spec.boundary_tags[f.segment];
    }

    // The shared edge must be the same curve seen from both sides.
    for (const auto& f : mesh.faces) {
        if (f.boundary()) {
            continue;
        }
        const auto& em = mesh.elements[f.elem_minus];
        const auto& ep = mesh.elements[f.elem_plus];
        for (double t : {-1.0, -0.3, 0.5, 1.0}) {
            const Vec2 xm = geometry_map(em, reference_edge_point(em.kind, f.edge_minus, t)).x;
            const Vec2 xp = geometry_map(ep, reference_edge_point(ep.kind, f.edge_plus, -t)).x;
            if (norm(xm - xp) > 1e-10 * (1.0 + norm(xm))) {
                throw Error("mesh: inconsistent face geometry");
            }
        }
    }

    if (annulus) {
        for (int j = 0; j < grid.nj; ++j) {
            std::vector<int> line;
            for (int i = 0; i < grid.ni; ++i) {
                line.push_back(grid.id(i, j));
            }
            mesh.radial_lines.push_back(std::move(line));
        }
        for (int i = 0; i < grid.ni; ++i) {
            std::vector<int> line;
            for (int j = 0; j < grid.nj; ++j) {
                line.push_back(grid.id(i, j));
            }
            mesh.circular_lines.push_back(std::move(line));
        }
    }

    const auto size = mesh_size(mesh);
    mesh.h = size.h;
    mesh.h_min = size.h_min;
    return mesh;
}

MeshSize mesh_size(const Mesh& mesh)
{
    MeshSize s;
    s.h_min = mesh.elements.empty() ? 0.0 : mesh.elements.front().h;
    for (const auto& el : mesh.elements) {
        s.h_t.push_back(el.h);
        s.h = std::max(s.h, el.h);
        s.h_min = std::min(s.h_min, el.h);
    }
    return s;
}

double face_h(const Mesh& mesh, int face)
{
    const Face& f = mesh.faces.at(face);
    double h = mesh.elements[f.elem_minus].height;
    if (!f.boundary()) {
        h = std::min(h, mesh.elements[f.elem_plus].height);
    }
    return h;
}

FaceGeometry face_geometry(const Mesh& mesh, int face, const QuadRule1D& rule)
{
    const Face& f = mesh.faces.at(face);
    const auto& em = mesh.elements[f.elem_minus];
    const Vec2 dref = reference_edge_tangent(em.kind, f.edge_minus);
    FaceGeometry g;
    const std::size_t n = rule.size();
    g.points.resize(n);
    g.weights.resize(n);
    g.normals.resize(n);
    g.ref_minus.resize(n);
    if (!f.boundary()) {
        g.ref_plus.resize(n);
    }
    for (std::size_t q = 0; q < n; ++q) {
        const double t = rule.points[q];
        const Vec2 ref = reference_edge_point(em.kind, f.edge_minus, t);
        const auto ge = geometry_eval(mesh, f.elem_minus, ref);
        const Vec2 tau = ge.jacobian * dref;
        const double len = norm(tau);
        g.points[q] = ge.x;
        g.weights[q] = rule.weights[q] * len;
        g.normals[q] = {tau.y / len, -tau.x / len};
        g.ref_minus[q] = ref;
        if (!f.boundary()) {
            const auto& ep = mesh.elements[f.elem_plus];
            g.ref_plus[q] = reference_edge_point(ep.kind, f.edge_plus, -t);
        }
    }
    return g;
}

std::string mesh_to_json(const Mesh& mesh)
{
    nlohmann::json j;
    j["family"] = mesh_family_name(mesh.spec.family);
    j["h"] = mesh.h;
    j["h_min"] = mesh.h_min;
    auto& verts = j["vertices"] = nlohmann::json::array();
    for (const Vec2& v : mesh.vertices) {
        verts.push_back({v.x, v.y});
    }
    auto& elems = j["elements"] = nlohmann::json::array();
    for (const auto& el : mesh.elements) {
        nlohmann::json e;
        e["kind"] = el.kind == ElementKind::Triangle ? "triangle" : "quad";
        e["vertices"] = std::vector<int>(el.vertices.begin(), el.vertices.begin() + el.num_vertices());
        e["polar"] = el.polar;
        e["h"] = el.h;
        elems.push_back(std::move(e));
    }
    auto& faces = j["faces"] = nlohmann::json::array();
    for (const auto& f : mesh.faces) {
        nlohmann::json o;
        o["minus"] = {f.elem_minus, f.edge_minus};
        if (f.boundary()) {
            o["plus"] = nullptr;
            o["segment"] = f.segment;
            o["tag"] = f.tag == BoundaryTag::Dirichlet ? "dirichlet" : "neumann";
        } else {
            o["plus"] = {f.elem_plus, f.edge_plus};
        }
        faces.push_back(std::move(o));
    }
    return j.dump();
}

void write_mesh_json(const Mesh& mesh, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("write_mesh_json: cannot open " + path.string());
    }
    out << mesh_to_json(mesh) << '\n';
}

} // namespace anisodg
