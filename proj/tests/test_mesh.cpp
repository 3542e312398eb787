#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include <json.hpp>

#include "anisodg/basis.hpp"
#include "anisodg/mesh.hpp"

using namespace anisodg;

namespace {

constexpr double pi = 3.14159265358979323846;

MeshSpec annulus(MeshFamily f, int n_r, int n_theta)
{
    MeshSpec s;
    s.family = f;
    s.r_in = 1.0;
    s.r_out = 2.0;
    s.n_r = n_r;
    s.n_theta = n_theta;
    return s;
}

MeshSpec rect(MeshFamily f, int n, double jitter = 0.0)
{
    MeshSpec s;
    s.family = f;
    s.n_x = n;
    s.n_y = n;
    s.jitter_amplitude = jitter;
    return s;
}

bool same_mesh(const Mesh& a, const Mesh& b)
{
    if (a.vertices != b.vertices || a.elements.size() != b.elements.size() || a.faces.size() != b.faces.size()) {
        return false;
    }
    for (std::size_t e = 0; e < a.elements.size(); ++e) {
        const auto& x = a.elements[e];
        const auto& y = b.elements[e];
        if (x.vertices != y.vertices || x.corners != y.corners || x.h != y.h || x.height != y.height) {
            return false;
        }
    }
    return mesh_to_json(a) == mesh_to_json(b);
}

const std::vector<MeshSpec>& all_families()
{
    static const std::vector<MeshSpec> specs{
        annulus(MeshFamily::AnnulusQuad, 3, 12), annulus(MeshFamily::AnnulusTri, 3, 12),
        rect(MeshFamily::RectQuad, 4), rect(MeshFamily::RectTri, 4, 0.2)};
    return specs;
}

} // namespace

TEST(Mesh, AnnulusCounts)
{
    const Mesh m = build_mesh(annulus(MeshFamily::AnnulusQuad, 4, 16));
    EXPECT_EQ(m.num_elements(), 64);
    EXPECT_EQ(m.num_faces(), 144);
    EXPECT_EQ(m.num_boundary_faces(), 32);
    EXPECT_EQ(m.radial_lines.size(), 16u);
    EXPECT_EQ(m.circular_lines.size(), 5u);
}

TEST(Mesh, LineCountsForTriangularAnnulus)
{
    const Mesh m = build_mesh(annulus(MeshFamily::AnnulusTri, 8, 32));
    EXPECT_EQ(m.radial_lines.size(), 32u);
    EXPECT_EQ(m.circular_lines.size(), 9u);
    EXPECT_EQ(m.num_elements(), 2 * 8 * 32);
}

TEST(Mesh, RectangleSizes)
{
    const Mesh q = build_mesh(rect(MeshFamily::RectQuad, 4));
    EXPECT_EQ(q.num_elements(), 16);
    EXPECT_NEAR(q.h, std::sqrt(2.0) / 4, 1e-15);
    const Mesh q8 = build_mesh(rect(MeshFamily::RectQuad, 8));
    EXPECT_NEAR(mesh_size(q8).h, std::sqrt(2.0) / 8, 1e-15);
    const Mesh t = build_mesh(rect(MeshFamily::RectTri, 4));
    EXPECT_EQ(t.num_elements(), 32);
    EXPECT_EQ(t.num_faces(), 56);
}

TEST(Mesh, JitteredTriangleSizeStaysNearGridDiagonal)
{
    const int n = 10;
    const Mesh t = build_mesh(rect(MeshFamily::RectTri, n, 0.1));
    EXPECT_GE(t.h, 0.9 * std::sqrt(2.0) / n);
    EXPECT_LE(t.h, 1.3 * std::sqrt(2.0) / n);
}

TEST(Mesh, BuildIsDeterministic)
{
    for (const auto& s : all_families()) {
        EXPECT_TRUE(same_mesh(build_mesh(s), build_mesh(s)));
    }
    MeshSpec other = rect(MeshFamily::RectTri, 4, 0.2);
    other.jitter_seed = 99;
    EXPECT_FALSE(same_mesh(build_mesh(rect(MeshFamily::RectTri, 4, 0.2)), build_mesh(other)));
}

TEST(Mesh, JitterMovesOnlyInteriorVertices)
{
    const Mesh a = build_mesh(rect(MeshFamily::RectTri, 5, 0.0));
    const Mesh b = build_mesh(rect(MeshFamily::RectTri, 5, 0.25));
    ASSERT_EQ(a.vertices.size(), b.vertices.size());
    int moved = 0;
    for (std::size_t v = 0; v < a.vertices.size(); ++v) {
        const auto [i, j] = a.vertex_grid[v];
        const bool boundary = i == 0 || j == 0 || i == 5 || j == 5;
        if (boundary) {
            EXPECT_EQ(a.vertices[v], b.vertices[v]);
        } else if (!(a.vertices[v] == b.vertices[v])) {
            ++moved;
        }
    }
    EXPECT_EQ(moved, 16);
}

TEST(Mesh, GeometryExamples)
{
    const Mesh m = build_mesh(annulus(MeshFamily::AnnulusQuad, 4, 16));
    // Find the element spanning r in [1, 1.25], theta in [0, pi/8].
    bool found = false;
    for (int e = 0; e < m.num_elements(); ++e) {
        const auto g = geometry_eval(m, e, {-1.0, -1.0});
        if (std::abs(g.x.x - 1.0) < 1e-14 && std::abs(g.x.y) < 1e-14) {
            const auto c = geometry_eval(m, e, {0.0, 0.0});
            const double r = norm(c.x);
            const double t = std::atan2(c.x.y, c.x.x);
            if (std::abs(r - 1.125) < 1e-14 && std::abs(t - pi / 16) < 1e-14) {
                found = true;
            }
        }
    }
    EXPECT_TRUE(found);

    MeshSpec unit = rect(MeshFamily::RectQuad, 1);
    const Mesh q = build_mesh(unit);
    for (Vec2 r : {Vec2{-0.3, 0.7}, Vec2{0.9, -0.9}}) {
        // Reference square [-1,1]^2 maps onto the unit square with det 1/4.
        EXPECT_NEAR(geometry_eval(q, 0, r).det, 0.25, 1e-15);
    }
    const Mesh t = build_mesh(rect(MeshFamily::RectTri, 1));
    // Element 0 with vertices (0,0), (1,0), (0,1) or its mirror: affine with |det| = 1.
    const auto g = geometry_eval(t, 0, {1.0 / 3.0, 1.0 / 3.0});
    EXPECT_NEAR(g.det, 1.0, 1e-15);
}

TEST(Mesh, CurvedElementsAreExactOnCircles)
{
    const Mesh m = build_mesh(annulus(MeshFamily::AnnulusQuad, 4, 16));
    const auto rule = face_quadrature(9);
    for (int f = 0; f < m.num_faces(); ++f) {
        if (!m.faces[f].boundary()) {
            continue;
        }
        const double r = m.faces[f].segment == 0 ? 1.0 : 2.0;
        for (const auto& x : face_geometry(m, f, rule).points) {
            EXPECT_NEAR(norm(x), r, 1e-12);
        }
    }
}

TEST(Mesh, OuterRingIsLargerThanInnerRing)
{
    const Mesh m = build_mesh(annulus(MeshFamily::AnnulusQuad, 4, 16));
    const auto sz = mesh_size(m);
    double inner = 0.0, outer = 0.0;
    for (int e = 0; e < m.num_elements(); ++e) {
        const double r = norm(geometry_eval(m, e, {0.0, 0.0}).x);
        if (r < 1.25) inner = std::max(inner, sz.h_t[e]);
        if (r > 1.75) outer = std::max(outer, sz.h_t[e]);
    }
    EXPECT_GE(outer, inner);
    EXPECT_DOUBLE_EQ(sz.h, m.h);
}

TEST(Mesh, FacePartitionMatchesBruteForcePairing)
{
    for (const auto& s : all_families()) {
        const Mesh m = build_mesh(s);
        // Pair element edges by their sorted vertex pair.
        std::map<std::pair<int, int>, int> count;
        for (const auto& el : m.elements) {
            const int nv = el.num_vertices();
            for (int l = 0; l < nv; ++l) {
                int a = el.vertices[l], b = el.vertices[(l + 1) % nv];
                count[{std::min(a, b), std::max(a, b)}]++;
            }
        }
        int interior = 0, boundary = 0;
        for (const auto& [key, c] : count) {
            ASSERT_LE(c, 2);
            (c == 2 ? interior : boundary)++;
        }
        EXPECT_EQ(m.num_faces(), interior + boundary);
        EXPECT_EQ(m.num_boundary_faces(), boundary);
    }
}

TEST(Mesh, NormalsAreUnitAndOpposite)
{
    const auto rule = face_quadrature(7);
    for (const auto& s : all_families()) {
        const Mesh m = build_mesh(s);
        for (int f = 0; f < m.num_faces(); ++f) {
            const Face& face = m.faces[f];
            const auto g = face_geometry(m, f, rule);
            for (std::size_t q = 0; q < g.points.size(); ++q) {
                EXPECT_NEAR(norm(g.normals[q]), 1.0, 1e-12);
                // Both sides see the same physical point.
                const auto xm = geometry_eval(m, face.elem_minus, g.ref_minus[q]).x;
                EXPECT_NEAR(norm(xm - g.points[q]), 0.0, 1e-12);
                if (face.boundary()) {
                    continue;
                }
                const auto xp = geometry_eval(m, face.elem_plus, g.ref_plus[q]).x;
                EXPECT_NEAR(norm(xp - g.points[q]), 0.0, 1e-12);
                const double t = rule.points[q];
                const Vec2 nm = element_edge_normal(m.elements[face.elem_minus], face.edge_minus, t);
                EXPECT_NEAR(norm(nm - g.normals[q]), 0.0, 1e-12);
                // The plus element's outward normal is the negative one; evaluate it at its own reference point.
                double tp = 0.0;
                bool located = false;
                for (double cand : {t, -t}) {
                    const Vec2 rp = reference_edge_point(m.elements[face.elem_plus].kind, face.edge_plus, cand);
                    if (norm(rp - g.ref_plus[q]) < 1e-12) {
                        tp = cand;
                        located = true;
                    }
                }
                ASSERT_TRUE(located);
                const Vec2 np = element_edge_normal(m.elements[face.elem_plus], face.edge_plus, tp);
                EXPECT_NEAR(norm(np + g.normals[q]), 0.0, 1e-12);
            }
        }
    }
}

TEST(Mesh, PenaltyLengthScale)
{
    const Mesh q = build_mesh(rect(MeshFamily::RectQuad, 4));
    for (int f = 0; f < q.num_faces(); ++f) {
        EXPECT_NEAR(face_h(q, f), 0.25, 1e-14);
    }
    const Mesh t = build_mesh(rect(MeshFamily::RectTri, 4));
    for (const auto& el : t.elements) {
        // Right isosceles triangle with legs 1/4: smallest height is onto the hypotenuse.
        EXPECT_NEAR(el.area, 1.0 / 32.0, 1e-14);
        EXPECT_NEAR(el.height, 0.25 / std::sqrt(2.0), 1e-14);
    }
}

TEST(Mesh, InvalidSpecsThrow)
{
    MeshSpec s = annulus(MeshFamily::AnnulusQuad, 2, 8);
    s.r_in = 3.0;
    EXPECT_THROW(build_mesh(s), Error);
    MeshSpec r = rect(MeshFamily::RectTri, 2);
    r.jitter_amplitude = 0.3;
    EXPECT_THROW(build_mesh(r), Error);
    r.jitter_amplitude = 0.0;
    r.n_x = 0;
    EXPECT_THROW(build_mesh(r), Error);
    MeshSpec tags = rect(MeshFamily::RectQuad, 2);
    tags.boundary_tags = {BoundaryTag::Neumann};
    EXPECT_THROW(build_mesh(tags), Error);
}

TEST(Mesh, BoundaryTagsFollowSegments)
{
    MeshSpec s = rect(MeshFamily::RectQuad, 3);
    s.boundary_tags = {BoundaryTag::Dirichlet, BoundaryTag::Dirichlet, BoundaryTag::Neumann, BoundaryTag::Neumann};
    const Mesh m = build_mesh(s);
    int neumann = 0;
    for (const auto& f : m.faces) {
        if (f.boundary()) {
            EXPECT_EQ(f.tag == BoundaryTag::Neumann, f.segment >= 2);
            neumann += f.tag == BoundaryTag::Neumann;
        }
    }
    EXPECT_EQ(neumann, 6);
}

TEST(Mesh, JsonDumpHasDocumentedFields)
{
    const Mesh m = build_mesh(rect(MeshFamily::RectTri, 2));
    const auto j = nlohmann::json::parse(mesh_to_json(m));
    EXPECT_EQ(j["family"], "rect-tri");
    EXPECT_EQ(j["vertices"].size(), 9u);
    EXPECT_EQ(j["elements"].size(), 8u);
    EXPECT_EQ(j["faces"].size(), static_cast<std::size_t>(m.num_faces()));
    EXPECT_EQ(mesh_family_name(parse_mesh_family("annulus-quad")), "annulus-quad");
    EXPECT_THROW(parse_mesh_family("hexagon"), Error);
}
