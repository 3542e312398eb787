#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "anisodg/quadrature.hpp"
#include "anisodg/types.hpp"

namespace anisodg {

enum class MeshFamily { AnnulusQuad, AnnulusTri, RectQuad, RectTri };
enum class BoundaryTag { Dirichlet, Neumann };

MeshFamily parse_mesh_family(const std::string& name);
std::string mesh_family_name(MeshFamily family);
bool is_annulus(MeshFamily family);

/// Boundary segments: annulus inner = 0, outer = 1;
/// rectangle left = 0, right = 1, bottom = 2, top = 3.
int num_boundary_segments(MeshFamily family);

struct MeshSpec {
    MeshFamily family = MeshFamily::RectQuad;
    double r_in = 1.0;
    double r_out = 2.0;
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    int n_r = 4;
    int n_theta = 16;
    int n_x = 4;
    int n_y = 4;
    /// Interior-vertex displacement as a fraction of the local grid spacing
    /// (triangular families only).
    double jitter_amplitude = 0.15;
    std::uint64_t jitter_seed = 1;
    /// One tag per boundary segment; empty means all Dirichlet.
    std::vector<BoundaryTag> boundary_tags;

    void validate() const;
};

/// Corner coordinates are physical for straight elements and (r, theta) for
/// polar elements; the geometry map is affine (triangle) or bilinear (quad)
/// in those coordinates, composed with the polar map when `polar` is set.
struct Element {
    ElementKind kind = ElementKind::Quad;
    std::array<int, 4> vertices{-1, -1, -1, -1};
    std::array<Vec2, 4> corners{};
    bool polar = false;
    double h = 0.0;
    double area = 0.0;
    /// Smallest element height normal to an edge; the penalty length scale.
    double height = 0.0;

    int num_vertices() const { return kind == ElementKind::Triangle ? 3 : 4; }
};

struct Face {
    int elem_minus = -1;
    int edge_minus = -1;
    int elem_plus = -1;
    int edge_plus = -1;
    int segment = -1;
    BoundaryTag tag = BoundaryTag::Dirichlet;

    bool boundary() const { return elem_plus < 0; }
};

struct Mesh {
    MeshSpec spec;
    std::vector<Vec2> vertices;
    /// Structured grid index (i, j) of each vertex: (radial, angular) for the
    /// annulus, (x, y) for the rectangle.
    std::vector<std::array<int, 2>> vertex_grid;
    std::vector<Element> elements;
    std::vector<Face> faces;
    /// Vertex lines of the annulus families; empty otherwise.
    std::vector<std::vector<int>> radial_lines;
    std::vector<std::vector<int>> circular_lines;
    double h = 0.0;
    double h_min = 0.0;

    int num_elements() const { return static_cast<int>(elements.size()); }
    int num_faces() const { return static_cast<int>(faces.size()); }
    int num_boundary_faces() const;
};

struct GeometryEval {
    Vec2 x;
    Mat2 jacobian;
    double det = 0.0;
};

Mesh build_mesh(const MeshSpec& spec);

/// Throws if the Jacobian determinant is not positive.
GeometryEval geometry_eval(const Mesh& mesh, int element, Vec2 ref);
/// No determinant check; used for point location.
GeometryEval geometry_map(const Element& element, Vec2 ref);

struct MeshSize {
    double h = 0.0;
    double h_min = 0.0;
    std::vector<double> h_t;
};

MeshSize mesh_size(const Mesh& mesh);

/// Face length scale used by the penalty: min of the adjacent element heights.
double face_h(const Mesh& mesh, int face);

/// Face data at the points of a 1D rule. Normals are unit, outward from the
/// minus element. `weights` already include the arclength factor.
struct FaceGeometry {
    std::vector<Vec2> points;
    std::vector<double> weights;
    std::vector<Vec2> normals;
    std::vector<Vec2> ref_minus;
    std::vector<Vec2> ref_plus;
};

FaceGeometry face_geometry(const Mesh& mesh, int face, const QuadRule1D& rule);

/// Outward unit normal of an element edge at edge parameter t.
Vec2 element_edge_normal(const Element& element, int edge, double t);

std::string mesh_to_json(const Mesh& mesh);
void write_mesh_json(const Mesh& mesh, const std::filesystem::path& path);

} // namespace anisodg
