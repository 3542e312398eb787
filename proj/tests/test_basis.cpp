#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "anisodg/basis.hpp"
#include "anisodg/quadrature.hpp"

using namespace anisodg;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Integral of x^a y^b over the unit triangle: a! b! / (a + b + 2)!.
double triangle_monomial(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

// Integral of x^a over [-1, 1].
double line_monomial(int a) { return a % 2 ? 0.0 : 2.0 / (a + 1); }

double integrate(const QuadRule& q, int a, int b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        s += q.weights[i] * std::pow(q.points[i].x, a) * std::pow(q.points[i].y, b);
    }
    return s;
}

} // namespace

TEST(Quadrature, QuadExactness3IsTwoByTwoGauss)
{
    const auto q = volume_quadrature(ElementKind::Quad, 3);
    EXPECT_EQ(q.size(), 4u);
    double sum = 0.0;
    for (double w : q.weights) {
        sum += w;
    }
    EXPECT_NEAR(sum, 4.0, 1e-14);
}

TEST(Quadrature, TriangleExactness2IsThreePointRule)
{
    const auto q = volume_quadrature(ElementKind::Triangle, 2);
    EXPECT_EQ(q.size(), 3u);
    double sum = 0.0;
    for (double w : q.weights) {
        EXPECT_GT(w, 0.0);
        sum += w;
    }
    EXPECT_NEAR(sum, 0.5, 1e-15);
}

TEST(Quadrature, FaceRules)
{
    const auto q1 = face_quadrature(1);
    ASSERT_EQ(q1.size(), 1u);
    EXPECT_NEAR(q1.weights[0], 2.0, 1e-15);
    const auto q3 = face_quadrature(3);
    ASSERT_EQ(q3.size(), 2u);
    EXPECT_NEAR(std::abs(q3.points[0]), 1.0 / std::sqrt(3.0), 1e-15);
    const auto q17 = face_quadrature(17);
    double s = 0.0;
    for (std::size_t i = 0; i < q17.size(); ++i) {
        s += q17.weights[i] * std::pow(q17.points[i], 16);
    }
    EXPECT_NEAR(s, 2.0 / 17.0, 1e-14);
}

TEST(Quadrature, TriangleMonomialsUpToExactness)
{
    for (int e : {1, 2, 5, 10, 18, 24}) {
        const auto q = volume_quadrature(ElementKind::Triangle, e);
        EXPECT_GE(q.exactness, e);
        for (int a = 0; a <= e; ++a) {
            for (int b = 0; a + b <= e; ++b) {
                const double exact = triangle_monomial(a, b);
                EXPECT_NEAR(integrate(q, a, b), exact, 1e-12 * exact) << "e=" << e << " a=" << a << " b=" << b;
            }
        }
    }
}

TEST(Quadrature, TriangleDegreeTwelveMonomialExample)
{
    const auto q = volume_quadrature(ElementKind::Triangle, 18);
    EXPECT_NEAR(integrate(q, 5, 7), triangle_monomial(5, 7), 1e-12 * triangle_monomial(5, 7));
}

TEST(Quadrature, QuadMonomialsUpToExactness)
{
    for (int e : {1, 4, 9, 20}) {
        const auto q = volume_quadrature(ElementKind::Quad, e);
        for (int a = 0; a <= e; ++a) {
            for (int b = 0; b <= e; ++b) {
                const double exact = line_monomial(a) * line_monomial(b);
                EXPECT_NEAR(integrate(q, a, b), exact, 1e-12 * std::max(1.0, std::abs(exact)));
            }
        }
    }
}

TEST(Quadrature, GaussLobattoPoints)
{
    const auto p = gauss_lobatto_points(4);
    ASSERT_EQ(p.size(), 4u);
    EXPECT_DOUBLE_EQ(p.front(), -1.0);
    EXPECT_DOUBLE_EQ(p.back(), 1.0);
    EXPECT_NEAR(p[1], -1.0 / std::sqrt(5.0), 1e-15);
}

TEST(Quadrature, UnsupportedExactnessThrows)
{
    EXPECT_THROW(volume_quadrature(ElementKind::Triangle, kMaxQuadratureExactness + 1), Error);
}

TEST(Basis, QuadK1CenterValues)
{
    const auto b = nodal_basis(ElementKind::Quad, 1);
    ASSERT_EQ(b->size(), 4);
    for (double v : b->values({0.0, 0.0})) {
        EXPECT_NEAR(v, 0.25, 1e-15);
    }
}

TEST(Basis, Cardinalities)
{
    for (int k = 1; k <= kMaxDegree; ++k) {
        EXPECT_EQ(nodal_basis(ElementKind::Triangle, k)->size(), (k + 1) * (k + 2) / 2);
        EXPECT_EQ(nodal_basis(ElementKind::Quad, k)->size(), (k + 1) * (k + 1));
    }
    EXPECT_THROW(ReferenceBasis(ElementKind::Quad, kMaxDegree + 1), Error);
    EXPECT_THROW(ReferenceBasis(ElementKind::Quad, 0), Error);
}

class BasisProperties : public ::testing::TestWithParam<std::tuple<ElementKind, int>> {};

TEST_P(BasisProperties, KroneckerAndPartitionOfUnity)
{
    const auto [kind, k] = GetParam();
    const auto b = nodal_basis(kind, k);
    const auto& nodes = b->nodes();
    for (int j = 0; j < b->size(); ++j) {
        const auto v = b->values(nodes[j]);
        for (int i = 0; i < b->size(); ++i) {
            EXPECT_NEAR(v[i], i == j ? 1.0 : 0.0, 1e-10);
        }
    }
    const auto q = volume_quadrature(kind, 2 * k + 2);
    for (const auto& x : q.points) {
        double s = 0.0;
        Vec2 g{};
        const auto v = b->values(x);
        const auto gr = b->gradients(x);
        for (int i = 0; i < b->size(); ++i) {
            s += v[i];
            g = g + gr[i];
        }
        EXPECT_NEAR(s, 1.0, 1e-12);
        EXPECT_NEAR(g.x, 0.0, 1e-10);
        EXPECT_NEAR(g.y, 0.0, 1e-10);
    }
    EXPECT_LT(b->vandermonde_condition(), 1e13);
}

TEST_P(BasisProperties, GradientsMatchFiniteDifferences)
{
    const auto [kind, k] = GetParam();
    const auto b = nodal_basis(kind, k);
    std::mt19937_64 gen(k);
    std::uniform_real_distribution<double> u(0.1, 0.4);
    const double h = 1e-6;
    for (int t = 0; t < 5; ++t) {
        const Vec2 x = kind == ElementKind::Triangle ? Vec2{u(gen), u(gen)} : Vec2{2 * u(gen) - 0.5, 2 * u(gen) - 0.5};
        const auto g = b->gradients(x);
        const auto px = b->values({x.x + h, x.y});
        const auto mx = b->values({x.x - h, x.y});
        const auto py = b->values({x.x, x.y + h});
        const auto my = b->values({x.x, x.y - h});
        double scale = 0.0;
        for (const auto& v : g) {
            scale = std::max(scale, std::max(std::abs(v.x), std::abs(v.y)));
        }
        for (int i = 0; i < b->size(); ++i) {
            EXPECT_NEAR(g[i].x, (px[i] - mx[i]) / (2 * h), 1e-6 * scale);
            EXPECT_NEAR(g[i].y, (py[i] - my[i]) / (2 * h), 1e-6 * scale);
        }
    }
}

TEST_P(BasisProperties, EdgeNodesLieOnTheirEdge)
{
    const auto [kind, k] = GetParam();
    const auto b = nodal_basis(kind, k);
    const int nv = num_vertices(kind);
    for (int e = 0; e < nv; ++e) {
        const auto& en = b->edge_nodes(e);
        ASSERT_EQ(static_cast<int>(en.size()), k + 1);
        EXPECT_EQ(en.front(), b->vertex_node(e));
        EXPECT_EQ(en.back(), b->vertex_node((e + 1) % nv));
        const Vec2 a = reference_vertex(kind, e);
        const Vec2 c = reference_vertex(kind, (e + 1) % nv);
        for (int n : en) {
            const Vec2 p = b->nodes()[n];
            const double cross = (c.x - a.x) * (p.y - a.y) - (c.y - a.y) * (p.x - a.x);
            EXPECT_NEAR(cross, 0.0, 1e-13);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(AllDegrees, BasisProperties,
                         ::testing::Combine(::testing::Values(ElementKind::Triangle, ElementKind::Quad),
                                            ::testing::Range(1, kMaxDegree + 1)));

TEST(Basis, TriangleK2SumsToOneAtCentroid)
{
    const auto b = nodal_basis(ElementKind::Triangle, 2);
    ASSERT_EQ(b->size(), 6);
    double s = 0.0;
    for (double v : b->values({1.0 / 3.0, 1.0 / 3.0})) {
        s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-14);
}

TEST(Basis, ReferenceGeometry)
{
    EXPECT_DOUBLE_EQ(reference_measure(ElementKind::Triangle), 0.5);
    EXPECT_DOUBLE_EQ(reference_measure(ElementKind::Quad), 4.0);
    const Vec2 p = reference_edge_point(ElementKind::Quad, 0, 0.0);
    EXPECT_DOUBLE_EQ(p.x, 0.0);
    EXPECT_DOUBLE_EQ(p.y, -1.0);
    const Vec2 t = reference_edge_tangent(ElementKind::Triangle, 1);
    EXPECT_DOUBLE_EQ(t.x, -0.5);
    EXPECT_DOUBLE_EQ(t.y, 0.5);
}

TEST(Basis, JacobiPolynomialsAreOrthonormal)
{
    const auto q = gauss_legendre(20);
    for (int m = 0; m < 6; ++m) {
        for (int n = 0; n < 6; ++n) {
            double s = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) {
                s += q.weights[i] * jacobi_p(q.points[i], 0.0, 0.0, m) * jacobi_p(q.points[i], 0.0, 0.0, n);
            }
            EXPECT_NEAR(s, m == n ? 1.0 : 0.0, 1e-13);
        }
    }
    const double h = 1e-6;
    EXPECT_NEAR(grad_jacobi_p(0.3, 1.0, 0.0, 4),
                (jacobi_p(0.3 + h, 1.0, 0.0, 4) - jacobi_p(0.3 - h, 1.0, 0.0, 4)) / (2 * h), 1e-7);
}
