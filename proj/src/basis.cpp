#include "anisodg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "anisodg/quadrature.hpp"

namespace anisodg {

int num_vertices(ElementKind kind) { return kind == ElementKind::Triangle ? 3 : 4; }

Vec2 reference_vertex(ElementKind kind, int v)
{
    static constexpr std::array<Vec2, 3> tri{{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};
    static constexpr std::array<Vec2, 4> quad{{{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}}};
    return kind == ElementKind::Triangle ? tri.at(v) : quad.at(v);
}

Vec2 reference_edge_point(ElementKind kind, int edge, double t)
{
    const int nv = num_vertices(kind);
    const Vec2 a = reference_vertex(kind, edge);
    const Vec2 b = reference_vertex(kind, (edge + 1) % nv);
    return 0.5 * (1.0 - t) * a + 0.5 * (1.0 + t) * b;
}

Vec2 reference_edge_tangent(ElementKind kind, int edge)
{
    const int nv = num_vertices(kind);
    return 0.5 * (reference_vertex(kind, (edge + 1) % nv) - reference_vertex(kind, edge));
}

double reference_measure(ElementKind kind) { return kind == ElementKind::Triangle ? 0.5 : 4.0; }

double jacobi_p(double x, double alpha, double beta, int n)
{
    const double gamma0 = std::pow(2.0, alpha + beta + 1.0) / (alpha + beta + 1.0) *
                          std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                          std::tgamma(alpha + beta + 1.0);
    double p0 = 1.0 / std::sqrt(gamma0);
    if (n == 0) {
        return p0;
    }
    const double gamma1 = (alpha + 1.0) * (beta + 1.0) / (alpha + beta + 3.0) * gamma0;
    double p1 = ((alpha + beta + 2.0) * x / 2.0 + (alpha - beta) / 2.0) / std::sqrt(gamma1);
    double aold = 2.0 / (2.0 + alpha + beta) *
                  std::sqrt((alpha + 1.0) * (beta + 1.0) / (alpha + beta + 3.0));
    for (int i = 1; i < n; ++i) {
        const double h1 = 2.0 * i + alpha + beta;
        const double anew = 2.0 / (h1 + 2.0) *
                            std::sqrt((i + 1.0) * (i + 1.0 + alpha + beta) * (i + 1.0 + alpha) *
                                      (i + 1.0 + beta) / (h1 + 1.0) / (h1 + 3.0));
        const double bnew = -(alpha * alpha - beta * beta) / h1 / (h1 + 2.0);
        const double p2 = (-aold * p0 + (x - bnew) * p1) / anew;
        p0 = p1;
        p1 = p2;
        aold = anew;
    }
    return p1;
}

double grad_jacobi_p(double x, double alpha, double beta, int n)
{
    if (n == 0) {
        return 0.0;
    }
    return std::sqrt(n * (n + alpha + beta + 1.0)) * jacobi_p(x, alpha + 1.0, beta + 1.0, n - 1);
}

namespace {

// Lagrange basis on nodes x, values and derivatives at t.
void lagrange_1d(const std::vector<double>& x, double t, double* l, double* dl)
{
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        double v = 1.0;
        double d = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double inv = 1.0 / (x[i] - x[j]);
            d = d * (t - x[j]) * inv + v * inv;
            v *= (t - x[j]) * inv;
        }
        l[i] = v;
        if (dl) {
            dl[i] = d;
        }
    }
}

// Warp function on [-1,1]: equispaced-to-GLL displacement, divided by the
// edge blend (1 - r^2).
double warp_factor(int n, double r, const std::vector<double>& gll)
{
    std::vector<double> eq(n + 1);
    for (int i = 0; i <= n; ++i) {
        eq[i] = -1.0 + 2.0 * i / n;
    }
    std::vector<double> l(n + 1);
    lagrange_1d(eq, r, l.data(), nullptr);
    double warp = 0.0;
    for (int i = 0; i <= n; ++i) {
        warp += l[i] * (gll[i] - eq[i]);
    }
    if (std::abs(r) < 1.0 - 1e-10) {
        return warp / (1.0 - r * r);
    }
    return 0.0;
}

std::vector<Vec2> warp_blend_nodes(int n)
{
    static constexpr double alpopt[] = {0.0000, 0.0000, 1.4152, 0.1001, 0.2751,
                                        0.9800, 1.0999, 1.2832, 1.3648};
    const double alpha = alpopt[n - 1];
    const auto gll = gauss_lobatto_points(n + 1);
    const double sqrt3 = std::sqrt(3.0);
    std::vector<Vec2> nodes;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n - i; ++j) {
            const double l1 = static_cast<double>(i) / n;
            const double l3 = static_cast<double>(j) / n;
            const double l2 = 1.0 - l1 - l3;
            double x = -l2 + l3;
            double y = (-l2 - l3 + 2.0 * l1) / sqrt3;
            const double w1 = 4.0 * l2 * l3 * warp_factor(n, l3 - l2, gll) *
                              (1.0 + (alpha * l1) * (alpha * l1));
            const double w2 = 4.0 * l1 * l3 * warp_factor(n, l1 - l3, gll) *
                              (1.0 + (alpha * l2) * (alpha * l2));
            const double w3 = 4.0 * l1 * l2 * warp_factor(n, l2 - l1, gll) *
                              (1.0 + (alpha * l3) * (alpha * l3));
            x += w1 + std::cos(2.0 * std::numbers::pi / 3.0) * w2 +
                 std::cos(4.0 * std::numbers::pi / 3.0) * w3;
            y += std::sin(2.0 * std::numbers::pi / 3.0) * w2 +
                 std::sin(4.0 * std::numbers::pi / 3.0) * w3;
            // Equilateral to the (r, s) biunit triangle, then to the unit triangle.
            const double b1 = (sqrt3 * y + 1.0) / 3.0;
            const double b2 = (-3.0 * x - sqrt3 * y + 2.0) / 6.0;
            const double b3 = (3.0 * x - sqrt3 * y + 2.0) / 6.0;
            const double r = -b2 + b3 - b1;
            const double s = -b2 - b3 + b1;
            nodes.push_back({0.5 * (r + 1.0), 0.5 * (s + 1.0)});
        }
    }
    return nodes;
}

} // namespace

ReferenceBasis::ReferenceBasis(ElementKind kind, int k) : kind_(kind), k_(k)
{
    if (k < 1 || k > kMaxDegree) {
        throw Error("nodal_basis: degree " + std::to_string(k) + " outside [1, 8]");
    }
    if (kind == ElementKind::Quad) {
        gll_ = gauss_lobatto_points(k + 1);
        for (int b = 0; b <= k; ++b) {
            for (int a = 0; a <= k; ++a) {
                nodes_.push_back({gll_[a], gll_[b]});
            }
        }
    } else {
        nodes_ = warp_blend_nodes(k);
        const int n = size();
        Eigen::MatrixXd v(n, n);
        std::vector<double> psi(n);
        for (int i = 0; i < n; ++i) {
            eval_modal(nodes_[i], psi.data(), nullptr);
            for (int j = 0; j < n; ++j) {
                v(i, j) = psi[j];
            }
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
        const auto& sv = svd.singularValues();
        vandermonde_cond_ = sv(0) / sv(n - 1);
        if (!(vandermonde_cond_ <= 1e13)) {
            throw Error("nodal_basis: Vandermonde condition number too large");
        }
        const Eigen::MatrixXd inv = v.inverse();
        vinv_.resize(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                vinv_[static_cast<std::size_t>(i) * n + j] = inv(i, j);
            }
        }
    }
    find_edge_nodes();
}

void ReferenceBasis::find_edge_nodes()
{
    const int nv = num_vertices(kind_);
    edge_nodes_.assign(nv, {});
    vertex_nodes_.assign(nv, -1);
    for (int v = 0; v < nv; ++v) {
        const Vec2 p = reference_vertex(kind_, v);
        for (int i = 0; i < size(); ++i) {
            if (norm(nodes_[i] - p) < 1e-10) {
                vertex_nodes_[v] = i;
            }
        }
    }
    for (int e = 0; e < nv; ++e) {
        const Vec2 a = reference_vertex(kind_, e);
        const Vec2 b = reference_vertex(kind_, (e + 1) % nv);
        const Vec2 d = b - a;
        const double len2 = dot(d, d);
        std::vector<std::pair<double, int>> on_edge;
        for (int i = 0; i < size(); ++i) {
            const Vec2 q = nodes_[i] - a;
            const double s = dot(q, d) / len2;
            const double cross = q.x * d.y - q.y * d.x;
            if (std::abs(cross) < 1e-10 && s > -1e-10 && s < 1.0 + 1e-10) {
                on_edge.push_back({s, i});
            }
        }
        std::sort(on_edge.begin(), on_edge.end());
        for (const auto& [s, i] : on_edge) {
            edge_nodes_[e].push_back(i);
        }
        if (static_cast<int>(edge_nodes_[e].size()) != k_ + 1) {
            throw Error("nodal_basis: edge node count mismatch");
        }
    }
}

void ReferenceBasis::eval_modal(Vec2 x, double* psi, Vec2* dpsi) const
{
    const double r = 2.0 * x.x - 1.0;
    const double s = 2.0 * x.y - 1.0;
    const double a = std::abs(1.0 - s) > 1e-14 ? 2.0 * (1.0 + r) / (1.0 - s) - 1.0 : -1.0;
    const double b = s;
    int m = 0;
    for (int i = 0; i <= k_; ++i) {
        for (int j = 0; j <= k_ - i; ++j, ++m) {
            const double fa = jacobi_p(a, 0.0, 0.0, i);
            const double gb = jacobi_p(b, 2.0 * i + 1.0, 0.0, j);
            psi[m] = std::sqrt(2.0) * fa * gb * std::pow(1.0 - b, i);
            if (!dpsi) {
                continue;
            }
            const double dfa = grad_jacobi_p(a, 0.0, 0.0, i);
            const double dgb = grad_jacobi_p(b, 2.0 * i + 1.0, 0.0, j);
            const double h = 0.5 * (1.0 - b);
            const double hm1 = i > 0 ? std::pow(h, i - 1) : 1.0;
            double dr = dfa * gb * hm1;
            double ds = dfa * gb * 0.5 * (1.0 + a) * hm1;
            double tmp = dgb * std::pow(h, i);
            if (i > 0) {
                tmp -= 0.5 * i * gb * hm1;
            }
            ds += fa * tmp;
            const double scale = std::pow(2.0, i + 0.5);
            // d/dx = 2 d/dr on the unit triangle.
            dpsi[m] = {2.0 * scale * dr, 2.0 * scale * ds};
        }
    }
}

void ReferenceBasis::eval(Vec2 x, double* values) const
{
    const int n = size();
    if (kind_ == ElementKind::Quad) {
        double la[kMaxDegree + 1];
        double lb[kMaxDegree + 1];
        lagrange_1d(gll_, x.x, la, nullptr);
        lagrange_1d(gll_, x.y, lb, nullptr);
        for (int b = 0; b <= k_; ++b) {
            for (int a = 0; a <= k_; ++a) {
                values[a + (k_ + 1) * b] = la[a] * lb[b];
            }
        }
        return;
    }
    double psi[(kMaxDegree + 1) * (kMaxDegree + 2) / 2];
    eval_modal(x, psi, nullptr);
    for (int i = 0; i < n; ++i) {
        double v = 0.0;
        for (int j = 0; j < n; ++j) {
            v += psi[j] * vinv_[static_cast<std::size_t>(j) * n + i];
        }
        values[i] = v;
    }
}

void ReferenceBasis::eval_grad(Vec2 x, Vec2* grads) const
{
    const int n = size();
    if (kind_ == ElementKind::Quad) {
        double la[kMaxDegree + 1], dla[kMaxDegree + 1];
        double lb[kMaxDegree + 1], dlb[kMaxDegree + 1];
        lagrange_1d(gll_, x.x, la, dla);
        lagrange_1d(gll_, x.y, lb, dlb);
        for (int b = 0; b <= k_; ++b) {
            for (int a = 0; a <= k_; ++a) {
                grads[a + (k_ + 1) * b] = {dla[a] * lb[b], la[a] * dlb[b]};
            }
        }
        return;
    }
    constexpr int kMax = (kMaxDegree + 1) * (kMaxDegree + 2) / 2;
    double psi[kMax];
    Vec2 dpsi[kMax];
    eval_modal(x, psi, dpsi);
    for (int i = 0; i < n; ++i) {
        Vec2 g;
        for (int j = 0; j < n; ++j) {
            const double c = vinv_[static_cast<std::size_t>(j) * n + i];
            g.x += dpsi[j].x * c;
            g.y += dpsi[j].y * c;
        }
        grads[i] = g;
    }
}

std::vector<double> ReferenceBasis::values(Vec2 x) const
{
    std::vector<double> v(size());
    eval(x, v.data());
    return v;
}

std::vector<Vec2> ReferenceBasis::gradients(Vec2 x) const
{
    std::vector<Vec2> g(size());
    eval_grad(x, g.data());
    return g;
}

std::shared_ptr<const ReferenceBasis> nodal_basis(ElementKind kind, int k)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const ReferenceBasis>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{static_cast<int>(kind), k}];
    if (!slot) {
        slot = std::make_shared<const ReferenceBasis>(kind, k);
    }
    return slot;
}

} // namespace anisodg
