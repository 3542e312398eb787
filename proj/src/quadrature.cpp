#include "anisodg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace anisodg {

namespace {

void check_exactness(int exactness)
{
    if (exactness < 0 || exactness > kMaxQuadratureExactness) {
        throw Error("quadrature: unsupported exactness " + std::to_string(exactness));
    }
}

} // namespace

QuadRule1D gauss_legendre(int n)
{
    if (n < 1) {
        throw Error("gauss_legendre: need at least one point");
    }
    QuadRule1D rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    rule.exactness = 2 * n - 1;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            const double pn = n == 1 ? x : p1;
            const double pnm1 = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // Recompute derivative at the converged root.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.points[i] = -x;
        rule.points[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.points[n / 2] = 0.0;
    }
    return rule;
}

std::vector<double> gauss_lobatto_points(int n)
{
    if (n < 2) {
        throw Error("gauss_lobatto_points: need at least two points");
    }
    const int order = n - 1;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
        double xi = -std::cos(std::numbers::pi * i / order);
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = xi;
            for (int k = 2; k <= order; ++k) {
                const double pk = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            const double pn = order == 1 ? xi : p1;
            const double pnm1 = order == 1 ? 1.0 : p0;
            const double dx = (xi * pn - pnm1) / ((order + 1) * pn);
            xi -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        x[i] = xi;
    }
    x.front() = -1.0;
    x.back() = 1.0;
    // Symmetrize so that mirrored nodes agree bit for bit.
    for (int i = 0; i < n / 2; ++i) {
        const double v = 0.5 * (x[n - 1 - i] - x[i]);
        x[i] = -v;
        x[n - 1 - i] = v;
    }
    if (n % 2 == 1) {
        x[n / 2] = 0.0;
    }
    return x;
}

QuadRule1D face_quadrature(int exactness)
{
    check_exactness(exactness);
    auto rule = gauss_legendre(std::max(1, (exactness + 2) / 2));
    return rule;
}

QuadRule volume_quadrature(ElementKind kind, int exactness)
{
    check_exactness(exactness);
    QuadRule rule;
    if (kind == ElementKind::Quad) {
        const auto g = gauss_legendre(std::max(1, (exactness + 2) / 2));
        for (std::size_t j = 0; j < g.size(); ++j) {
            for (std::size_t i = 0; i < g.size(); ++i) {
                rule.points.push_back({g.points[i], g.points[j]});
                rule.weights.push_back(g.weights[i] * g.weights[j]);
            }
        }
        rule.exactness = g.exactness;
        return rule;
    }

    if (exactness <= 1) {
        rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
        rule.weights = {0.5};
        rule.exactness = 1;
        return rule;
    }
    if (exactness == 2) {
        rule.points = {{0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}};
        rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
        rule.exactness = 2;
        return rule;
    }

    // Collapsed (Duffy) tensor rule: (x, y) = (u (1 - v), v), Jacobian (1 - v).
    // The extra factor raises the degree in v by one.
    const auto gu = gauss_legendre((exactness + 2) / 2);
    const auto gv = gauss_legendre((exactness + 3) / 2);
    for (std::size_t j = 0; j < gv.size(); ++j) {
        const double v = 0.5 * (gv.points[j] + 1.0);
        for (std::size_t i = 0; i < gu.size(); ++i) {
            const double u = 0.5 * (gu.points[i] + 1.0);
            rule.points.push_back({u * (1.0 - v), v});
            rule.weights.push_back(0.25 * gu.weights[i] * gv.weights[j] * (1.0 - v));
        }
    }
    rule.exactness = exactness;
    return rule;
}

} // namespace anisodg
