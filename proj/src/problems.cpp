#include "anisodg/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "anisodg/basis.hpp"

namespace anisodg {

namespace {

constexpr double pi = std::numbers::pi;

Vec2 circular_field(Vec2 x)
{
    const double r = norm(x);
    return {x.y / r, -x.x / r};
}

MeshSpec annulus_domain(double r_in, double r_out, MeshFamily family)
{
    MeshSpec s;
    s.family = family;
    s.r_in = r_in;
    s.r_out = r_out;
    return s;
}

MeshSpec rect_domain(double x0, double x1, double y0, double y1)
{
    MeshSpec s;
    s.family = MeshFamily::RectQuad;
    s.x0 = x0;
    s.x1 = x1;
    s.y0 = y0;
    s.y1 = y1;
    return s;
}

void check_params(const ProblemParams& p)
{
    if (!(p.d_perp > 0.0 && p.d_par >= p.d_perp)) {
        throw Error("problem: need d_par >= d_perp > 0");
    }
    if (!std::isfinite(p.d_par) || !std::isfinite(p.omega)) {
        throw Error("problem: non-finite parameter");
    }
}

ProblemCase annulus_omega(const ProblemParams& p)
{
    ProblemCase c;
    c.name = "annulus_omega";
    c.d_par = p.d_par;
    c.d_perp = p.d_perp;
    const double w = p.omega;
    const double dpar = p.d_par;
    const double dperp = p.d_perp;
    c.field = circular_field;
    c.exact = [w](Vec2 x) {
        const double r = norm(x);
        return std::cos(2 * pi * w * r) * x.x / r;
    };
    c.exact_gradient = [w](Vec2 x) {
        const double r = norm(x);
        const double g = std::cos(2 * pi * w * r);
        const double dg = -2 * pi * w * std::sin(2 * pi * w * r);
        const double r3 = r * r * r;
        return Vec2{dg * x.x * x.x / (r * r) + g * x.y * x.y / r3,
                    dg * x.x * x.y / (r * r) - g * x.x * x.y / r3};
    };
    c.forcing = [w, dpar, dperp](Vec2 x) {
        const double r = norm(x);
        const double a = 2 * pi * w * r;
        return (x.x / r) * (dpar * std::cos(a) / (r * r) +
                            dperp * (4 * pi * pi * w * w * std::cos(a) + 2 * pi * w * std::sin(a) / r));
    };
    c.dirichlet = c.exact;
    c.domain = annulus_domain(1.0, 2.0, MeshFamily::AnnulusQuad);
    return c;
}

ProblemCase test5_annulus(const ProblemParams& p)
{
    ProblemCase c;
    c.name = "test5_annulus";
    c.d_par = p.d_par;
    c.d_perp = p.d_perp;
    const double dperp = p.d_perp;
    c.field = circular_field;
    c.exact = [](Vec2 x) {
        const double r = norm(x);
        return std::sqrt(3.0 / (4.0 * r)) * std::sin(2 * pi * r - pi);
    };
    c.exact_gradient = [](Vec2 x) {
        const double r = norm(x);
        const double a = 2 * pi * r - pi;
        const double dg = std::sqrt(3.0 / 4.0) *
                          (-0.5 * std::pow(r, -1.5) * std::sin(a) + std::pow(r, -0.5) * 2 * pi * std::cos(a));
        return Vec2{dg * x.x / r, dg * x.y / r};
    };
    c.forcing = [dperp](Vec2 x) {
        const double r = norm(x);
        return dperp * std::sqrt(3.0 / (4.0 * std::pow(r, 5))) * (4 * pi * pi * r * r - 0.25) *
               std::sin(2 * pi * r - pi);
    };
    c.dirichlet = c.exact;
    c.domain = annulus_domain(0.5, 1.0, MeshFamily::AnnulusTri);
    return c;
}

ProblemCase gaussian_source(const ProblemParams& p)
{
    ProblemCase c;
    c.name = "gaussian_source";
    c.d_par = p.d_par;
    c.d_perp = p.d_perp;
    const double dpar = p.d_par;
    c.field = circular_field;
    c.forcing = [dpar](Vec2 x) {
        const double s2 = 0.05 * 0.05;
        const double rsc2 = (x.x - 1.5) * (x.x - 1.5) + x.y * x.y;
        const double rsk2 = (x.x + 1.5) * (x.x + 1.5) + x.y * x.y;
        return dpar * (std::exp(-rsc2 / s2) - std::exp(-rsk2 / s2));
    };
    c.dirichlet = [](Vec2) { return 0.0; };
    c.domain = annulus_domain(1.0, 2.0, MeshFamily::AnnulusQuad);
    return c;
}

ProblemCase vertical_field_square(const ProblemParams& p)
{
    ProblemCase c;
    c.name = "vertical_field_square";
    c.d_par = p.d_par;
    c.d_perp = p.d_perp;
    const double dperp = p.d_perp;
    c.field = [](Vec2) { return Vec2{0.0, 1.0}; };
    c.exact = [](Vec2 x) { return std::sin(pi * x.x) / (pi * pi); };
    c.exact_gradient = [](Vec2 x) { return Vec2{std::cos(pi * x.x) / pi, 0.0}; };
    c.forcing = [dperp](Vec2 x) { return dperp * std::sin(pi * x.x); };
    c.dirichlet = c.exact;
    c.domain = rect_domain(0.0, 1.0, 0.0, 1.0);
    // u is fixed on both vertical sides; the horizontal sides carry zero flux.
    c.domain.boundary_tags = {BoundaryTag::Dirichlet, BoundaryTag::Dirichlet, BoundaryTag::Neumann,
                              BoundaryTag::Neumann};
    return c;
}

// psi = cos(2 pi (x - 3/2)) / 10 + cos(pi y), u = cos(psi), B = (psi_y, -psi_x).
ProblemCase two_islands(const ProblemParams& p)
{
    ProblemCase c;
    c.name = "two_islands";
    c.d_par = p.d_par;
    c.d_perp = p.d_perp;
    const double dperp = p.d_perp;
    struct Psi {
        double v, dx, dy, dxx, dyy;
    };
    auto psi = [](Vec2 x) {
        const double a = 2 * pi * (x.x - 1.5);
        return Psi{0.1 * std::cos(a) + std::cos(pi * x.y), -0.2 * pi * std::sin(a),
                   -pi * std::sin(pi * x.y), -0.4 * pi * pi * std::cos(a),
                   -pi * pi * std::cos(pi * x.y)};
    };
    c.field = [psi](Vec2 x) {
        const Psi s = psi(x);
        const Vec2 b{s.dy, -s.dx};
        const double n = norm(b);
        if (n < 1e-12) {
            return Vec2{0.0, 0.0};
        }
        return Vec2{b.x / n, b.y / n};
    };
    c.exact = [psi](Vec2 x) { return std::cos(psi(x).v); };
    c.exact_gradient = [psi](Vec2 x) {
        const Psi s = psi(x);
        const double sn = std::sin(s.v);
        return Vec2{-sn * s.dx, -sn * s.dy};
    };
    // b is orthogonal to grad psi, so only the perpendicular part acts:
    // f = -d_perp * laplace(u).
    c.forcing = [psi, dperp](Vec2 x) {
        const Psi s = psi(x);
        return dperp * (std::sin(s.v) * (s.dxx + s.dyy) + std::cos(s.v) * (s.dx * s.dx + s.dy * s.dy));
    };
    c.dirichlet = c.exact;
    c.domain = rect_domain(-1.0, 1.0, -0.5, 0.5);
    return c;
}

ProblemCase isotropic_sine(const ProblemParams& p)
{
    SmoothSolution s;
    s.u = [](Vec2 x) { return std::sin(pi * x.x) * std::cos(pi * x.y); };
    s.grad = [](Vec2 x) {
        return Vec2{pi * std::cos(pi * x.x) * std::cos(pi * x.y),
                    -pi * std::sin(pi * x.x) * std::sin(pi * x.y)};
    };
    s.hessian = [](Vec2 x) {
        const double u = std::sin(pi * x.x) * std::cos(pi * x.y);
        return std::array<double, 3>{-pi * pi * u, -pi * pi * std::cos(pi * x.x) * std::sin(pi * x.y),
                                     -pi * pi * u};
    };
    return constant_field_case("isotropic_sine", {1.0, 0.0}, p.d_perp, p.d_perp, s,
                               rect_domain(0.0, 1.0, 0.0, 1.0));
}

ProblemCase polynomial_patch(const ProblemParams& p)
{
    SmoothSolution s;
    s.u = [](Vec2 x) { return x.x * x.x * x.y * x.y; };
    s.grad = [](Vec2 x) { return Vec2{2 * x.x * x.y * x.y, 2 * x.x * x.x * x.y}; };
    s.hessian = [](Vec2 x) {
        return std::array<double, 3>{2 * x.y * x.y, 4 * x.x * x.y, 2 * x.x * x.x};
    };
    return constant_field_case("polynomial_patch", {std::cos(0.5), std::sin(0.5)}, p.d_par, p.d_perp,
                               s, rect_domain(0.0, 1.0, 0.0, 1.0));
}

} // namespace

Mat2 diffusion_tensor(Vec2 b, double d_par, double d_perp)
{
    if (std::abs(norm(b) - 1.0) > 1e-8) {
        throw Error("diffusion_tensor: field direction is not a unit vector");
    }
    const double d = d_par - d_perp;
    return {d_perp + d * b.x * b.x, d * b.x * b.y, d * b.x * b.y, d_perp + d * b.y * b.y};
}

Mat2 ProblemCase::tensor(Vec2 x) const
{
    const Vec2 b = field(x);
    if (b.x == 0.0 && b.y == 0.0) {
        return d_perp * Mat2::identity();
    }
    return diffusion_tensor(b, d_par, d_perp);
}

std::vector<std::string> case_names()
{
    return {"annulus_omega", "vertical_field_square", "gaussian_source", "two_islands",
            "test5_annulus", "isotropic_sine", "polynomial_patch"};
}

ProblemCase get_case(const std::string& name, const ProblemParams& params)
{
    check_params(params);
    if (name == "annulus_omega") return annulus_omega(params);
    if (name == "vertical_field_square") return vertical_field_square(params);
    if (name == "gaussian_source") return gaussian_source(params);
    if (name == "two_islands") return two_islands(params);
    if (name == "test5_annulus") return test5_annulus(params);
    if (name == "isotropic_sine") return isotropic_sine(params);
    if (name == "polynomial_patch") return polynomial_patch(params);
    throw Error("unknown case '" + name + "'");
}

ProblemCase constant_field_case(const std::string& name, Vec2 b, double d_par, double d_perp,
                                const SmoothSolution& solution, const MeshSpec& domain)
{
    ProblemCase c;
    c.name = name;
    c.d_par = d_par;
    c.d_perp = d_perp;
    c.field = [b](Vec2) { return b; };
    c.exact = solution.u;
    c.exact_gradient = solution.grad;
    c.dirichlet = solution.u;
    const Mat2 d = diffusion_tensor(b, d_par, d_perp);
    auto hess = solution.hessian;
    c.forcing = [d, hess](Vec2 x) {
        const auto h = hess(x);
        return -(d.a11 * h[0] + 2.0 * d.a12 * h[1] + d.a22 * h[2]);
    };
    c.domain = domain;
    return c;
}

int error_quadrature_exactness(int k, bool curved) { return 2 * k + 4 + (curved ? 2 : 0); }

double l2_error(const Mesh& mesh, const DofMap& dofs, std::span<const double> coeffs,
                const ProblemCase& problem)
{
    if (!problem.has_exact()) {
        throw Error("l2_error: case '" + problem.name + "' has no exact solution");
    }
    double sum = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.elements[e];
        const auto& basis = *nodal_basis(el.kind, dofs.k);
        const auto rule = volume_quadrature(el.kind, error_quadrature_exactness(dofs.k, el.polar));
        std::vector<double> phi(basis.size());
        const auto& ed = dofs.element_dofs[e];
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto g = geometry_eval(mesh, e, rule.points[q]);
            basis.eval(rule.points[q], phi.data());
            double uh = 0.0;
            for (int i = 0; i < basis.size(); ++i) {
                uh += phi[i] * coeffs[ed[i]];
            }
            const double diff = uh - problem.exact(g.x);
            sum += rule.weights[q] * g.det * diff * diff;
        }
    }
    return std::sqrt(sum);
}

double l2_norm(const Mesh& mesh, int k, const std::function<double(Vec2)>& fn)
{
    double sum = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.elements[e];
        const auto rule = volume_quadrature(el.kind, error_quadrature_exactness(k, el.polar));
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto g = geometry_eval(mesh, e, rule.points[q]);
            const double v = fn(g.x);
            sum += rule.weights[q] * g.det * v * v;
        }
    }
    return std::sqrt(sum);
}

bool locate_point(const Mesh& mesh, Vec2 x, int& element, Vec2& ref)
{
    constexpr double tol = 1e-10;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.elements[e];
        const int nv = el.num_vertices();
        double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
        double ymin = xmin, ymax = -xmin;
        for (int v = 0; v < nv; ++v) {
            const Vec2 p = mesh.vertices[el.vertices[v]];
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        const double pad = 0.25 * el.h;
        if (x.x < xmin - pad || x.x > xmax + pad || x.y < ymin - pad || x.y > ymax + pad) {
            continue;
        }
        Vec2 r = el.kind == ElementKind::Triangle ? Vec2{1.0 / 3.0, 1.0 / 3.0} : Vec2{0.0, 0.0};
        bool ok = false;
        for (int it = 0; it < 50; ++it) {
            const auto g = geometry_map(el, r);
            if (!(g.det > 0.0)) {
                break;
            }
            const Vec2 dr = g.jacobian.inverse() * (g.x - x);
            r = r - dr;
            if (norm(dr) < 1e-14) {
                ok = true;
                break;
            }
        }
        if (!ok && norm(geometry_map(el, r).x - x) > 1e-12 * (1.0 + norm(x))) {
            continue;
        }
        const bool inside = el.kind == ElementKind::Triangle
                                ? (r.x >= -tol && r.y >= -tol && r.x + r.y <= 1.0 + tol)
                                : (std::abs(r.x) <= 1.0 + tol && std::abs(r.y) <= 1.0 + tol);
        if (inside) {
            element = e;
            ref = r;
            return true;
        }
    }
    return false;
}

TraceResult trace_sample(const Mesh& mesh, const DofMap& dofs, std::span<const double> coeffs,
                         const TraceLine& line, int n_points, bool normalize)
{
    if (n_points < 2) {
        throw Error("trace_sample: need at least two points");
    }
    TraceResult out;
    const double length = norm(line.end - line.start);
    for (int i = 0; i < n_points; ++i) {
        const double t = static_cast<double>(i) / (n_points - 1);
        const Vec2 x = line.start + t * (line.end - line.start);
        int e = -1;
        Vec2 ref;
        if (!locate_point(mesh, x, e, ref)) {
            ++out.skipped;
            continue;
        }
        out.samples.push_back({t * length, x, evaluate_field(mesh, dofs, coeffs, e, ref)});
    }
    if (normalize && !out.samples.empty()) {
        double m = 0.0;
        for (const auto& s : out.samples) {
            m = std::max(m, std::abs(s.value));
        }
        if (m > 0.0) {
            for (auto& s : out.samples) {
                s.value /= m;
            }
        }
    }
    return out;
}

std::vector<double> convergence_order(std::span<const double> errors, std::span<const double> hs)
{
    if (errors.size() != hs.size() || errors.size() < 2) {
        throw Error("convergence_order: need at least two (error, h) pairs");
    }
    std::vector<double> orders;
    for (std::size_t i = 1; i < errors.size(); ++i) {
        if (!(errors[i - 1] > 0.0 && errors[i] > 0.0)) {
            throw Error("convergence_order: errors must be positive");
        }
        orders.push_back(std::log(errors[i - 1] / errors[i]) / std::log(hs[i - 1] / hs[i]));
    }
    return orders;
}

} // namespace anisodg
