#include "anisodg/krylov.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "anisodg/kernels.hpp"
#include "anisodg/types.hpp"

namespace anisodg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void residual(const LinearOperator& a, std::span<const double> b, std::span<const double> x, std::span<double> r)
{
    a.apply(x, r);
    kernels::xpby(b, -1.0, r);
}

void check_dims(const LinearOperator& a, std::span<const double> b, std::span<double> x, const LinearOperator* m,
                const char* who)
{
    if (a.rows() != a.cols() || static_cast<int>(b.size()) != a.rows() || static_cast<int>(x.size()) != a.cols()) {
        throw Error(std::string(who) + ": dimension mismatch");
    }
    if (m != nullptr && (m->rows() != a.rows() || m->cols() != a.cols())) {
        throw Error(std::string(who) + ": preconditioner dimension mismatch");
    }
}

} // namespace

SolveReport cg_solve(const LinearOperator& a, std::span<const double> b, std::span<double> x, const CgOptions& options,
                     const LinearOperator* preconditioner)
{
    check_dims(a, b, x, preconditioner, "cg_solve");
    const auto start = Clock::now();
    const std::size_t n = b.size();
    SolveReport report;

    std::vector<double> r(n), z(n), p(n), q(n);
    residual(a, b, x, r);
    const double r0 = kernels::nrm2(r);
    report.residuals.push_back(r0 == 0.0 ? 0.0 : 1.0);
    if (r0 == 0.0) {
        report.converged = true;
        report.seconds = seconds_since(start);
        return report;
    }

    auto precondition = [&](std::span<const double> in, std::span<double> out) {
        if (preconditioner != nullptr) {
            preconditioner->apply(in, out);
        } else {
            std::copy(in.begin(), in.end(), out.begin());
        }
    };

    precondition(r, z);
    p = z;
    double rz = kernels::dot(r, z);
    for (int it = 1; it <= options.max_iterations; ++it) {
        a.apply(p, q);
        const double pap = kernels::dot(p, q);
        if (!(pap > 0.0)) {
            throw Error("cg_solve: operator not positive definite (p^T A p = " + std::to_string(pap) +
                        ") at iteration " + std::to_string(it));
        }
        const double alpha = rz / pap;
        kernels::axpy(alpha, p, x);
        kernels::axpy(-alpha, q, r);
        const double rel = kernels::nrm2(r) / r0;
        report.residuals.push_back(rel);
        report.iterations = it;
        if (rel <= options.tol) {
            report.converged = true;
            break;
        }
        precondition(r, z);
        const double rz_new = kernels::dot(r, z);
        if (preconditioner != nullptr && !(rz_new > 0.0)) {
            throw Error("cg_solve: preconditioner not positive definite at iteration " + std::to_string(it));
        }
        kernels::xpby(z, rz_new / rz, p);
        rz = rz_new;
    }
    report.seconds = seconds_since(start);
    return report;
}

SolveReport gmres_solve(const LinearOperator& a, std::span<const double> b, std::span<double> x,
                        const GmresOptions& options, const LinearOperator* preconditioner)
{
    check_dims(a, b, x, preconditioner, "gmres_solve");
    const auto start = Clock::now();
    const std::size_t n = b.size();
    const int m = std::max(1, options.restart);
    SolveReport report;

    std::vector<double> r(n), w(n), tmp(n);
    residual(a, b, x, r);
    const double r0 = kernels::nrm2(r);
    report.residuals.push_back(r0 == 0.0 ? 0.0 : 1.0);
    if (r0 == 0.0) {
        report.converged = true;
        report.seconds = seconds_since(start);
        return report;
    }

    auto precondition = [&](std::span<const double> in, std::span<double> out) {
        if (preconditioner != nullptr) {
            preconditioner->apply(in, out);
        } else {
            std::copy(in.begin(), in.end(), out.begin());
        }
    };

    std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
    std::vector<std::vector<double>> zs(options.flexible ? m : 0, std::vector<double>(n));
    // Column-major Hessenberg, (m+1) x m.
    std::vector<double> h((m + 1) * m, 0.0);
    auto H = [&](int i, int j) -> double& { return h[j * (m + 1) + i]; };
    std::vector<double> cs(m), sn(m), g(m + 1);

    int total = 0;
    double beta = r0;
    double cycle_start_residual = 1.0;
    while (total < options.max_iterations) {
        std::copy(r.begin(), r.end(), v[0].begin());
        for (double& vi : v[0]) {
            vi /= beta;
        }
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;

        int j = 0;
        bool done = false;
        for (; j < m && total < options.max_iterations; ++j) {
            std::span<double> zj = options.flexible ? std::span<double>(zs[j]) : std::span<double>(tmp);
            precondition(v[j], zj);
            a.apply(zj, w);
            // Modified Gram-Schmidt with one reorthogonalization pass.
            for (int pass = 0; pass < 2; ++pass) {
                for (int i = 0; i <= j; ++i) {
                    const double hij = kernels::dot(w, v[i]);
                    H(i, j) += hij;
                    kernels::axpy(-hij, v[i], w);
                }
            }
            const double hnext = kernels::nrm2(w);
            H(j + 1, j) = hnext;

            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
                H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
                H(i, j) = t;
            }
            const double denom = std::hypot(H(j, j), H(j + 1, j));
            cs[j] = denom == 0.0 ? 1.0 : H(j, j) / denom;
            sn[j] = denom == 0.0 ? 0.0 : H(j + 1, j) / denom;
            H(j, j) = denom;
            H(j + 1, j) = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];

            ++total;
            const double rel = std::abs(g[j + 1]) / r0;
            report.residuals.push_back(rel);
            report.iterations = total;

            const bool breakdown = hnext <= 1e-14 * denom;
            if (rel <= options.tol || breakdown) {
                done = true;
                ++j;
                break;
            }
            for (std::size_t k = 0; k < n; ++k) {
                v[j + 1][k] = w[k] / hnext;
            }
        }

        // Back substitution for the cycle's update.
        std::vector<double> y(j, 0.0);
        for (int i = j - 1; i >= 0; --i) {
            double s = g[i];
            for (int k = i + 1; k < j; ++k) {
                s -= H(i, k) * y[k];
            }
            y[i] = H(i, i) == 0.0 ? 0.0 : s / H(i, i);
        }
        if (options.flexible) {
            for (int i = 0; i < j; ++i) {
                kernels::axpy(y[i], zs[i], x);
            }
        } else {
            std::fill(w.begin(), w.end(), 0.0);
            for (int i = 0; i < j; ++i) {
                kernels::axpy(y[i], v[i], w);
            }
            precondition(w, tmp);
            kernels::axpy(1.0, tmp, x);
        }
        std::fill(h.begin(), h.end(), 0.0);

        residual(a, b, x, r);
        beta = kernels::nrm2(r);
        const double true_rel = beta / r0;
        if (done) {
            report.converged = true;
            break;
        }
        if (true_rel >= cycle_start_residual * (1.0 - 1e-12)) {
            report.stagnated = true;
            break;
        }
        cycle_start_residual = true_rel;
        if (true_rel <= options.tol) {
            report.converged = true;
            break;
        }
    }
    report.seconds = seconds_since(start);
    return report;
}

} // namespace anisodg
