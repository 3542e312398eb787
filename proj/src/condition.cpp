#include "anisodg/condition.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "anisodg/kernels.hpp"
#include "anisodg/types.hpp"

namespace anisodg {

namespace {

double norm1(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) {
        s += std::abs(x);
    }
    return s;
}

std::vector<double> signs(std::span<const double> v)
{
    std::vector<double> s(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        s[i] = v[i] >= 0.0 ? 1.0 : -1.0;
    }
    return s;
}

std::size_t argmax_abs(std::span<const double> v)
{
    std::size_t j = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[j])) {
            j = i;
        }
    }
    return j;
}

} // namespace

double inverse_norm1_estimate(const LinearOperator& solve, const LinearOperator* solve_transpose)
{
    const LinearOperator& solve_t = solve_transpose != nullptr ? *solve_transpose : solve;
    const int n = solve.rows();
    std::vector<double> x(n, 1.0 / n), y(n), z(n);
    solve.apply(x, y);
    double est = norm1(y);
    if (n == 1) {
        return est;
    }
    auto xi = signs(y);
    solve_t.apply(xi, z);
    std::size_t j = argmax_abs(z);

    for (int iter = 2; iter <= 5; ++iter) {
        std::fill(x.begin(), x.end(), 0.0);
        x[j] = 1.0;
        solve.apply(x, y);
        const double old = est;
        est = std::max(est, norm1(y));
        auto xi_new = signs(y);
        if (xi_new == xi || norm1(y) <= old) {
            break;
        }
        xi = std::move(xi_new);
        solve_t.apply(xi, z);
        const std::size_t jlast = j;
        j = argmax_abs(z);
        if (std::abs(z[jlast]) == std::abs(z[j])) {
            break;
        }
    }

    // Higham's alternating-sign test vector guards against unlucky iterates.
    for (int i = 0; i < n; ++i) {
        x[i] = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + static_cast<double>(i) / (n - 1));
    }
    solve.apply(x, y);
    return std::max(est, 2.0 * norm1(y) / (3.0 * n));
}

double condest_1norm(const CsrMatrix& a, const LinearOperator& solve, const LinearOperator* solve_transpose)
{
    if (a.rows() != a.cols() || solve.rows() != a.rows()) {
        throw Error("condest_1norm: dimension mismatch");
    }
    return a.norm1() * inverse_norm1_estimate(solve, solve_transpose);
}

Cond2Estimate spd_cond2(const LinearOperator& a, const LinearOperator* b, const LanczosOptions& options)
{
    const int n = a.rows();
    if (b != nullptr && b->rows() != n) {
        throw Error("spd_cond2: dimension mismatch");
    }
    const int max_it = std::min(options.max_iterations, n);

    std::vector<std::vector<double>> q;
    std::vector<std::vector<double>> aq;
    std::vector<double> alpha;
    std::vector<double> beta;

    std::mt19937_64 gen(options.seed);
    std::vector<double> w(n), aw(n);
    for (double& v : w) {
        v = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
    }
    a.apply(w, aw);
    double nrm = std::sqrt(kernels::dot(w, aw));
    if (!(nrm > 0.0)) {
        throw Error("spd_cond2: operator not positive definite");
    }
    for (int i = 0; i < n; ++i) {
        w[i] /= nrm;
        aw[i] /= nrm;
    }
    q.push_back(w);
    aq.push_back(aw);

    Cond2Estimate out;
    double prev_min = 0.0;
    double prev_max = 0.0;
    for (int j = 0; j < max_it; ++j) {
        if (b != nullptr) {
            b->apply(aq[j], w);
        } else {
            w = aq[j];
        }
        const double aj = kernels::dot(w, aq[j]);
        alpha.push_back(aj);
        kernels::axpy(-aj, q[j], w);
        if (j > 0) {
            kernels::axpy(-beta[j - 1], q[j - 1], w);
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= j; ++i) {
                kernels::axpy(-kernels::dot(w, aq[i]), q[i], w);
            }
        }
        a.apply(w, aw);
        const double bj2 = kernels::dot(w, aw);

        const int m = j + 1;
        Eigen::VectorXd diag(m), off(std::max(m - 1, 0));
        for (int i = 0; i < m; ++i) {
            diag(i) = alpha[i];
        }
        for (int i = 0; i + 1 < m; ++i) {
            off(i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
        out.lambda_min = es.eigenvalues()(0);
        out.lambda_max = es.eigenvalues()(m - 1);
        out.iterations = m;

        const bool settled = j > 2 && std::abs(out.lambda_min - prev_min) <= options.tol * out.lambda_min &&
                             std::abs(out.lambda_max - prev_max) <= options.tol * out.lambda_max;
        prev_min = out.lambda_min;
        prev_max = out.lambda_max;
        const bool invariant = !(bj2 > 1e-28 * aj * aj);
        if (settled || invariant || m == n) {
            out.converged = true;
            break;
        }
        const double bj = std::sqrt(bj2);
        beta.push_back(bj);
        for (int i = 0; i < n; ++i) {
            w[i] /= bj;
            aw[i] /= bj;
        }
        q.push_back(w);
        aq.push_back(aw);
    }
    out.cond = out.lambda_max / out.lambda_min;
    return out;
}

} // namespace anisodg
