#include "anisodg/amg.hpp"

#include <cmath>
#include <string>

#include "anisodg/kernels.hpp"
#include "anisodg/types.hpp"

namespace anisodg {

CsrMatrix strength_graph(const CsrMatrix& a, double theta)
{
    const auto diag = a.diagonal();
    std::vector<Triplet> t;
    for (int i = 0; i < a.rows(); ++i) {
        for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
            const int j = a.col_index()[p];
            if (j == i) {
                continue;
            }
            const double v = a.values()[p];
            if (v != 0.0 && std::abs(v) >= theta * std::sqrt(std::abs(diag[i] * diag[j]))) {
                t.push_back({i, j, 1.0});
            }
        }
    }
    return CsrMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

std::vector<int> aggregate(const CsrMatrix& s, int& num_aggregates)
{
    const int n = s.rows();
    const auto rp = s.row_ptr();
    const auto ci = s.col_index();
    std::vector<int> agg(n, -1);
    int count = 0;

    // Pass 1: seed aggregates from nodes whose whole strong neighbourhood is free.
    for (int i = 0; i < n; ++i) {
        if (agg[i] >= 0 || rp[i] == rp[i + 1]) {
            continue;
        }
        bool free = true;
        for (int p = rp[i]; p < rp[i + 1] && free; ++p) {
            free = agg[ci[p]] < 0;
        }
        if (!free) {
            continue;
        }
        agg[i] = count;
        for (int p = rp[i]; p < rp[i + 1]; ++p) {
            agg[ci[p]] = count;
        }
        ++count;
    }

    // Pass 2: attach leftovers to a neighbouring pass-1 aggregate.
    const std::vector<int> pass1 = agg;
    for (int i = 0; i < n; ++i) {
        if (agg[i] >= 0) {
            continue;
        }
        for (int p = rp[i]; p < rp[i + 1]; ++p) {
            if (pass1[ci[p]] >= 0) {
                agg[i] = pass1[ci[p]];
                break;
            }
        }
    }

    // Pass 3: whatever remains (including isolated nodes) seeds new aggregates.
    for (int i = 0; i < n; ++i) {
        if (agg[i] >= 0) {
            continue;
        }
        agg[i] = count;
        for (int p = rp[i]; p < rp[i + 1]; ++p) {
            if (agg[ci[p]] < 0) {
                agg[ci[p]] = count;
            }
        }
        ++count;
    }
    num_aggregates = count;
    return agg;
}

double spectral_radius_dinv_a(const CsrMatrix& a, int iterations)
{
    const int n = a.rows();
    const auto diag = a.diagonal();
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        x[i] = 1.0 + static_cast<double>((i * 7919) % 97) / 97.0;
    }
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const double xn = kernels::nrm2(x);
        for (double& v : x) {
            v /= xn;
        }
        a.multiply(x, y);
        for (int i = 0; i < n; ++i) {
            y[i] /= diag[i];
        }
        lambda = kernels::nrm2(y);
        std::swap(x, y);
    }
    return lambda;
}

AmgHierarchy::AmgHierarchy(const CsrMatrix& a, const AmgParams& params) : params_(params)
{
    if (a.rows() != a.cols()) {
        throw Error("AmgHierarchy: matrix not square");
    }
    if (a.asymmetry() > 1e-10 * a.max_abs()) {
        throw Error("AmgHierarchy: matrix is not symmetric");
    }

    CsrMatrix current = a;
    while (true) {
        AmgLevel level;
        level.a = std::move(current);
        const auto diag = level.a.diagonal();
        level.inv_diag.resize(diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) {
            if (!(diag[i] > 0.0)) {
                throw Error("AmgHierarchy: nonpositive diagonal at row " + std::to_string(i));
            }
            level.inv_diag[i] = 1.0 / diag[i];
        }
        const int n = level.a.rows();
        if (n <= params_.coarse_size || static_cast<int>(levels_.size()) + 1 >= params_.max_levels) {
            levels_.push_back(std::move(level));
            break;
        }

        int num_agg = 0;
        level.aggregates = aggregate(strength_graph(level.a, params_.strength_theta), num_agg);
        if (num_agg >= n || num_agg == 0) {
            levels_.push_back(std::move(level));
            break;
        }

        // Tentative prolongator from the constant near-nullspace, normalized per aggregate.
        std::vector<int> agg_size(num_agg, 0);
        for (int g : level.aggregates) {
            ++agg_size[g];
        }
        std::vector<Triplet> t;
        t.reserve(n);
        for (int i = 0; i < n; ++i) {
            const int g = level.aggregates[i];
            t.push_back({i, g, 1.0 / std::sqrt(static_cast<double>(agg_size[g]))});
        }
        const CsrMatrix tentative = CsrMatrix::from_triplets(n, num_agg, std::move(t));

        // P = (I - w D^{-1} A) T
        const double rho = spectral_radius_dinv_a(level.a);
        const double w = params_.prolongator_omega / rho;
        CsrMatrix dinv_a = level.a;
        for (int i = 0; i < n; ++i) {
            for (int p = dinv_a.row_ptr()[i]; p < dinv_a.row_ptr()[i + 1]; ++p) {
                dinv_a.values()[p] *= level.inv_diag[i];
            }
        }
        level.p = add(tentative, multiply(dinv_a, tentative), -w);
        level.r = level.p.transpose();
        current = multiply(level.r, multiply(level.a, level.p));
        levels_.push_back(std::move(level));
    }

    coarse_.compute(levels_.back().a.to_dense());
    if (coarse_.info() != Eigen::Success) {
        throw Error("AmgHierarchy: coarse matrix not SPD");
    }
}

void AmgHierarchy::smooth(int l, std::span<const double> b, std::span<double> x, bool forward) const
{
    const auto& lev = levels_[l];
    const auto rp = lev.a.row_ptr();
    const auto ci = lev.a.col_index();
    const auto v = lev.a.values();
    const int n = lev.a.rows();
    if (params_.smoother == AmgSmoother::GaussSeidel) {
        auto relax = [&](int i) {
            double s = b[i];
            for (int p = rp[i]; p < rp[i + 1]; ++p) {
                if (ci[p] != i) {
                    s -= v[p] * x[ci[p]];
                }
            }
            x[i] = s * lev.inv_diag[i];
        };
        if (forward) {
            for (int i = 0; i < n; ++i) {
                relax(i);
            }
        } else {
            for (int i = n - 1; i >= 0; --i) {
                relax(i);
            }
        }
    } else {
        std::vector<double> ax(n);
        lev.a.multiply(x, ax);
        for (int i = 0; i < n; ++i) {
            x[i] += params_.jacobi_omega * lev.inv_diag[i] * (b[i] - ax[i]);
        }
    }
}

void AmgHierarchy::cycle(int l, std::span<const double> b, std::span<double> x) const
{
    const auto& lev = levels_[l];
    if (l + 1 == num_levels()) {
        Eigen::Map<const Eigen::VectorXd> bv(b.data(), static_cast<Eigen::Index>(b.size()));
        Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())) = coarse_.solve(bv);
        return;
    }
    const int n = lev.a.rows();
    for (int s = 0; s < params_.pre_sweeps; ++s) {
        smooth(l, b, x, true);
    }
    std::vector<double> r(n);
    lev.a.multiply(x, r);
    for (int i = 0; i < n; ++i) {
        r[i] = b[i] - r[i];
    }
    const int nc = lev.p.cols();
    std::vector<double> rc(nc), xc(nc, 0.0), corr(n);
    lev.r.multiply(r, rc);
    cycle(l + 1, rc, xc);
    lev.p.multiply(xc, corr);
    kernels::axpy(1.0, corr, x);
    for (int s = 0; s < params_.post_sweeps; ++s) {
        smooth(l, b, x, false);
    }
}

void AmgHierarchy::vcycle(std::span<const double> r, std::span<double> z) const
{
    if (static_cast<int>(r.size()) != size() || static_cast<int>(z.size()) != size()) {
        throw Error("AmgHierarchy::vcycle: dimension mismatch");
    }
    std::fill(z.begin(), z.end(), 0.0);
    cycle(0, r, z);
}

LinearOperator AmgHierarchy::as_operator(std::shared_ptr<const AmgHierarchy> h)
{
    const int n = h->size();
    return {n, n, [h](std::span<const double> r, std::span<double> z) { h->vcycle(r, z); }, true};
}

} // namespace anisodg
