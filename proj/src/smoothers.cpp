#include "anisodg/smoothers.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Cholesky>

#include "anisodg/direct.hpp"
#include "anisodg/kernels.hpp"
#include "anisodg/types.hpp"

namespace anisodg {

LinearOperator jacobi(const CsrMatrix& a, double omega, int sweeps)
{
    if (a.rows() != a.cols()) {
        throw Error("jacobi: matrix not square");
    }
    if (sweeps < 1) {
        throw Error("jacobi: sweeps must be >= 1");
    }
    auto inv_diag = std::make_shared<std::vector<double>>(a.diagonal());
    for (std::size_t i = 0; i < inv_diag->size(); ++i) {
        if ((*inv_diag)[i] == 0.0) {
            throw Error("jacobi: zero diagonal entry at row " + std::to_string(i));
        }
        (*inv_diag)[i] = omega / (*inv_diag)[i];
    }
    const int n = a.rows();
    if (sweeps == 1) {
        return {n, n,
                [inv_diag](std::span<const double> r, std::span<double> z) {
                    for (std::size_t i = 0; i < r.size(); ++i) {
                        z[i] = (*inv_diag)[i] * r[i];
                    }
                },
                true};
    }
    auto mat = std::make_shared<const CsrMatrix>(a);
    return {n, n,
            [inv_diag, mat, sweeps](std::span<const double> r, std::span<double> z) {
                std::vector<double> az(r.size());
                for (std::size_t i = 0; i < r.size(); ++i) {
                    z[i] = (*inv_diag)[i] * r[i];
                }
                for (int s = 1; s < sweeps; ++s) {
                    mat->multiply(z, az);
                    for (std::size_t i = 0; i < r.size(); ++i) {
                        z[i] += (*inv_diag)[i] * (r[i] - az[i]);
                    }
                }
            },
            true};
}

struct AdditiveSchwarz::Local {
    Eigen::LLT<Eigen::MatrixXd> dense;
    std::unique_ptr<SparseDirectSolver> sparse;
};

AdditiveSchwarz::AdditiveSchwarz(const CsrMatrix& a, std::vector<DofBlock> blocks, int dense_limit, double weight)
    : n_(a.rows()), blocks_(std::move(blocks))
{
    std::vector<int> count(n_, 0);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        auto& block = blocks_[b];
        std::sort(block.begin(), block.end());
        block.erase(std::unique(block.begin(), block.end()), block.end());
        for (int i : block) {
            if (i < 0 || i >= n_) {
                throw Error("AdditiveSchwarz: block index out of range");
            }
            max_multiplicity_ = std::max(max_multiplicity_, ++count[i]);
        }
        auto local = std::make_unique<Local>();
        if (!block.empty()) {
            const CsrMatrix sub = a.submatrix(block);
            if (static_cast<int>(block.size()) <= dense_limit) {
                local->dense.compute(sub.to_dense());
                if (local->dense.info() != Eigen::Success) {
                    throw Error("AdditiveSchwarz: singular block " + std::to_string(b));
                }
            } else {
                try {
                    local->sparse = std::make_unique<SparseDirectSolver>(sub);
                } catch (const Error&) {
                    throw Error("AdditiveSchwarz: singular block " + std::to_string(b));
                }
            }
        }
        local_.push_back(std::move(local));
    }
    weight_ = weight > 0.0 ? weight : 1.0 / std::max(1, max_multiplicity_);
}

AdditiveSchwarz::~AdditiveSchwarz() = default;
AdditiveSchwarz::AdditiveSchwarz(AdditiveSchwarz&&) noexcept = default;
AdditiveSchwarz& AdditiveSchwarz::operator=(AdditiveSchwarz&&) noexcept = default;

void AdditiveSchwarz::apply(std::span<const double> r, std::span<double> z) const
{
    std::fill(z.begin(), z.end(), 0.0);
    Eigen::VectorXd rb;
    Eigen::VectorXd zb;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const auto& block = blocks_[b];
        const int m = static_cast<int>(block.size());
        if (m == 0) {
            continue;
        }
        rb.resize(m);
        for (int i = 0; i < m; ++i) {
            rb(i) = r[block[i]];
        }
        if (local_[b]->sparse) {
            zb.resize(m);
            local_[b]->sparse->solve({rb.data(), static_cast<std::size_t>(m)}, {zb.data(), static_cast<std::size_t>(m)});
        } else {
            zb = local_[b]->dense.solve(rb);
        }
        for (int i = 0; i < m; ++i) {
            z[block[i]] += weight_ * zb(i);
        }
    }
}

LinearOperator AdditiveSchwarz::as_operator(std::shared_ptr<const AdditiveSchwarz> s)
{
    const int n = s->size();
    return {n, n, [s](std::span<const double> r, std::span<double> z) { s->apply(r, z); }, true};
}

LinearOperator multiplicative_combine(const LinearOperator& second, const LinearOperator& first, const CsrMatrix& a)
{
    const int n = a.rows();
    if (first.rows() != n || second.rows() != n) {
        throw Error("multiplicative_combine: dimension mismatch");
    }
    auto mat = std::make_shared<const CsrMatrix>(a);
    return {n, n, [second, first, mat](std::span<const double> r, std::span<double> z) {
                const std::size_t m = r.size();
                std::vector<double> work(m), corr(m);
                first.apply(r, z);
                mat->multiply(z, work);
                for (std::size_t i = 0; i < m; ++i) {
                    work[i] = r[i] - work[i];
                }
                second.apply(work, corr);
                kernels::axpy(1.0, corr, z);
            }};
}

} // namespace anisodg
