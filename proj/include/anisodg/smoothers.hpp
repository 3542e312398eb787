#pragma once

#include <memory>
#include <vector>

#include "anisodg/sparse.hpp"

namespace anisodg {

/// Damped Jacobi as an operator: `sweeps` steps of z <- z + omega D^{-1}(r - A z)
/// from z = 0. A single sweep is omega D^{-1}.
LinearOperator jacobi(const CsrMatrix& a, double omega = 1.0, int sweeps = 1);

using DofBlock = std::vector<int>;

/// Overlapping additive Schwarz: z = w sum_b R_b^T (R_b A R_b^T)^{-1} R_b r.
/// Local problems are factorized at construction (dense Cholesky for small
/// blocks, sparse Cholesky above `dense_limit`). A weight w <= 0 selects
/// 1 / (largest number of blocks sharing a dof).
class AdditiveSchwarz {
public:
    AdditiveSchwarz(const CsrMatrix& a, std::vector<DofBlock> blocks, int dense_limit = 400,
                    double weight = 1.0);
    ~AdditiveSchwarz();
    AdditiveSchwarz(AdditiveSchwarz&&) noexcept;
    AdditiveSchwarz& operator=(AdditiveSchwarz&&) noexcept;

    int size() const { return n_; }
    const std::vector<DofBlock>& blocks() const { return blocks_; }
    double weight() const { return weight_; }
    /// Largest number of blocks containing one dof.
    int max_multiplicity() const { return max_multiplicity_; }
    void apply(std::span<const double> r, std::span<double> z) const;

    static LinearOperator as_operator(std::shared_ptr<const AdditiveSchwarz> s);

private:
    struct Local;
    int n_ = 0;
    double weight_ = 1.0;
    int max_multiplicity_ = 0;
    std::vector<DofBlock> blocks_;
    std::vector<std::unique_ptr<Local>> local_;
};

/// S = S_first + S_second - S_second A S_first, i.e. apply `first`, then
/// correct the new residual with `second`. Error propagation:
/// I - S A = (I - S_second A)(I - S_first A).
LinearOperator multiplicative_combine(const LinearOperator& second, const LinearOperator& first, const CsrMatrix& a);

} // namespace anisodg
