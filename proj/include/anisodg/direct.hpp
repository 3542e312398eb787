#pragma once

#include <memory>
#include <span>

#include <Eigen/Dense>

#include "anisodg/sparse.hpp"

namespace anisodg {

/// Sparse direct factorization. SPD matrices go through a supernodal Cholesky
/// with fill-reducing ordering; everything else through sparse LU.
class SparseDirectSolver {
public:
    enum class Kind { Cholesky, LU };

    explicit SparseDirectSolver(const CsrMatrix& a, Kind kind = Kind::Cholesky);
    ~SparseDirectSolver();
    SparseDirectSolver(SparseDirectSolver&&) noexcept;
    SparseDirectSolver& operator=(SparseDirectSolver&&) noexcept;

    int size() const { return n_; }
    void solve(std::span<const double> b, std::span<double> x) const;
    /// Shares ownership of the factorization.
    static LinearOperator as_operator(std::shared_ptr<const SparseDirectSolver> solver);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int n_ = 0;
};

/// Dense reference computations for small systems (tests and oracles).
struct DenseOracle {
    Eigen::VectorXd eigenvalues;  ///< ascending; symmetric input only
    Eigen::MatrixXd inverse;
    double cond1 = 0.0;
    double cond2 = 0.0;
};

constexpr int kDenseOracleMaxSize = 2000;

/// Throws when n > kDenseOracleMaxSize.
DenseOracle dense_oracle(const CsrMatrix& a, bool symmetric = true);
DenseOracle dense_oracle(const Eigen::MatrixXd& a, bool symmetric = true);

} // namespace anisodg
