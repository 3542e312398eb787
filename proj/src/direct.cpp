#include "anisodg/direct.hpp"

#include <string>

#include <Eigen/CholmodSupport>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "anisodg/types.hpp"

namespace anisodg {

namespace {

Eigen::SparseMatrix<double> to_eigen(const CsrMatrix& a)
{
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(a.nnz());
    for (int i = 0; i < a.rows(); ++i) {
        for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
            t.emplace_back(i, a.col_index()[p], a.values()[p]);
        }
    }
    Eigen::SparseMatrix<double> m(a.rows(), a.cols());
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

} // namespace

struct SparseDirectSolver::Impl {
    Kind kind;
    Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>, Eigen::Lower> llt;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

SparseDirectSolver::SparseDirectSolver(const CsrMatrix& a, Kind kind) : impl_(std::make_unique<Impl>()), n_(a.rows())
{
    if (a.rows() != a.cols()) {
        throw Error("SparseDirectSolver: matrix not square");
    }
    impl_->kind = kind;
    const auto m = to_eigen(a);
    if (kind == Kind::Cholesky) {
        // Failure is reported through the exception below, not on stderr.
        impl_->llt.cholmod().print = 0;
        impl_->llt.compute(m);
        if (impl_->llt.info() != Eigen::Success) {
            throw Error("SparseDirectSolver: Cholesky factorization failed (matrix not SPD?) for n = " +
                        std::to_string(n_));
        }
    } else {
        impl_->lu.compute(m);
        if (impl_->lu.info() != Eigen::Success) {
            throw Error("SparseDirectSolver: LU factorization failed: " + impl_->lu.lastErrorMessage());
        }
    }
}

SparseDirectSolver::~SparseDirectSolver() = default;
SparseDirectSolver::SparseDirectSolver(SparseDirectSolver&&) noexcept = default;
SparseDirectSolver& SparseDirectSolver::operator=(SparseDirectSolver&&) noexcept = default;

void SparseDirectSolver::solve(std::span<const double> b, std::span<double> x) const
{
    if (static_cast<int>(b.size()) != n_ || static_cast<int>(x.size()) != n_) {
        throw Error("SparseDirectSolver::solve: dimension mismatch");
    }
    Eigen::Map<const Eigen::VectorXd> bv(b.data(), n_);
    Eigen::Map<Eigen::VectorXd> xv(x.data(), n_);
    if (impl_->kind == Kind::Cholesky) {
        xv = impl_->llt.solve(bv);
    } else {
        xv = impl_->lu.solve(bv);
    }
}

LinearOperator SparseDirectSolver::as_operator(std::shared_ptr<const SparseDirectSolver> solver)
{
    const int n = solver->size();
    return {n, n, [solver](std::span<const double> b, std::span<double> x) { solver->solve(b, x); },
            solver->impl_->kind == Kind::Cholesky};
}

DenseOracle dense_oracle(const CsrMatrix& a, bool symmetric)
{
    if (a.rows() > kDenseOracleMaxSize) {
        throw Error("dense_oracle: n = " + std::to_string(a.rows()) + " exceeds limit");
    }
    return dense_oracle(a.to_dense(), symmetric);
}

DenseOracle dense_oracle(const Eigen::MatrixXd& a, bool symmetric)
{
    if (a.rows() > kDenseOracleMaxSize || a.rows() != a.cols()) {
        throw Error("dense_oracle: matrix too large or not square");
    }
    DenseOracle out;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    out.inverse = lu.inverse();
    out.cond1 = a.cwiseAbs().colwise().sum().maxCoeff() * out.inverse.cwiseAbs().colwise().sum().maxCoeff();
    if (symmetric) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        out.eigenvalues = es.eigenvalues();
        const auto absev = out.eigenvalues.cwiseAbs();
        out.cond2 = absev.maxCoeff() / absev.minCoeff();
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
        const auto& s = svd.singularValues();
        out.cond2 = s(0) / s(s.size() - 1);
    }
    return out;
}

} // namespace anisodg
