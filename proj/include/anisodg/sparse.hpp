#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "anisodg/kernels.hpp"

namespace anisodg {

struct Triplet {
    int row;
    int col;
    double value;
};

/// Compressed sparse row matrix. Column indices are sorted within each row and
/// unique.
class CsrMatrix {
public:
    CsrMatrix() = default;
    CsrMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col, std::vector<double> val);

    /// Sums duplicate entries. Explicit zeros are kept (they are part of the
    /// structural pattern).
    static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);
    /// Zero-valued matrix with the given per-row column sets (unsorted ok).
    static CsrMatrix from_pattern(int rows, int cols, std::vector<std::vector<int>> row_cols);
    static CsrMatrix identity(int n);
    static CsrMatrix from_dense(const Eigen::MatrixXd& dense, double drop_tol = 0.0);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const { return val_.size(); }

    std::span<const int> row_ptr() const { return row_ptr_; }
    std::span<const int> col_index() const { return col_; }
    std::span<const double> values() const { return val_; }
    std::span<double> values() { return val_; }

    kernels::CsrView view() const { return {rows_, row_ptr_.data(), col_.data(), val_.data()}; }

    /// Position of (i, j) in the value array, or -1 when not in the pattern.
    long find(int i, int j) const;
    double coeff(int i, int j) const;
    /// Adds into an existing pattern entry; throws if (i, j) is not structural.
    void add(int i, int j, double v);

    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;

    std::vector<double> diagonal() const;
    CsrMatrix transpose() const;
    /// Rows and columns restricted to the sorted index set `keep`.
    CsrMatrix submatrix(std::span<const int> keep) const;
    CsrMatrix submatrix(std::span<const int> row_keep, std::span<const int> col_keep) const;
    CsrMatrix scaled(double s) const;

    double max_abs() const;
    double norm1() const;
    /// max |a_ij - a_ji|
    double asymmetry() const;

    Eigen::MatrixXd to_dense() const;

    friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_;
    std::vector<double> val_;
};

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);
/// a + s*b, pattern union.
CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double s = 1.0);

/// A linear map y = op(x). `symmetric` is metadata only.
class LinearOperator {
public:
    using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

    LinearOperator() = default;
    LinearOperator(int rows, int cols, ApplyFn apply, bool symmetric = false)
        : rows_(rows), cols_(cols), apply_(std::move(apply)), symmetric_(symmetric)
    {
    }

    static LinearOperator from_matrix(const CsrMatrix& a, bool symmetric = false);
    static LinearOperator identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool symmetric() const { return symmetric_; }
    explicit operator bool() const { return static_cast<bool>(apply_); }

    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> operator()(std::span<const double> x) const;

    /// Columns of the operator applied to unit vectors; for tests and small oracles.
    Eigen::MatrixXd materialize() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    ApplyFn apply_;
    bool symmetric_ = false;
};

} // namespace anisodg
