#include "anisodg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "anisodg/types.hpp"

namespace anisodg {

CsrMatrix::CsrMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col, std::vector<double> val)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_(std::move(col)), val_(std::move(val))
{
    if (static_cast<int>(row_ptr_.size()) != rows_ + 1 || col_.size() != val_.size() ||
        row_ptr_.back() != static_cast<int>(col_.size())) {
        throw Error("CsrMatrix: inconsistent CSR arrays");
    }
}

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets)
{
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<int> row_ptr(rows + 1, 0);
    std::vector<int> col;
    std::vector<double> val;
    col.reserve(triplets.size());
    val.reserve(triplets.size());
    for (std::size_t t = 0; t < triplets.size(); ++t) {
        const auto& tr = triplets[t];
        if (tr.row < 0 || tr.row >= rows || tr.col < 0 || tr.col >= cols) {
            throw Error("CsrMatrix::from_triplets: index out of range");
        }
        if (!col.empty() && t > 0 && triplets[t - 1].row == tr.row && triplets[t - 1].col == tr.col) {
            val.back() += tr.value;
            continue;
        }
        col.push_back(tr.col);
        val.push_back(tr.value);
        ++row_ptr[tr.row + 1];
    }
    for (int i = 0; i < rows; ++i) {
        row_ptr[i + 1] += row_ptr[i];
    }
    return {rows, cols, std::move(row_ptr), std::move(col), std::move(val)};
}

CsrMatrix CsrMatrix::from_pattern(int rows, int cols, std::vector<std::vector<int>> row_cols)
{
    if (static_cast<int>(row_cols.size()) != rows) {
        throw Error("CsrMatrix::from_pattern: row count mismatch");
    }
    std::vector<int> row_ptr(rows + 1, 0);
    for (int i = 0; i < rows; ++i) {
        auto& c = row_cols[i];
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        row_ptr[i + 1] = row_ptr[i] + static_cast<int>(c.size());
    }
    std::vector<int> col;
    col.reserve(row_ptr.back());
    for (const auto& c : row_cols) {
        col.insert(col.end(), c.begin(), c.end());
    }
    std::vector<double> val(col.size(), 0.0);
    return {rows, cols, std::move(row_ptr), std::move(col), std::move(val)};
}

CsrMatrix CsrMatrix::identity(int n)
{
    std::vector<int> row_ptr(n + 1);
    std::vector<int> col(n);
    for (int i = 0; i <= n; ++i) {
        row_ptr[i] = i;
    }
    for (int i = 0; i < n; ++i) {
        col[i] = i;
    }
    return {n, n, std::move(row_ptr), std::move(col), std::vector<double>(n, 1.0)};
}

CsrMatrix CsrMatrix::from_dense(const Eigen::MatrixXd& dense, double drop_tol)
{
    const int rows = static_cast<int>(dense.rows());
    const int cols = static_cast<int>(dense.cols());
    std::vector<int> row_ptr(rows + 1, 0);
    std::vector<int> col;
    std::vector<double> val;
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (std::abs(dense(i, j)) > drop_tol) {
                col.push_back(j);
                val.push_back(dense(i, j));
            }
        }
        row_ptr[i + 1] = static_cast<int>(col.size());
    }
    return {rows, cols, std::move(row_ptr), std::move(col), std::move(val)};
}

long CsrMatrix::find(int i, int j) const
{
    const auto first = col_.begin() + row_ptr_[i];
    const auto last = col_.begin() + row_ptr_[i + 1];
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) {
        return -1;
    }
    return static_cast<long>(it - col_.begin());
}

double CsrMatrix::coeff(int i, int j) const
{
    const long p = find(i, j);
    return p < 0 ? 0.0 : val_[p];
}

void CsrMatrix::add(int i, int j, double v)
{
    const long p = find(i, j);
    if (p < 0) {
        throw Error("CsrMatrix::add: (" + std::to_string(i) + ", " + std::to_string(j) + ") not in pattern");
    }
    val_[p] += v;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_) {
        throw Error("CsrMatrix::multiply: dimension mismatch");
    }
    kernels::spmv(view(), x.data(), y.data());
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const
{
    std::vector<double> y(rows_);
    multiply(x, y);
    return y;
}

std::vector<double> CsrMatrix::diagonal() const
{
    std::vector<double> d(std::min(rows_, cols_), 0.0);
    for (int i = 0; i < static_cast<int>(d.size()); ++i) {
        d[i] = coeff(i, i);
    }
    return d;
}

CsrMatrix CsrMatrix::transpose() const
{
    std::vector<int> row_ptr(cols_ + 1, 0);
    for (int c : col_) {
        ++row_ptr[c + 1];
    }
    for (int j = 0; j < cols_; ++j) {
        row_ptr[j + 1] += row_ptr[j];
    }
    std::vector<int> next(row_ptr.begin(), row_ptr.end() - 1);
    std::vector<int> col(col_.size());
    std::vector<double> val(val_.size());
    for (int i = 0; i < rows_; ++i) {
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            const int dst = next[col_[p]]++;
            col[dst] = i;
            val[dst] = val_[p];
        }
    }
    return {cols_, rows_, std::move(row_ptr), std::move(col), std::move(val)};
}

CsrMatrix CsrMatrix::submatrix(std::span<const int> keep) const { return submatrix(keep, keep); }

CsrMatrix CsrMatrix::submatrix(std::span<const int> row_keep, std::span<const int> col_keep) const
{
    std::vector<int> col_map(cols_, -1);
    for (std::size_t c = 0; c < col_keep.size(); ++c) {
        col_map[col_keep[c]] = static_cast<int>(c);
    }
    const int rows = static_cast<int>(row_keep.size());
    std::vector<int> row_ptr(rows + 1, 0);
    std::vector<int> col;
    std::vector<double> val;
    for (int r = 0; r < rows; ++r) {
        const int i = row_keep[r];
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            const int mapped = col_map[col_[p]];
            if (mapped >= 0) {
                col.push_back(mapped);
                val.push_back(val_[p]);
            }
        }
        // col_keep may be unsorted relative to the original order
        const int begin = row_ptr[r];
        std::vector<std::pair<int, double>> row;
        for (std::size_t q = begin; q < col.size(); ++q) {
            row.emplace_back(col[q], val[q]);
        }
        std::sort(row.begin(), row.end());
        for (std::size_t q = 0; q < row.size(); ++q) {
            col[begin + q] = row[q].first;
            val[begin + q] = row[q].second;
        }
        row_ptr[r + 1] = static_cast<int>(col.size());
    }
    return {rows, static_cast<int>(col_keep.size()), std::move(row_ptr), std::move(col), std::move(val)};
}

CsrMatrix CsrMatrix::scaled(double s) const
{
    CsrMatrix out = *this;
    for (double& v : out.val_) {
        v *= s;
    }
    return out;
}

double CsrMatrix::max_abs() const
{
    double m = 0.0;
    for (double v : val_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double CsrMatrix::norm1() const
{
    std::vector<double> colsum(cols_, 0.0);
    for (std::size_t p = 0; p < col_.size(); ++p) {
        colsum[col_[p]] += std::abs(val_[p]);
    }
    return colsum.empty() ? 0.0 : *std::max_element(colsum.begin(), colsum.end());
}

double CsrMatrix::asymmetry() const
{
    if (rows_ != cols_) {
        throw Error("CsrMatrix::asymmetry: matrix not square");
    }
    double m = 0.0;
    for (int i = 0; i < rows_; ++i) {
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            m = std::max(m, std::abs(val_[p] - coeff(col_[p], i)));
        }
    }
    return m;
}

Eigen::MatrixXd CsrMatrix::to_dense() const
{
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            d(i, col_[p]) += val_[p];
        }
    }
    return d;
}

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b)
{
    if (a.cols() != b.rows()) {
        throw Error("multiply: inner dimension mismatch");
    }
    const auto arp = a.row_ptr();
    const auto aci = a.col_index();
    const auto av = a.values();
    const auto brp = b.row_ptr();
    const auto bci = b.col_index();
    const auto bv = b.values();

    std::vector<int> row_ptr(a.rows() + 1, 0);
    std::vector<int> col;
    std::vector<double> val;
    std::vector<int> marker(b.cols(), -1);
    std::vector<double> acc(b.cols(), 0.0);
    std::vector<int> touched;
    for (int i = 0; i < a.rows(); ++i) {
        touched.clear();
        for (int p = arp[i]; p < arp[i + 1]; ++p) {
            const int k = aci[p];
            const double aik = av[p];
            for (int q = brp[k]; q < brp[k + 1]; ++q) {
                const int j = bci[q];
                if (marker[j] != i) {
                    marker[j] = i;
                    acc[j] = 0.0;
                    touched.push_back(j);
                }
                acc[j] += aik * bv[q];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (int j : touched) {
            col.push_back(j);
            val.push_back(acc[j]);
        }
        row_ptr[i + 1] = static_cast<int>(col.size());
    }
    return {a.rows(), b.cols(), std::move(row_ptr), std::move(col), std::move(val)};
}

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double s)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error("add: dimension mismatch");
    }
    std::vector<Triplet> t;
    t.reserve(a.nnz() + b.nnz());
    for (int i = 0; i < a.rows(); ++i) {
        for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
            t.push_back({i, a.col_index()[p], a.values()[p]});
        }
        for (int p = b.row_ptr()[i]; p < b.row_ptr()[i + 1]; ++p) {
            t.push_back({i, b.col_index()[p], s * b.values()[p]});
        }
    }
    return CsrMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

LinearOperator LinearOperator::from_matrix(const CsrMatrix& a, bool symmetric)
{
    auto m = std::make_shared<const CsrMatrix>(a);
    return {a.rows(), a.cols(), [m](std::span<const double> x, std::span<double> y) { m->multiply(x, y); },
            symmetric};
}

LinearOperator LinearOperator::identity(int n)
{
    return {n, n, [](std::span<const double> x, std::span<double> y) { std::copy(x.begin(), x.end(), y.begin()); },
            true};
}

void LinearOperator::apply(std::span<const double> x, std::span<double> y) const
{
    if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_) {
        throw Error("LinearOperator::apply: dimension mismatch");
    }
    apply_(x, y);
}

std::vector<double> LinearOperator::operator()(std::span<const double> x) const
{
    std::vector<double> y(rows_, 0.0);
    apply(x, y);
    return y;
}

Eigen::MatrixXd LinearOperator::materialize() const
{
    Eigen::MatrixXd m(rows_, cols_);
    std::vector<double> e(cols_, 0.0);
    std::vector<double> y(rows_);
    for (int j = 0; j < cols_; ++j) {
        e[j] = 1.0;
        apply(e, y);
        for (int i = 0; i < rows_; ++i) {
            m(i, j) = y[i];
        }
        e[j] = 0.0;
    }
    return m;
}

} // namespace anisodg
