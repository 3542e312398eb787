#include "anisodg/kernels.hpp"

namespace anisodg::kernels::scalar {

double dot(const double* x, const double* y, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += x[i] * y[i];
    }
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += a * x[i];
    }
}

void xpby(const double* x, double b, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = x[i] + b * y[i];
    }
}

void spmv(const CsrView& a, const double* x, double* y)
{
    for (int i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
            s += a.val[p] * x[a.col[p]];
        }
        y[i] = s;
    }
}

} // namespace anisodg::kernels::scalar
