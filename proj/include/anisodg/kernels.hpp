#pragma once

// Vector and CSR kernels used by every Krylov iteration.
//
// Each kernel has a scalar reference implementation and an AVX2/FMA variant.
// The variant is chosen once at startup from CPUID; setting the environment
// variable ANISODG_ISA=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace anisodg::kernels {

enum class Isa { Scalar, Avx2 };

struct CsrView {
    int rows = 0;
    const int* row_ptr = nullptr;
    const int* col = nullptr;
    const double* val = nullptr;
};

double dot(std::span<const double> x, std::span<const double> y);
double nrm2(std::span<const double> x);
/// y += a*x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// y = x + b*y
void xpby(std::span<const double> x, double b, std::span<double> y);
/// y = A*x
void spmv(const CsrView& a, const double* x, double* y);

Isa active_isa();
bool isa_available(Isa isa);
/// Overrides runtime selection; throws if the ISA is not supported here.
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpby(const double* x, double b, double* y, std::size_t n);
void spmv(const CsrView& a, const double* x, double* y);
} // namespace scalar

namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpby(const double* x, double b, double* y, std::size_t n);
void spmv(const CsrView& a, const double* x, double* y);
} // namespace avx2

} // namespace anisodg::kernels
