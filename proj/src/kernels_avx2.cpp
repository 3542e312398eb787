#include "anisodg/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define ANISODG_HAVE_AVX2 1
#else
#define ANISODG_HAVE_AVX2 0
#endif

namespace anisodg::kernels::avx2 {

#if ANISODG_HAVE_AVX2

namespace {

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

} // namespace

double dot(const double* x, const double* y, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        s += x[i] * y[i];
    }
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n)
{
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i) {
        y[i] += a * x[i];
    }
}

void xpby(const double* x, double b, double* y, std::size_t n)
{
    const __m256d bv = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d yv = _mm256_fmadd_pd(bv, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i) {
        y[i] = x[i] + b * y[i];
    }
}

void spmv(const CsrView& a, const double* x, double* y)
{
    for (int i = 0; i < a.rows; ++i) {
        const int begin = a.row_ptr[i];
        const int end = a.row_ptr[i + 1];
        __m256d acc = _mm256_setzero_pd();
        int p = begin;
        for (; p + 4 <= end; p += 4) {
            const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.col + p));
            const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(a.val + p), xv, acc);
        }
        double s = hsum(acc);
        for (; p < end; ++p) {
            s += a.val[p] * x[a.col[p]];
        }
        y[i] = s;
    }
}

#else

double dot(const double* x, const double* y, std::size_t n) { return scalar::dot(x, y, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { scalar::axpy(a, x, y, n); }
void xpby(const double* x, double b, double* y, std::size_t n) { scalar::xpby(x, b, y, n); }
void spmv(const CsrView& a, const double* x, double* y) { scalar::spmv(a, x, y); }

#endif

} // namespace anisodg::kernels::avx2
