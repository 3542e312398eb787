#include "anisodg/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include "anisodg/types.hpp"

namespace anisodg::kernels {

namespace {

bool cpu_has_avx2()
{
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect()
{
    if (const char* env = std::getenv("ANISODG_ISA")) {
        if (std::string(env) == "scalar") {
            return Isa::Scalar;
        }
    }
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current()
{
    static std::atomic<Isa> isa{detect()};
    return isa;
}

} // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

void force_isa(Isa isa)
{
    if (!isa_available(isa)) {
        throw Error("kernels: requested ISA " + std::string(isa_name(isa)) + " not available on this CPU");
    }
    current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> x, std::span<const double> y)
{
    if (active_isa() == Isa::Avx2) {
        return avx2::dot(x.data(), y.data(), x.size());
    }
    return scalar::dot(x.data(), y.data(), x.size());
}

double nrm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double a, std::span<const double> x, std::span<double> y)
{
    if (active_isa() == Isa::Avx2) {
        avx2::axpy(a, x.data(), y.data(), x.size());
    } else {
        scalar::axpy(a, x.data(), y.data(), x.size());
    }
}

void xpby(std::span<const double> x, double b, std::span<double> y)
{
    if (active_isa() == Isa::Avx2) {
        avx2::xpby(x.data(), b, y.data(), x.size());
    } else {
        scalar::xpby(x.data(), b, y.data(), x.size());
    }
}

void spmv(const CsrView& a, const double* x, double* y)
{
    if (active_isa() == Isa::Avx2) {
        avx2::spmv(a, x, y);
    } else {
        scalar::spmv(a, x, y);
    }
}

} // namespace anisodg::kernels
