#pragma once

// Dense vector kernels behind the LU factorization, residual evaluation and
// nonlocal row assembly. Each kernel has a scalar reference implementation and
// an AVX2+FMA variant; the active backend is selected once at runtime from
// CPUID and can be overridden with LEVYEXIT_KERNELS=scalar|avx2.

#include <cstddef>
#include <span>
#include <string_view>

namespace levyexit::kernels {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
    Backend backend;
    double (*dot)(const double* x, const double* y, std::size_t n);
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
};

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double sum(const double* x, std::size_t n);
}  // namespace scalar

#if defined(LEVYEXIT_HAVE_AVX2)
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double sum(const double* x, std::size_t n);
}  // namespace avx2
#endif

/// True when the backend was compiled in and the CPU supports it.
bool backend_available(Backend b);
const KernelTable& table_for(Backend b);
Backend active_backend();
/// Switch the process-wide backend. Not synchronized with running solves.
void set_backend(Backend b);
std::string_view backend_name(Backend b);

/// Active table; set once at static initialization and by set_backend().
extern const KernelTable* g_active;

inline double dot(std::span<const double> x, std::span<const double> y) {
    return g_active->dot(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    g_active->axpy(a, x.data(), y.data(), x.size());
}

inline double sum(std::span<const double> x) {
    return g_active->sum(x.data(), x.size());
}

}  // namespace levyexit::kernels
