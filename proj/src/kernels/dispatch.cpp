#include <cstdlib>
#include <string>

#include "levyexit/errors.hpp"
#include "levyexit/kernels.hpp"

namespace levyexit::kernels {

namespace {

constexpr KernelTable kScalar{Backend::Scalar, &scalar::dot, &scalar::axpy, &scalar::sum};
#if defined(LEVYEXIT_HAVE_AVX2)
constexpr KernelTable kAvx2{Backend::Avx2, &avx2::dot, &avx2::axpy, &avx2::sum};
#endif

bool cpu_has_avx2() {
#if defined(LEVYEXIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* select_initial() {
    const char* env = std::getenv("LEVYEXIT_KERNELS");
    if (env != nullptr && std::string(env) == "scalar") return &kScalar;
    if (backend_available(Backend::Avx2)) return &table_for(Backend::Avx2);
    return &kScalar;
}

}  // namespace

const KernelTable* g_active = select_initial();

bool backend_available(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return true;
        case Backend::Avx2:
            return cpu_has_avx2();
    }
    return false;
}

const KernelTable& table_for(Backend b) {
    if (!backend_available(b)) {
        throw ValidationError("kernel backend '" + std::string(backend_name(b)) +
                              "' is not available on this build or CPU");
    }
#if defined(LEVYEXIT_HAVE_AVX2)
    if (b == Backend::Avx2) return kAvx2;
#endif
    return kScalar;
}

Backend active_backend() { return g_active->backend; }

void set_backend(Backend b) { g_active = &table_for(b); }

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return "scalar";
        case Backend::Avx2:
            return "avx2";
    }
    return "unknown";
}

}  // namespace levyexit::kernels
