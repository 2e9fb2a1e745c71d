#include "epispec/kernels.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace epispec::kernels {

extern const Ops scalar_ops;
#if defined(EPISPEC_BUILD_AVX2)
extern const Ops avx2_ops;
#endif
#if defined(EPISPEC_BUILD_NEON)
extern const Ops neon_ops;
#endif

namespace {

bool cpu_supports_avx2() {
#if defined(EPISPEC_BUILD_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops* backend_by_name(const char* name) {
    if (std::strcmp(name, "scalar") == 0) return &scalar_ops;
#if defined(EPISPEC_BUILD_AVX2)
    if (std::strcmp(name, "avx2") == 0 && cpu_supports_avx2()) return &avx2_ops;
#endif
#if defined(EPISPEC_BUILD_NEON)
    if (std::strcmp(name, "neon") == 0) return &neon_ops;
#endif
    return nullptr;
}

const Ops* auto_select() {
#if defined(EPISPEC_BUILD_AVX2)
    if (cpu_supports_avx2()) return &avx2_ops;
#endif
#if defined(EPISPEC_BUILD_NEON)
    return &neon_ops;
#else
    return &scalar_ops;
#endif
}

const Ops* initial_selection() {
    if (const char* env = std::getenv("EPISPEC_KERNELS")) {
        if (const Ops* forced = backend_by_name(env)) return forced;
        std::fprintf(stderr,
                     "warning: EPISPEC_KERNELS=%s not available; using auto-selected backend\n",
                     env);
    }
    return auto_select();
}

const Ops*& active_slot() {
    static const Ops* active = initial_selection();
    return active;
}

} // namespace

const Ops& ops() { return *active_slot(); }

bool force_backend(const char* name) {
    const Ops* backend = backend_by_name(name);
    if (!backend) return false;
    active_slot() = backend;
    return true;
}

} // namespace epispec::kernels
