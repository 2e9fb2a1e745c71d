#pragma once

#include <cstddef>
#include <cstdint>

namespace epispec::kernels {

// Dense-vector and CSR sparse-matrix kernels behind a runtime-selected
// dispatch table. The scalar implementations are the reference; AVX2
// (x86-64) and NEON (aarch64) variants are picked at startup when the CPU
// supports them. Setting EPISPEC_KERNELS=scalar|avx2|neon forces a backend
// (falling back to auto-selection, with a warning, if unavailable).
//
// Reduction order is fixed within each backend, so a given build + backend
// is deterministic run to run. Different backends may disagree in the last
// bits of reductions (different summation trees, FMA contraction); the unit
// suite checks them against scalar with scale-aware tolerances.
struct Ops {
    const char* name;

    double (*dot)(const double* x, const double* y, size_t n);
    double (*nrm2)(const double* x, size_t n);
    // y += a * x
    void (*axpy)(double a, const double* x, double* y, size_t n);
    // x *= a
    void (*scal)(double a, double* x, size_t n);
    // z = x .* y (elementwise)
    void (*hadamard)(const double* x, const double* y, double* z, size_t n);
    // y = A * x for symmetric CSR storage: row r's entries live in
    // [offsets[r], offsets[r+1]) of columns/weights. offsets has n+1 entries.
    void (*spmv)(const uint32_t* offsets, const uint32_t* columns,
                 const double* weights, size_t n, const double* x, double* y);
};

// Active dispatch table. First call performs selection; subsequent calls are
// a pointer read.
const Ops& ops();

// Force a backend by name ("scalar", "avx2", "neon"). Returns false and
// leaves the selection unchanged when the backend is not compiled in or the
// CPU lacks the feature. Intended for tests and benchmarking; not
// synchronized against concurrent ops() users.
bool force_backend(const char* name);

} // namespace epispec::kernels
