#include "epispec/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <cmath>
#include <immintrin.h>

// AVX2+FMA kernels. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a runtime CPU-feature check (see
// kernels_dispatch.cpp). Reductions use four independent accumulators folded
// in a fixed order, so results are reproducible run to run on a given build.

namespace epispec::kernels {
namespace {

inline double reduce4(__m256d v) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, v);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double dot_avx2(const double* x, const double* y, size_t n) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
        a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
        a2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), a2);
        a3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), a3);
    }
    for (; i + 4 <= n; i += 4)
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    double acc = reduce4(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double nrm2_avx2(const double* x, size_t n) { return std::sqrt(dot_avx2(x, x, n)); }

void axpy_avx2(double a, const double* x, double* y, size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scal_avx2(double a, double* x, size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

void hadamard_avx2(const double* x, const double* y, double* z, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) z[i] = x[i] * y[i];
}

void spmv_avx2(const uint32_t* offsets, const uint32_t* columns,
               const double* weights, size_t n, const double* x, double* y) {
    for (size_t r = 0; r < n; ++r) {
        const uint32_t begin = offsets[r], end = offsets[r + 1];
        uint32_t k = begin;
        __m256d acc = _mm256_setzero_pd();
        for (; k + 4 <= end; k += 4) {
            const __m128i idx =
                _mm_loadu_si128(reinterpret_cast<const __m128i*>(columns + k));
            const __m256d xs = _mm256_i32gather_pd(x, idx, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(weights + k), xs, acc);
        }
        double sum = reduce4(acc);
        for (; k < end; ++k) sum += weights[k] * x[columns[k]];
        y[r] = sum;
    }
}

} // namespace

extern const Ops avx2_ops;
const Ops avx2_ops = {
    "avx2",    dot_avx2,      nrm2_avx2, axpy_avx2,
    scal_avx2, hadamard_avx2, spmv_avx2,
};

} // namespace epispec::kernels

#endif // x86-64
