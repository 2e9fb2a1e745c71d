#include "epispec/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

// NEON (AdvSIMD) kernels for aarch64, where 128-bit float64x2 vectors are
// baseline. There is no hardware gather, so spmv loads x entries through
// scalar addressing into vector lanes. Fixed two-accumulator reduction order
// keeps a given build deterministic run to run.

namespace epispec::kernels {
namespace {

double dot_neon(const double* x, const double* y, size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0), a1 = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vfmaq_f64(a0, vld1q_f64(x + i), vld1q_f64(y + i));
        a1 = vfmaq_f64(a1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    }
    for (; i + 2 <= n; i += 2) a0 = vfmaq_f64(a0, vld1q_f64(x + i), vld1q_f64(y + i));
    const float64x2_t s = vaddq_f64(a0, a1);
    double acc = vgetq_lane_f64(s, 0) + vgetq_lane_f64(s, 1);
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double nrm2_neon(const double* x, size_t n) { return std::sqrt(dot_neon(x, x, n)); }

void axpy_neon(double a, const double* x, double* y, size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

void scal_neon(double a, double* x, size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

void hadamard_neon(const double* x, const double* y, double* z, size_t n) {
    size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(z + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    for (; i < n; ++i) z[i] = x[i] * y[i];
}

void spmv_neon(const uint32_t* offsets, const uint32_t* columns,
               const double* weights, size_t n, const double* x, double* y) {
    for (size_t r = 0; r < n; ++r) {
        const uint32_t begin = offsets[r], end = offsets[r + 1];
        uint32_t k = begin;
        float64x2_t acc = vdupq_n_f64(0.0);
        for (; k + 2 <= end; k += 2) {
            // Manual gather: two scalar loads packed into one vector.
            const float64x2_t xs =
                vcombine_f64(vld1_f64(x + columns[k]), vld1_f64(x + columns[k + 1]));
            acc = vfmaq_f64(acc, vld1q_f64(weights + k), xs);
        }
        double sum = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
        for (; k < end; ++k) sum += weights[k] * x[columns[k]];
        y[r] = sum;
    }
}

} // namespace

extern const Ops neon_ops;
const Ops neon_ops = {
    "neon",    dot_neon,      nrm2_neon, axpy_neon,
    scal_neon, hadamard_neon, spmv_neon,
};

} // namespace epispec::kernels

#endif // aarch64
