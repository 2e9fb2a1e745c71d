#include "epispec/kernels.hpp"

#include <cmath>

// Reference kernels: straight loops, one accumulator, no manual unrolling.
// Every other backend is tested against these.

namespace epispec::kernels {
namespace {

double dot_scalar(const double* x, const double* y, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double nrm2_scalar(const double* x, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return std::sqrt(acc);
}

void axpy_scalar(double a, const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_scalar(double a, double* x, size_t n) {
    for (size_t i = 0; i < n; ++i) x[i] *= a;
}

void hadamard_scalar(const double* x, const double* y, double* z, size_t n) {
    for (size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

void spmv_scalar(const uint32_t* offsets, const uint32_t* columns,
                 const double* weights, size_t n, const double* x, double* y) {
    for (size_t r = 0; r < n; ++r) {
        double acc = 0.0;
        for (uint32_t k = offsets[r]; k < offsets[r + 1]; ++k)
            acc += weights[k] * x[columns[k]];
        y[r] = acc;
    }
}

} // namespace

extern const Ops scalar_ops;
const Ops scalar_ops = {
    "scalar",   dot_scalar,      nrm2_scalar, axpy_scalar,
    scal_scalar, hadamard_scalar, spmv_scalar,
};

} // namespace epispec::kernels
