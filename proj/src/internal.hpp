#pragma once

// Shared internals of the spectral solvers. Not installed; tests reach these
// only through the public entry points.

#include <cstdint>
#include <functional>
#include <vector>

namespace epispec::detail {

// Full eigensystem of a dense symmetric matrix, row-major a (n x n).
// Householder tridiagonalization followed by implicit-shift QL (the classic
// tred2/tql2 pair). On return eigenvalues ascend and the eigenvectors are
// the columns of a: v_k[i] = a[i*n + k]. Throws NumericalError when QL
// stalls (pathological input).
void dense_symmetric_eig(std::vector<double>& a, std::vector<double>& eigenvalues, uint32_t n);

// Deterministic sign convention: flips v so its first component with
// |v_i| > 1e-12 * max|v| is positive. No-op on the zero vector.
void sign_fix(std::vector<double>& v);

struct RitzPair {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0;
};

// k_want largest eigenpairs of a symmetric operator by thick-restart
// Lanczos with full CGS2 reorthogonalization inside the basis. apply must
// compute y = M x for unit-length buffers of size n. Deterministic: fixed
// seeded start vector, fixed restart policy. Returns pairs in descending
// eigenvalue order. Throws NumericalError when max_matvecs is exhausted
// before all k_want residuals reach tol.
std::vector<RitzPair> lanczos_largest(
    const std::function<void(const double*, double*)>& apply, uint32_t n, uint32_t k_want,
    double tol, uint64_t max_matvecs, uint32_t basis_size = 64);

} // namespace epispec::detail

namespace epispec {
struct BenchmarkSpec;
namespace detail {
// Structural and range checks shared by generate() and run_grid(); throws
// DataError with a field-specific message.
void validate_benchmark_spec(const BenchmarkSpec& spec);
} // namespace detail
} // namespace epispec
