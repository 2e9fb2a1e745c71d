#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "epispec/errors.hpp"
#include "epispec/kernels.hpp"
#include "epispec/rng.hpp"
#include "internal.hpp"

// Thick-restart Lanczos (Wu & Simon style) for a few extreme eigenpairs of a
// symmetric matrix-free operator. Two robustness choices:
//   - full CGS2 reorthogonalization of every new Krylov vector against the
//     whole (small) basis, so no ghost eigenvalues at the cost of O(m*n) per
//     step — the right trade at m <= 64 when a matvec is O(E);
//   - the projected matrix is filled directly from the reorthogonalization
//     coefficients <v_i, M v_j>, which stays exact across restarts instead
//     of relying on the textbook arrowhead bookkeeping.
// Deterministic by construction: fixed seeded start vector, fixed restart
// rule, fixed reduction order in the kernels.

namespace epispec::detail {
namespace {

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    return kernels::ops().dot(x.data(), y.data(), x.size());
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    kernels::ops().axpy(a, x.data(), y.data(), y.size());
}

double nrm2(const std::vector<double>& x) { return kernels::ops().nrm2(x.data(), x.size()); }

void scal(double a, std::vector<double>& x) { kernels::ops().scal(a, x.data(), x.size()); }

// Deterministic replacement vector for (re)starts and breakdowns.
std::vector<double> seeded_unit_vector(uint32_t n, uint64_t salt) {
    Xoshiro256 rng(0x1a2b3c4d5e6f7788ull ^ salt);
    std::vector<double> v(n);
    for (auto& x : v) x = 2.0 * rng.next_double() - 1.0;
    const double norm = nrm2(v);
    scal(1.0 / norm, v);
    return v;
}

} // namespace

std::vector<RitzPair> lanczos_largest(
    const std::function<void(const double*, double*)>& apply, uint32_t n, uint32_t k_want,
    double tol, uint64_t max_matvecs, uint32_t basis_size) {
    const uint32_t m = std::min(basis_size, n);
    const uint32_t keep =
        std::min({8u, m > k_want + 2 ? m - 2 : k_want, m > 1 ? m - 1 : 1u});
    if (k_want == 0 || k_want > n)
        throw NumericalError("lanczos: requested " + std::to_string(k_want) +
                             " pairs from an operator of size " + std::to_string(n));

    std::vector<std::vector<double>> basis; // current orthonormal basis, size <= m
    basis.reserve(m);
    basis.push_back(seeded_unit_vector(n, 0));

    // Projected symmetric matrix T (m x m, row-major), valid in the leading
    // basis.size() block.
    std::vector<double> T(size_t(m) * m, 0.0);
    auto t_at = [&](uint32_t r, uint32_t c) -> double& { return T[size_t(r) * m + c]; };

    uint64_t matvecs = 0;
    uint64_t breakdowns = 0;
    std::vector<double> w(n), scratch(n);
    // Normalized remainder of the last expansion step. Every Ritz residual
    // is parallel to it (r_p = c_p * w), so it is the one direction a
    // restart must keep for the kept pairs to keep improving.
    std::vector<double> carry;
    double last_worst_residual = std::numeric_limits<double>::infinity();

    // Operator scale estimate for the convergence test; grows as Ritz values
    // appear. Residual target: tol * max(1, scale).
    double scale = 1.0;

    while (true) {
        const uint32_t k_start = static_cast<uint32_t>(basis.size()) - 1;

        // Extend the basis to m vectors.
        for (uint32_t j = k_start; j < m; ++j) {
            if (matvecs >= max_matvecs)
                throw NumericalError(
                    "lanczos: no convergence after " + std::to_string(matvecs) +
                    " matvecs (last worst residual " + std::to_string(last_worst_residual) + ")");
            apply(basis[j].data(), w.data());
            ++matvecs;

            // CGS2: two orthogonalization sweeps; the first sweep's
            // coefficients are the projected-matrix column <v_i, M v_j>.
            for (uint32_t i = 0; i <= j; ++i) {
                const double h = dot(basis[i], w);
                axpy(-h, basis[i], w);
                t_at(i, j) = h;
                t_at(j, i) = h;
            }
            for (uint32_t i = 0; i <= j; ++i) {
                const double h = dot(basis[i], w);
                axpy(-h, basis[i], w);
            }

            double beta = nrm2(w);
            if (j + 1 == m) {
                // Basis full: stash the remainder as the restart direction.
                if (beta >= 1e-13 * std::max(1.0, scale)) {
                    carry = w;
                    scal(1.0 / beta, carry);
                } else {
                    carry = seeded_unit_vector(n, 0x4000 + ++breakdowns);
                }
                break;
            }
            if (beta < 1e-13 * std::max(1.0, scale)) {
                // Invariant subspace hit: continue with a fresh deterministic
                // direction orthogonal to the basis (coupling is ~0).
                w = seeded_unit_vector(n, ++breakdowns);
                for (int sweep = 0; sweep < 2; ++sweep)
                    for (uint32_t i = 0; i <= j; ++i) axpy(-dot(basis[i], w), basis[i], w);
                beta = nrm2(w);
                if (beta < 1e-13)
                    throw NumericalError("lanczos: basis replacement failed (n too small?)");
                scal(1.0 / beta, w);
                basis.push_back(w);
                // The projected entries to this direction are below the
                // orthogonality floor; leave the existing ~0 couplings.
                continue;
            }
            scal(1.0 / beta, w);
            basis.push_back(w);
        }

        // Rayleigh-Ritz on the projected block.
        const uint32_t dim = static_cast<uint32_t>(basis.size());
        std::vector<double> tsub(size_t(dim) * dim);
        for (uint32_t r = 0; r < dim; ++r)
            for (uint32_t c = 0; c < dim; ++c) tsub[size_t(r) * dim + c] = t_at(r, c);
        std::vector<double> theta;
        dense_symmetric_eig(tsub, theta, dim);
        for (double v : theta) scale = std::max(scale, std::fabs(v));

        // Assemble the leading k_check Ritz vectors (descending eigenvalue).
        const uint32_t k_check = std::min(std::max(k_want, keep), dim);
        std::vector<std::vector<double>> ritz(k_check, std::vector<double>(n, 0.0));
        std::vector<double> ritz_val(k_check);
        for (uint32_t p = 0; p < k_check; ++p) {
            const uint32_t col = dim - 1 - p;
            ritz_val[p] = theta[col];
            for (uint32_t i = 0; i < dim; ++i)
                axpy(tsub[size_t(i) * dim + col], basis[i], ritz[p]);
        }

        // Explicit residuals for the wanted pairs.
        bool converged = true;
        last_worst_residual = 0.0;
        std::vector<double> residual(k_check, 0.0);
        for (uint32_t p = 0; p < k_want && p < k_check; ++p) {
            apply(ritz[p].data(), scratch.data());
            ++matvecs;
            axpy(-ritz_val[p], ritz[p], scratch);
            residual[p] = nrm2(scratch);
            last_worst_residual = std::max(last_worst_residual, residual[p]);
            if (residual[p] > tol) converged = false;
        }

        if (converged) {
            std::vector<RitzPair> out(k_want);
            for (uint32_t p = 0; p < k_want; ++p) {
                const double norm = nrm2(ritz[p]);
                scal(1.0 / norm, ritz[p]);
                out[p].value = ritz_val[p];
                out[p].vector = std::move(ritz[p]);
                out[p].residual = residual[p];
            }
            return out;
        }

        // Thick restart: keep the leading Ritz vectors plus the remainder
        // direction; re-orthonormalize to clean up roundoff.
        std::vector<std::vector<double>> next;
        next.reserve(keep + 1);
        for (uint32_t p = 0; p < std::min(keep, k_check); ++p) next.push_back(std::move(ritz[p]));
        if (carry.empty()) carry = seeded_unit_vector(n, 0x4000);
        next.push_back(carry);
        for (uint32_t j = 0; j < next.size(); ++j) {
            for (int sweep = 0; sweep < 2; ++sweep)
                for (uint32_t i = 0; i < j; ++i) axpy(-dot(next[i], next[j]), next[i], next[j]);
            const double norm = nrm2(next[j]);
            if (norm < 1e-13) {
                next[j] = seeded_unit_vector(n, 0x9000 + ++breakdowns);
                for (int sweep = 0; sweep < 2; ++sweep)
                    for (uint32_t i = 0; i < j; ++i) axpy(-dot(next[i], next[j]), next[i], next[j]);
                const double renorm = nrm2(next[j]);
                scal(1.0 / renorm, next[j]);
            } else {
                scal(1.0 / norm, next[j]);
            }
        }
        basis = std::move(next);

        // Rebuild the projected block for the kept vectors from scratch so
        // restarts do not accumulate projection error: T_ij = <v_i, M v_j>.
        std::fill(T.begin(), T.end(), 0.0);
        const uint32_t kept = static_cast<uint32_t>(basis.size());
        for (uint32_t j = 0; j < kept; ++j) {
            if (matvecs >= max_matvecs)
                throw NumericalError(
                    "lanczos: no convergence after " + std::to_string(matvecs) +
                    " matvecs (last worst residual " + std::to_string(last_worst_residual) + ")");
            apply(basis[j].data(), w.data());
            ++matvecs;
            for (uint32_t i = 0; i < kept; ++i) {
                const double h = dot(basis[i], w);
                if (i <= j) {
                    t_at(i, j) = h;
                    t_at(j, i) = h;
                }
            }
        }
    }
}

} // namespace epispec::detail
