#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "epispec/errors.hpp"
#include "internal.hpp"

// Dense symmetric eigensolver: Householder reduction to tridiagonal form
// with accumulated transformations, then implicit-shift QL. This is the
// classic tred2/tql2 pair (EISPACK lineage), kept dependency-free because
// the library needs full spectra only at small n (direct-solver path and
// the Lanczos projected problem).

namespace epispec::detail {
namespace {

// Reduce a (row-major, symmetric) to tridiagonal d/e, accumulating the
// orthogonal transform in a.
void tred2(std::vector<double>& a, std::vector<double>& d, std::vector<double>& e, uint32_t n) {
    auto at = [&](uint32_t r, uint32_t c) -> double& { return a[size_t(r) * n + c]; };

    for (uint32_t i = n - 1; i > 0; --i) {
        const uint32_t l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (uint32_t k = 0; k <= l; ++k) scale += std::fabs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (uint32_t k = 0; k <= l; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (uint32_t j = 0; j <= l; ++j) {
                    at(j, i) = at(i, j) / h;
                    g = 0.0;
                    for (uint32_t k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
                    for (uint32_t k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
                    e[j] = g / h;
                    f += e[j] * at(i, j);
                }
                const double hh = f / (h + h);
                for (uint32_t j = 0; j <= l; ++j) {
                    f = at(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (uint32_t k = 0; k <= j; ++k) at(j, k) -= f * e[k] + g * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (uint32_t i = 0; i < n; ++i) {
        if (d[i] != 0.0) {
            for (uint32_t j = 0; j < i; ++j) {
                double g = 0.0;
                for (uint32_t k = 0; k < i; ++k) g += at(i, k) * at(k, j);
                for (uint32_t k = 0; k < i; ++k) at(k, j) -= g * at(k, i);
            }
        }
        d[i] = at(i, i);
        at(i, i) = 1.0;
        for (uint32_t j = 0; j < i; ++j) at(j, i) = at(i, j) = 0.0;
    }
}

// Implicit-shift QL on the tridiagonal (d, e), rotating the accumulated
// transform in a so its columns become eigenvectors.
void tql2(std::vector<double>& a, std::vector<double>& d, std::vector<double>& e, uint32_t n) {
    auto at = [&](uint32_t r, uint32_t c) -> double& { return a[size_t(r) * n + c]; };

    for (uint32_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (uint32_t l = 0; l < n; ++l) {
        uint32_t iter = 0;
        uint32_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 1e-300 || std::fabs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 64)
                    throw NumericalError("dense eigensolver: QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow_break = false;
                for (uint32_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow_break = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (uint32_t k = 0; k < n; ++k) {
                        f = at(k, i + 1);
                        at(k, i + 1) = s * at(k, i) + c * f;
                        at(k, i) = c * at(k, i) - s * f;
                    }
                }
                if (underflow_break) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace

void dense_symmetric_eig(std::vector<double>& a, std::vector<double>& eigenvalues, uint32_t n) {
    eigenvalues.assign(n, 0.0);
    if (n == 0) return;
    if (n == 1) {
        eigenvalues[0] = a[0];
        a[0] = 1.0;
        return;
    }
    std::vector<double> off(n, 0.0);
    tred2(a, eigenvalues, off, n);
    tql2(a, eigenvalues, off, n);

    // Ascending eigenvalue order with matching column permutation.
    std::vector<uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](uint32_t x, uint32_t y) { return eigenvalues[x] < eigenvalues[y]; });
    std::vector<double> sorted_vals(n);
    std::vector<double> sorted_vecs(size_t(n) * n);
    for (uint32_t k = 0; k < n; ++k) {
        sorted_vals[k] = eigenvalues[perm[k]];
        for (uint32_t i = 0; i < n; ++i) sorted_vecs[size_t(i) * n + k] = a[size_t(i) * n + perm[k]];
    }
    eigenvalues = std::move(sorted_vals);
    a = std::move(sorted_vecs);
}

void sign_fix(std::vector<double>& v) {
    double max_abs = 0.0;
    for (double x : v) max_abs = std::max(max_abs, std::fabs(x));
    if (max_abs == 0.0) return;
    for (double x : v) {
        if (std::fabs(x) > 1e-12 * max_abs) {
            if (x < 0.0)
                for (double& y : v) y = -y;
            return;
        }
    }
}

} // namespace epispec::detail
