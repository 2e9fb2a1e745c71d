#include <cmath>
#include <string>
#include <vector>

#include "epispec/errors.hpp"
#include "epispec/graph.hpp"
#include "epispec/kernels.hpp"
#include "epispec/rng.hpp"
#include "epispec/spectral.hpp"

namespace epispec {

namespace {

// Largest operator eigenvalue by power iteration, for the explicit-Euler
// stability bound. The start vector is seeded random rather than all-ones:
// for the Laplacian family the ones vector IS the bottom eigenvector, so a
// deterministic generic direction is needed. A loose tolerance suffices —
// the value only gates dt.
double operator_lambda_max(const Operator& op) {
    const uint32_t n = op.graph().node_count();
    if (n == 0) return 0.0;
    const auto& krn = kernels::ops();
    Xoshiro256 rng(0xd1f0051e57a7e500ull);
    std::vector<double> x(n), y(n), r(n);
    for (auto& v : x) v = 2.0 * rng.next_double() - 1.0;
    double norm = krn.nrm2(x.data(), n);
    krn.scal(1.0 / norm, x.data(), n);
    const double tol = 1e-6;
    double lambda = 0.0;
    const uint64_t max_iter = 100ull * n + 1000;
    for (uint64_t it = 0; it < max_iter; ++it) {
        op.apply(x.data(), y.data());
        lambda = krn.dot(x.data(), y.data(), n);
        std::copy(y.begin(), y.end(), r.begin());
        krn.axpy(-lambda, x.data(), r.data(), n);
        if (krn.nrm2(r.data(), n) <= tol * std::max(1.0, std::fabs(lambda))) return lambda;
        norm = krn.nrm2(y.data(), n);
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw NumericalError("diffusion stability estimate: iterate norm degenerated");
        for (uint32_t i = 0; i < n; ++i) x[i] = y[i] / norm;
    }
    throw NumericalError("diffusion stability estimate did not converge");
}

} // namespace

std::vector<DiffusionState> simulate_diffusion(const Graph& g, OperatorKind kind,
                                               const std::vector<double>& u0, double dt,
                                               uint64_t steps, uint64_t stride) {
    const uint32_t n = g.node_count();
    if (u0.size() != n)
        throw DataError("diffusion initial state has length " + std::to_string(u0.size()) +
                        ", graph has " + std::to_string(n) + " nodes");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DataError("diffusion dt must be positive");
    if (stride == 0) throw DataError("diffusion stride must be at least 1");

    Operator op(g, kind);
    const double lambda = operator_lambda_max(op);
    if (lambda > 0.0 && dt >= 2.0 / lambda)
        throw DataError("diffusion dt " + std::to_string(dt) +
                        " violates the explicit-Euler stability bound dt < " +
                        std::to_string(2.0 / lambda) + " (largest operator eigenvalue " +
                        std::to_string(lambda) + ")");

    const auto& krn = kernels::ops();
    double u0_max = 0.0;
    for (double v : u0) u0_max = std::max(u0_max, std::fabs(v));
    const double blowup = 1e6 * (1.0 + u0_max);

    std::vector<DiffusionState> trajectory;
    trajectory.reserve(2 + steps / stride);
    std::vector<double> u = u0, w(n);
    trajectory.push_back({0.0, u});
    for (uint64_t k = 1; k <= steps; ++k) {
        // u <- u - dt * M u
        op.apply(u.data(), w.data());
        krn.axpy(-dt, w.data(), u.data(), n);
        double u_max = 0.0;
        for (double v : u) u_max = std::max(u_max, std::fabs(v));
        if (!std::isfinite(u_max) || u_max > blowup)
            throw NumericalError("diffusion diverged at step " + std::to_string(k) +
                                 " (max |u| " + std::to_string(u_max) + ")");
        if (k % stride == 0 || k == steps) trajectory.push_back({dt * k, u});
    }
    return trajectory;
}

} // namespace epispec
