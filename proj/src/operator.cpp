#include <cmath>
#include <string>
#include <vector>

#include "epispec/errors.hpp"
#include "epispec/graph.hpp"
#include "epispec/kernels.hpp"
#include "epispec/spectral.hpp"

namespace epispec {

namespace {

void require_positive_degrees(const Graph& g, const char* kind_name) {
    const auto& d = g.degrees();
    for (uint32_t i = 0; i < g.node_count(); ++i)
        if (d[i] <= 0.0)
            throw DataError(std::string(kind_name) + " operator requires positive degrees; node " +
                            std::to_string(i) + " is isolated");
}

} // namespace

Operator::Operator(const Graph& g, OperatorKind kind, const SolveOptions& opts)
    : g_(g), kind_(kind) {
    switch (kind_) {
    case OperatorKind::Laplacian:
        break;
    case OperatorKind::SymmetricNormalized: {
        require_positive_degrees(g_, "symmetric normalized");
        inv_sqrt_degree_.resize(g_.node_count());
        for (uint32_t i = 0; i < g_.node_count(); ++i)
            inv_sqrt_degree_[i] = 1.0 / std::sqrt(g_.degrees()[i]);
        break;
    }
    case OperatorKind::RandomWalk: {
        require_positive_degrees(g_, "random walk");
        inv_degree_.resize(g_.node_count());
        for (uint32_t i = 0; i < g_.node_count(); ++i) inv_degree_[i] = 1.0 / g_.degrees()[i];
        break;
    }
    case OperatorKind::Replicator: {
        if (!is_connected(g_))
            throw DataError(
                "replicator operator requires a connected graph (extract the largest "
                "component first)");
        SpectralPair perron = eigenvector_centrality(g_, opts.tol, opts.max_iter);
        lambda_max_ = perron.value;
        theta_ = std::move(perron.vector);
        break;
    }
    }
}

void Operator::apply(const double* x, double* y) const {
    const uint32_t n = g_.node_count();
    const auto& d = g_.degrees();
    switch (kind_) {
    case OperatorKind::Laplacian:
        g_.adjacency_multiply(x, y);
        for (uint32_t i = 0; i < n; ++i) y[i] = d[i] * x[i] - y[i];
        break;
    case OperatorKind::SymmetricNormalized: {
        // y = x - D^{-1/2} A D^{-1/2} x, one scratch for the scaled input.
        thread_local std::vector<double> scratch;
        scratch.resize(n);
        for (uint32_t i = 0; i < n; ++i) scratch[i] = inv_sqrt_degree_[i] * x[i];
        g_.adjacency_multiply(scratch.data(), y);
        for (uint32_t i = 0; i < n; ++i) y[i] = x[i] - inv_sqrt_degree_[i] * y[i];
        break;
    }
    case OperatorKind::RandomWalk:
        g_.adjacency_multiply(x, y);
        for (uint32_t i = 0; i < n; ++i) y[i] = x[i] - inv_degree_[i] * y[i];
        break;
    case OperatorKind::Replicator:
        g_.adjacency_multiply(x, y);
        for (uint32_t i = 0; i < n; ++i) y[i] = lambda_max_ * x[i] - y[i];
        break;
    }
}

std::vector<double> Operator::apply(const std::vector<double>& x) const {
    if (x.size() != g_.node_count())
        throw DataError("operator input has length " + std::to_string(x.size()) +
                        ", graph has " + std::to_string(g_.node_count()) + " nodes");
    std::vector<double> y(x.size());
    apply(x.data(), y.data());
    return y;
}

double Operator::spectral_upper_bound() const {
    double max_degree = 0.0;
    for (double d : g_.degrees()) max_degree = std::max(max_degree, d);
    switch (kind_) {
    case OperatorKind::Laplacian:
        // Row i of D - A: |d_i| + sum_j a_ij = 2 d_i.
        return 2.0 * max_degree;
    case OperatorKind::SymmetricNormalized:
    case OperatorKind::RandomWalk:
        // Unit diagonal, off-diagonal absolute row sum at most 1.
        return 2.0;
    case OperatorKind::Replicator:
        // Row i of lmax*I - A: lmax + d_i.
        return lambda_max_ + max_degree;
    }
    return 0.0; // unreachable
}

double Operator::lambda_max() const {
    if (kind_ != OperatorKind::Replicator)
        throw DataError("lambda_max is only defined for the replicator operator");
    return lambda_max_;
}

const std::vector<double>& Operator::theta() const {
    if (kind_ != OperatorKind::Replicator)
        throw DataError("theta is only defined for the replicator operator");
    return theta_;
}

std::vector<double> apply_operator(const Graph& g, OperatorKind kind,
                                   const std::vector<double>& x) {
    return Operator(g, kind).apply(x);
}

} // namespace epispec
