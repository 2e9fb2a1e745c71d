#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "epispec/graph.hpp"

namespace epispec {

enum class OperatorKind {
    Laplacian,           // L = D - A
    SymmetricNormalized, // Ls = I - D^{-1/2} A D^{-1/2}
    RandomWalk,          // Lrw = I - D^{-1} A (similar to Ls)
    Replicator,          // R = lmax*I - A, lmax the adjacency Perron value
};

const char* to_string(OperatorKind kind);
std::optional<OperatorKind> operator_kind_from_string(std::string_view name);

struct SolveOptions {
    double tol = 1e-10;            // eigenresidual target, ||Mv - lambda v||2
    uint64_t max_iter = 0;         // 0 means 100 * n
    uint32_t dense_threshold = 512; // direct dense solver at or below this n
};

// Eigenvalue/eigenvector result. The vector is unit 2-norm with a
// deterministic sign: the first component whose magnitude exceeds
// 1e-12 * max|v_i| is positive.
struct SpectralPair {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0;
};

// Matrix-free operator application. For the Replicator, the adjacency Perron
// pair is computed once at construction and cached, so repeated applies and
// downstream reweighting share one lambda_max.
class Operator {
public:
    Operator(const Graph& g, OperatorKind kind, const SolveOptions& opts = {});

    void apply(const double* x, double* y) const;
    std::vector<double> apply(const std::vector<double>& x) const;

    OperatorKind kind() const { return kind_; }
    const Graph& graph() const { return g_; }

    // Gershgorin (max row sum) upper bound on the operator's spectrum.
    double spectral_upper_bound() const;

    // Replicator only; DataError otherwise.
    double lambda_max() const;
    const std::vector<double>& theta() const;

private:
    const Graph& g_;
    OperatorKind kind_;
    std::vector<double> inv_sqrt_degree_; // SymmetricNormalized
    std::vector<double> inv_degree_;      // RandomWalk
    double lambda_max_ = 0.0;             // Replicator
    std::vector<double> theta_;           // Replicator
};

// Convenience wrapper: constructs the Operator (for Replicator this includes
// the Perron solve) and applies it once.
std::vector<double> apply_operator(const Graph& g, OperatorKind kind,
                                   const std::vector<double>& x);

// Perron pair of the adjacency matrix by shifted power iteration from the
// all-ones vector. The returned vector is strictly positive.
SpectralPair eigenvector_centrality(const Graph& g, double tol = 1e-10,
                                    uint64_t max_iter = 0);

struct EigenPairs {
    SpectralPair first;  // smallest eigenvalue of the operator
    SpectralPair second; // second smallest
    // True when the second eigenvalue is (numerically) non-simple: the gap
    // to the third eigenvalue is below 1e-12, so the returned second vector
    // is an arbitrary basis choice within the eigenspace.
    bool degenerate_second = false;
};

// Two smallest eigenpairs of the chosen operator. Replicator pairs are
// computed from the two largest adjacency eigenpairs via
// lambda_R = lambda_max - lambda_A; RandomWalk via the similarity
// transform v_rw = D^{-1/2} v_sym of the SymmetricNormalized pairs. Dense
// direct solve at n <= dense_threshold, thick-restart Lanczos above.
EigenPairs two_smallest_eigenpairs(const Graph& g, OperatorKind kind,
                                   const SolveOptions& opts = {});

// Componentwise second/first eigenvector ratio, with the first vector
// sign-fixed positive. DataError when any |first_i| < 1e-14.
std::vector<double> ratio_vector(const SpectralPair& first, const SpectralPair& second);

// Max elementwise deviation |R_ij - lmax * (Ls~)_ij| between the replicator
// on g and the symmetric normalized Laplacian of the centrality-reweighted
// graph: dense comparison at n <= dense_threshold, otherwise exact columns
// sampled through matrix-free probes.
double replicator_equivalence_check(const Graph& g, const SolveOptions& opts = {});

struct DiffusionState {
    double t = 0.0;
    std::vector<double> u;
};

// Explicit Euler integration of du/dt = -M u. Enforces the stability
// constraint dt < 2 / lambda_max(M) (largest operator eigenvalue, estimated
// by power iteration). The trajectory is sampled at the given stride and
// always includes the initial and final states.
std::vector<DiffusionState> simulate_diffusion(const Graph& g, OperatorKind kind,
                                               const std::vector<double>& u0, double dt,
                                               uint64_t steps, uint64_t stride = 1);

} // namespace epispec
