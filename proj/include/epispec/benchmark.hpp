#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "epispec/graph.hpp"
#include "epispec/spectral.hpp"

namespace epispec {

// Parameters of the hierarchical planted-partition generator: macro_count
// macro communities, each split into micro_per_macro equal micro
// communities. mu1 is the probability that an edge stub leaves its macro
// community; mu2 that it crosses micro communities inside the same macro
// one; the remainder stays intra-micro.
struct BenchmarkSpec {
    uint32_t n = 100;
    uint32_t macro_count = 2;
    uint32_t micro_per_macro = 2;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double target_degree = 10.0;
    uint64_t seed = 0;
};

struct LabeledGraph {
    Graph graph;
    std::vector<uint32_t> macro_labels;
    std::vector<uint32_t> micro_labels;
    uint32_t dropped_stubs = 0;    // stubs unmatched after bounded retries
    uint32_t repair_rewires = 0;   // edges redirected to restore connectivity
};

// Deterministic given spec.seed. Stub-matching model: each node gets
// ~target_degree stubs, each stub classified by (mu1, mu2), classes matched
// uniformly at random; disconnected results are repaired by rewiring one
// intra-micro edge per stray component into a bridge (same-macro targets
// preferred). DataError on infeasible specs; NumericalError if repair fails.
LabeledGraph generate(const BenchmarkSpec& spec);

// Normalized mutual information between two label vectors (Danon et al.
// 2005 form), in [0, 1]. Degenerate conventions: both sides single-cluster
// -> 1.0; exactly one single-cluster -> 0.0. DataError on length mismatch
// or empty input.
double nmi(const std::vector<uint32_t>& labels_a, const std::vector<uint32_t>& labels_b);

// Mean over nodes of 2*triangles(i) / (d_i*(d_i-1)), unweighted degrees;
// nodes of degree < 2 contribute 0.
double avg_clustering_coefficient(const Graph& g);

struct GridCell {
    double mu1 = 0.0;
    double mu2 = 0.0;
    OperatorKind method = OperatorKind::Laplacian;
    double nmi_mean = 0.0;
    double nmi_std = 0.0; // population std across runs (0 when runs == 1)
    double cc_mean = 0.0; // clustering coefficient across the cell's graphs
    double cc_std = 0.0;
    uint32_t runs = 0;    // completed runs
    uint32_t failed_runs = 0;
};

struct GridResult {
    BenchmarkSpec base;   // mu1/mu2/seed fields are per-cell, not used here
    std::vector<double> mu1_values;
    std::vector<double> mu2_values;
    std::vector<OperatorKind> methods;
    uint32_t runs_requested = 0;
    uint64_t base_seed = 0;
    std::vector<GridCell> cells; // ordered by (mu1, mu2, method)
};

// Runs the (mu1, mu2) grid: per run, generate a graph with a seed derived
// from (base_seed, mu1, mu2, run), bisect with each method, and score NMI
// against the MACRO labels. Cells are independent; jobs > 1 computes them in
// worker threads with results written to preallocated slots, so the output
// is identical for every jobs value. Failed runs are counted, never
// silently skipped.
GridResult run_grid(const BenchmarkSpec& base, const std::vector<double>& mu1_values,
                    const std::vector<double>& mu2_values, uint32_t runs,
                    const std::vector<OperatorKind>& methods, uint64_t base_seed,
                    uint32_t jobs = 1);

// Long-form CSV: header mu1,mu2,method,nmi_mean,nmi_std,cc_mean,cc_std,runs.
void write_grid_csv(const GridResult& grid, std::ostream& out);

// Same records plus the generator spec, for provenance.
void write_grid_json(const GridResult& grid, std::ostream& out);

// Label sidecar format: one "node macro micro" line per node.
void write_labels(const LabeledGraph& lg, std::ostream& out);

// Reads either sidecar lines ("node macro micro") or bare one-label-per-line
// files; for sidecars, selects the macro (default) or micro column.
std::vector<uint32_t> load_labels_file(const std::string& path, bool micro = false);

// The per-run generator seed used by run_grid (exposed for reproducing a
// single cell from the CLI or tests).
uint64_t derive_seed(uint64_t base_seed, double mu1, double mu2, uint32_t run);

} // namespace epispec
