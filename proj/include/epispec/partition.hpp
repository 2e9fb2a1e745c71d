#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epispec/graph.hpp"
#include "epispec/spectral.hpp"

namespace epispec {

enum class CutKind { RatioCut, NormalizedCut };

struct CutQuality {
    CutKind kind = CutKind::NormalizedCut;
    bool reweighted = false; // evaluated on the centrality-reweighted graph

    friend bool operator==(const CutQuality&, const CutQuality&) = default;
};

// "ratio_cut", "normalized_cut", "reweighted_ratio_cut", ...
std::string to_string(CutQuality q);

// Total weight of edges crossing the bipartition (S, complement).
// DataError on a trivial set (empty or full).
double cut_weight(const Graph& g, const NodeSet& s);

// cut * (1/|S| + 1/|S~|)
double ratio_cut(const Graph& g, const NodeSet& s);

// cut * (1/vol(S) + 1/vol(S~)); 0 when the sides are disconnected from each
// other. DataError when either side has zero volume.
double normalized_cut(const Graph& g, const NodeSet& s);

// Ratio or normalized cut evaluated on reweight_by_centrality(g, theta).
double reweighted_quality(const Graph& g, const std::vector<double>& theta,
                          const NodeSet& s, CutKind kind);

struct Partition {
    NodeSet side;          // smaller side (prefix side when sizes tie)
    double quality = 0.0;
    OperatorKind method = OperatorKind::Laplacian;
    CutQuality quality_kind;
    uint32_t sweep_position = 0; // prefix length k of the chosen cut, 1..n-1
    bool degenerate_lambda2 = false;
    std::vector<double> ordering; // per-node ordering vector used for the sweep
};

// Spectral bisection by the N-1 sweep cut. Ordering vector per method:
// Laplacian -> Fiedler vector; SymmetricNormalized and Replicator ->
// componentwise second/first eigenvector ratio; RandomWalk -> its second
// eigenvector (the first is constant). Quality per method: Laplacian ->
// ratio cut; SymmetricNormalized and RandomWalk -> normalized cut;
// Replicator -> normalized cut on the reweighted graph. Nodes are sorted by
// ordering value (stable, ties by node index); all n-1 prefix cuts are
// evaluated incrementally in O(E + N log N); quality ties keep the smallest
// sweep position.
Partition sweep_bisect(const Graph& g, OperatorKind method, const SolveOptions& opts = {});

// Testing aid: recomputes every prefix-cut quality from scratch and compares
// with the incremental sweep values; true iff the max deviation is < 1e-9.
// theta is required when quality.reweighted is set.
bool verify_sweep_incremental(const Graph& g, const std::vector<double>& ordering,
                              CutQuality quality, const std::vector<double>* theta = nullptr);

// JSON object {method, quality_kind, quality, n, sweep_position, members,
// degenerate_lambda2[, ordering]} with members the smaller side.
std::string partition_to_json(const Partition& p, bool include_ordering = false);

} // namespace epispec
