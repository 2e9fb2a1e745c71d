#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "epispec/errors.hpp"
#include "epispec/graph.hpp"
#include "epispec/partition.hpp"
#include "epispec/spectral.hpp"

namespace epispec {

std::string to_string(CutQuality q) {
    std::string name = q.kind == CutKind::RatioCut ? "ratio_cut" : "normalized_cut";
    return q.reweighted ? "reweighted_" + name : name;
}

namespace {

void validate_set(const Graph& g, const NodeSet& s) {
    if (s.universe_size() != g.node_count())
        throw DataError("node set is over " + std::to_string(s.universe_size()) +
                        " nodes, graph has " + std::to_string(g.node_count()));
    if (s.size() == 0 || s.size() == g.node_count())
        throw DataError("cut quality of a trivial bipartition (side sizes " +
                        std::to_string(s.size()) + " and " +
                        std::to_string(g.node_count() - s.size()) + ")");
}

} // namespace

double cut_weight(const Graph& g, const NodeSet& s) {
    validate_set(g, s);
    double cut = 0.0;
    for (const Edge& e : g.edges())
        if (s.contains(e.i) != s.contains(e.j)) cut += e.w;
    return cut;
}

double ratio_cut(const Graph& g, const NodeSet& s) {
    const double cut = cut_weight(g, s);
    const double a = s.size(), b = g.node_count() - s.size();
    return cut * (1.0 / a + 1.0 / b);
}

double normalized_cut(const Graph& g, const NodeSet& s) {
    const double cut = cut_weight(g, s);
    const double vol_s = volume(g, s);
    const double vol_rest = volume(g, s.complement());
    if (vol_s <= 0.0 || vol_rest <= 0.0)
        throw DataError("normalized cut with a zero-volume side (volumes " +
                        std::to_string(vol_s) + " and " + std::to_string(vol_rest) + ")");
    return cut * (1.0 / vol_s + 1.0 / vol_rest);
}

double reweighted_quality(const Graph& g, const std::vector<double>& theta, const NodeSet& s,
                          CutKind kind) {
    const Graph reweighted = reweight_by_centrality(g, theta);
    return kind == CutKind::RatioCut ? ratio_cut(reweighted, s) : normalized_cut(reweighted, s);
}

namespace {

struct SweepScan {
    std::vector<double> qualities; // quality of prefix cut k, index k-1
    uint32_t best_position = 0;    // smallest argmin prefix length
    double best_quality = 0.0;
};

// All n-1 prefix-cut qualities along `order` against the quality graph, via
// the incremental crossing-weight update: moving node v across the cut
// changes the crossing weight by deg(v) - 2 * weight(v, already moved).
SweepScan scan_prefix_cuts(const Graph& quality_graph, const std::vector<uint32_t>& order,
                           CutKind kind) {
    const uint32_t n = quality_graph.node_count();
    const auto& offsets = quality_graph.row_offsets();
    const auto& columns = quality_graph.columns();
    const auto& weights = quality_graph.weights();
    const auto& degrees = quality_graph.degrees();
    const double total_volume =
        std::accumulate(degrees.begin(), degrees.end(), 0.0);

    SweepScan scan;
    scan.qualities.reserve(n - 1);
    scan.best_quality = std::numeric_limits<double>::infinity();
    std::vector<uint8_t> in_prefix(n, 0);
    double cut = 0.0, vol = 0.0;
    for (uint32_t k = 1; k < n; ++k) {
        const uint32_t v = order[k - 1];
        double to_prefix = 0.0;
        for (uint32_t e = offsets[v]; e < offsets[v + 1]; ++e)
            if (in_prefix[columns[e]]) to_prefix += weights[e];
        cut += degrees[v] - 2.0 * to_prefix;
        vol += degrees[v];
        in_prefix[v] = 1;

        const double q = kind == CutKind::RatioCut
                             ? cut * (1.0 / k + 1.0 / (n - k))
                             : cut * (1.0 / vol + 1.0 / (total_volume - vol));
        scan.qualities.push_back(q);
        if (q < scan.best_quality) {
            scan.best_quality = q;
            scan.best_position = k;
        }
    }
    return scan;
}

std::vector<uint32_t> order_by_value(const std::vector<double>& value) {
    std::vector<uint32_t> order(value.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        if (value[a] != value[b]) return value[a] < value[b];
        return a < b; // deterministic tie-break
    });
    return order;
}

} // namespace

Partition sweep_bisect(const Graph& g, OperatorKind method, const SolveOptions& opts) {
    const uint32_t n = g.node_count();
    if (n < 2) throw DataError("sweep_bisect needs at least 2 nodes");
    if (!is_connected(g))
        throw DataError(
            "sweep_bisect requires a connected graph (extract the largest component first)");

    const EigenPairs pairs = two_smallest_eigenpairs(g, method, opts);

    Partition result;
    result.method = method;
    result.degenerate_lambda2 = pairs.degenerate_second;
    switch (method) {
    case OperatorKind::Laplacian:
        // First eigenvector is constant: the ratio reduces to the Fiedler
        // vector itself.
        result.ordering = pairs.second.vector;
        result.quality_kind = {CutKind::RatioCut, false};
        break;
    case OperatorKind::RandomWalk:
        // Same situation: L_rw's first eigenvector is constant.
        result.ordering = pairs.second.vector;
        result.quality_kind = {CutKind::NormalizedCut, false};
        break;
    case OperatorKind::SymmetricNormalized:
        result.ordering = ratio_vector(pairs.first, pairs.second);
        result.quality_kind = {CutKind::NormalizedCut, false};
        break;
    case OperatorKind::Replicator:
        result.ordering = ratio_vector(pairs.first, pairs.second);
        result.quality_kind = {CutKind::NormalizedCut, true};
        break;
    }

    const std::vector<uint32_t> order = order_by_value(result.ordering);

    // The replicator's quality lives on the centrality-reweighted graph; its
    // theta is the first eigenpair just computed (shared, not re-solved).
    const Graph* quality_graph = &g;
    Graph reweighted;
    if (method == OperatorKind::Replicator) {
        reweighted = reweight_by_centrality(g, pairs.first.vector);
        quality_graph = &reweighted;
    }

    const SweepScan scan = scan_prefix_cuts(*quality_graph, order, result.quality_kind.kind);
    result.quality = scan.best_quality;
    result.sweep_position = scan.best_position;

    // Return the smaller side; the prefix side wins exact ties.
    const uint32_t k = scan.best_position;
    std::vector<uint32_t> members;
    if (k <= n - k)
        members.assign(order.begin(), order.begin() + k);
    else
        members.assign(order.begin() + k, order.end());
    std::sort(members.begin(), members.end());
    result.side = NodeSet::of(n, std::move(members));
    return result;
}

bool verify_sweep_incremental(const Graph& g, const std::vector<double>& ordering,
                              CutQuality quality, const std::vector<double>* theta) {
    const uint32_t n = g.node_count();
    if (ordering.size() != n)
        throw DataError("ordering vector has length " + std::to_string(ordering.size()) +
                        ", graph has " + std::to_string(n) + " nodes");
    if (n < 2) throw DataError("sweep verification needs at least 2 nodes");

    Graph reweighted;
    const Graph* quality_graph = &g;
    if (quality.reweighted) {
        if (theta == nullptr)
            throw DataError("reweighted sweep verification needs a centrality vector");
        reweighted = reweight_by_centrality(g, *theta);
        quality_graph = &reweighted;
    }

    const std::vector<uint32_t> order = order_by_value(ordering);
    const SweepScan scan = scan_prefix_cuts(*quality_graph, order, quality.kind);

    // From-scratch evaluation of every prefix cut through the public
    // quality functions.
    for (uint32_t k = 1; k < n; ++k) {
        std::vector<uint32_t> members(order.begin(), order.begin() + k);
        std::sort(members.begin(), members.end());
        const NodeSet s = NodeSet::of(n, std::move(members));
        const double direct = quality.kind == CutKind::RatioCut
                                  ? ratio_cut(*quality_graph, s)
                                  : normalized_cut(*quality_graph, s);
        if (std::fabs(direct - scan.qualities[k - 1]) >= 1e-9) return false;
    }
    return true;
}

std::string partition_to_json(const Partition& p, bool include_ordering) {
    nlohmann::json j;
    j["method"] = to_string(p.method);
    j["quality_kind"] = to_string(p.quality_kind);
    j["quality"] = p.quality;
    j["n"] = p.side.universe_size();
    j["sweep_position"] = p.sweep_position;
    j["members"] = p.side.members();
    j["degenerate_lambda2"] = p.degenerate_lambda2;
    if (include_ordering) j["ordering"] = p.ordering;
    return j.dump();
}

} // namespace epispec
