#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace epispec {

// One undirected edge in canonical orientation (i < j), weight > 0.
struct Edge {
    uint32_t i;
    uint32_t j;
    double w;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Immutable undirected weighted graph. Two synchronized representations:
// a canonical edge list (i < j, lexicographically sorted) for I/O and
// reweighting, and CSR adjacency (each edge stored in both rows, columns
// sorted) for matrix-free products and sweep updates. Self-loops and
// duplicate edges are construction errors; weights must be positive and
// finite. Unweighted input uses w = 1.
class Graph {
public:
    Graph() = default;

    // n_hint raises the node count above 1 + max index, allowing trailing
    // isolated nodes when a generator knows the intended size.
    static Graph from_edges(std::vector<Edge> edges, uint32_t n_hint = 0);

    uint32_t node_count() const { return n_; }
    uint64_t edge_count() const { return static_cast<uint64_t>(edges_.size()); }

    // Weighted degree; throws DataError when i is out of range.
    double degree(uint32_t i) const;
    const std::vector<double>& degrees() const { return degrees_; }
    double total_weight() const { return total_weight_; }

    const std::vector<Edge>& edges() const { return edges_; }

    // CSR views (both directions of every edge; offsets has n+1 entries).
    const std::vector<uint32_t>& row_offsets() const { return offsets_; }
    const std::vector<uint32_t>& columns() const { return columns_; }
    const std::vector<double>& weights() const { return weights_; }

    // y = A * x through the active kernel backend. x and y must have n
    // entries; y is overwritten.
    void adjacency_multiply(const double* x, double* y) const;

    bool has_edge(uint32_t i, uint32_t j) const;

private:
    uint32_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<uint32_t> offsets_{0};
    std::vector<uint32_t> columns_;
    std::vector<double> weights_;
    std::vector<double> degrees_;
    double total_weight_ = 0.0;
};

// Subset S of {0..n-1} with an ordered member list and O(1) membership.
class NodeSet {
public:
    NodeSet() = default;

    // Validates range and rejects duplicates; members are stored sorted.
    static NodeSet of(uint32_t n, std::vector<uint32_t> members);

    uint32_t universe_size() const { return n_; }
    uint32_t size() const { return static_cast<uint32_t>(members_.size()); }
    const std::vector<uint32_t>& members() const { return members_; }
    bool contains(uint32_t v) const { return v < n_ && mask_[v] != 0; }

    NodeSet complement() const;

private:
    uint32_t n_ = 0;
    std::vector<uint32_t> members_;
    std::vector<uint8_t> mask_;
};

// Sum of weighted degrees over S. The set's universe must match the graph.
double volume(const Graph& g, const NodeSet& s);

// BFS connectivity. Empty graphs count as connected (documented convention);
// isolated nodes make a graph disconnected.
bool is_connected(const Graph& g);

struct ComponentExtract {
    Graph graph;
    // new index -> original index
    std::vector<uint32_t> to_original;
    // original index -> new index, or -1 for nodes outside the component
    std::vector<int64_t> from_original;
};

// Induced subgraph on the largest connected component; ties broken toward
// the component containing the smallest original index.
ComponentExtract largest_component(const Graph& g);

// Edge weights scaled by the endpoint centralities: w_ij -> w_ij * t_i * t_j.
// theta must have length n with strictly positive entries.
Graph reweight_by_centrality(const Graph& g, const std::vector<double>& theta);

// Edge-list text format: lines "i j [w]", whitespace separated, '#' comments,
// LF or CRLF. Missing weight defaults to 1.0. Node count is 1 + max index.
// Errors carry 1-based line numbers.
Graph load_edge_list(std::istream& in, bool one_indexed = false);
Graph load_edge_list_file(const std::string& path, bool one_indexed = false);

// Writes "i j w" lines with weights at 17 significant digits, which
// round-trips doubles exactly.
void write_edge_list(const Graph& g, std::ostream& out);

struct ToyFixture {
    Graph graph;
    NodeSet cut_a; // sparse side {0..4}
    NodeSet cut_b; // sparse side plus hub {0..5}
};

// The 11-node fixture: a 6-clique on {5..10}, a path 0-1-2-3-4, and one
// attachment edge from each path node to hub node 5. Both named cuts cross
// exactly 5 edges.
ToyFixture toy_graph();

} // namespace epispec
