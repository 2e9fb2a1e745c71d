#include "epispec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "epispec/errors.hpp"
#include "epispec/kernels.hpp"

namespace epispec {

Graph Graph::from_edges(std::vector<Edge> edges, uint32_t n_hint) {
    // Canonicalize to i < j before validation so duplicates in either
    // orientation collide.
    for (auto& e : edges) {
        if (e.i == e.j)
            throw DataError("self-loop on node " + std::to_string(e.i));
        if (e.i > e.j) std::swap(e.i, e.j);
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw DataError("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                            "): weight must be positive and finite");
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
    for (size_t k = 1; k < edges.size(); ++k) {
        if (edges[k - 1].i == edges[k].i && edges[k - 1].j == edges[k].j)
            throw DataError("duplicate edge (" + std::to_string(edges[k].i) + ", " +
                            std::to_string(edges[k].j) + ")");
    }

    Graph g;
    g.n_ = n_hint;
    for (const auto& e : edges) g.n_ = std::max(g.n_, e.j + 1);
    g.edges_ = std::move(edges);

    // CSR with both directions; counting sort keeps columns ordered because
    // the canonical edge list is already sorted.
    g.offsets_.assign(g.n_ + 1, 0);
    for (const auto& e : g.edges_) {
        ++g.offsets_[e.i + 1];
        ++g.offsets_[e.j + 1];
    }
    for (uint32_t v = 0; v < g.n_; ++v) g.offsets_[v + 1] += g.offsets_[v];
    g.columns_.resize(2 * g.edges_.size());
    g.weights_.resize(2 * g.edges_.size());
    std::vector<uint32_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& e : g.edges_) {
        g.columns_[cursor[e.i]] = e.j;
        g.weights_[cursor[e.i]++] = e.w;
        g.columns_[cursor[e.j]] = e.i;
        g.weights_[cursor[e.j]++] = e.w;
    }
    // Rows gain their lower neighbors out of order (source order is by the
    // canonical i), so sort each row's (column, weight) pairs.
    for (uint32_t v = 0; v < g.n_; ++v) {
        const uint32_t b = g.offsets_[v], e = g.offsets_[v + 1];
        std::vector<std::pair<uint32_t, double>> row;
        row.reserve(e - b);
        for (uint32_t k = b; k < e; ++k) row.emplace_back(g.columns_[k], g.weights_[k]);
        std::sort(row.begin(), row.end());
        for (uint32_t k = b; k < e; ++k) {
            g.columns_[k] = row[k - b].first;
            g.weights_[k] = row[k - b].second;
        }
    }

    g.degrees_.assign(g.n_, 0.0);
    for (const auto& e : g.edges_) {
        g.degrees_[e.i] += e.w;
        g.degrees_[e.j] += e.w;
        g.total_weight_ += e.w;
    }
    return g;
}

double Graph::degree(uint32_t i) const {
    if (i >= n_)
        throw DataError("node index " + std::to_string(i) + " out of range (n = " +
                        std::to_string(n_) + ")");
    return degrees_[i];
}

void Graph::adjacency_multiply(const double* x, double* y) const {
    kernels::ops().spmv(offsets_.data(), columns_.data(), weights_.data(), n_, x, y);
}

bool Graph::has_edge(uint32_t i, uint32_t j) const {
    if (i >= n_ || j >= n_ || i == j) return false;
    const auto begin = columns_.begin() + offsets_[i];
    const auto end = columns_.begin() + offsets_[i + 1];
    return std::binary_search(begin, end, j);
}

NodeSet NodeSet::of(uint32_t n, std::vector<uint32_t> members) {
    NodeSet s;
    s.n_ = n;
    s.mask_.assign(n, 0);
    std::sort(members.begin(), members.end());
    for (uint32_t v : members) {
        if (v >= n)
            throw DataError("node index " + std::to_string(v) + " out of range (n = " +
                            std::to_string(n) + ")");
        if (s.mask_[v])
            throw DataError("duplicate node " + std::to_string(v) + " in node set");
        s.mask_[v] = 1;
    }
    s.members_ = std::move(members);
    return s;
}

NodeSet NodeSet::complement() const {
    std::vector<uint32_t> rest;
    rest.reserve(n_ - members_.size());
    for (uint32_t v = 0; v < n_; ++v)
        if (!mask_[v]) rest.push_back(v);
    return NodeSet::of(n_, std::move(rest));
}

double volume(const Graph& g, const NodeSet& s) {
    if (s.universe_size() != g.node_count())
        throw DataError("node set universe does not match graph size");
    double vol = 0.0;
    for (uint32_t v : s.members()) vol += g.degrees()[v];
    return vol;
}

bool is_connected(const Graph& g) {
    const uint32_t n = g.node_count();
    if (n <= 1) return true; // empty graph connected by convention
    std::vector<uint8_t> seen(n, 0);
    std::vector<uint32_t> stack{0};
    seen[0] = 1;
    uint32_t reached = 1;
    const auto& offsets = g.row_offsets();
    const auto& columns = g.columns();
    while (!stack.empty()) {
        const uint32_t v = stack.back();
        stack.pop_back();
        for (uint32_t k = offsets[v]; k < offsets[v + 1]; ++k) {
            const uint32_t u = columns[k];
            if (!seen[u]) {
                seen[u] = 1;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    return reached == n;
}

ComponentExtract largest_component(const Graph& g) {
    const uint32_t n = g.node_count();
    std::vector<int64_t> comp(n, -1);
    uint32_t comp_count = 0;
    std::vector<uint32_t> comp_size;
    const auto& offsets = g.row_offsets();
    const auto& columns = g.columns();
    for (uint32_t start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        uint32_t size = 0;
        std::vector<uint32_t> stack{start};
        comp[start] = comp_count;
        while (!stack.empty()) {
            const uint32_t v = stack.back();
            stack.pop_back();
            ++size;
            for (uint32_t k = offsets[v]; k < offsets[v + 1]; ++k) {
                const uint32_t u = columns[k];
                if (comp[u] < 0) {
                    comp[u] = comp_count;
                    stack.push_back(u);
                }
            }
        }
        comp_size.push_back(size);
        ++comp_count;
    }

    ComponentExtract out;
    if (n == 0) {
        out.graph = Graph();
        return out;
    }
    // Components are discovered in order of their smallest node, so the
    // first maximum implements the smallest-original-index tie-break.
    uint32_t best = 0;
    for (uint32_t c = 1; c < comp_count; ++c)
        if (comp_size[c] > comp_size[best]) best = c;

    out.from_original.assign(n, -1);
    for (uint32_t v = 0; v < n; ++v) {
        if (comp[v] == best) {
            out.from_original[v] = static_cast<int64_t>(out.to_original.size());
            out.to_original.push_back(v);
        }
    }
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) {
        if (comp[e.i] == best && comp[e.j] == best)
            edges.push_back({static_cast<uint32_t>(out.from_original[e.i]),
                             static_cast<uint32_t>(out.from_original[e.j]), e.w});
    }
    out.graph = Graph::from_edges(std::move(edges),
                                  static_cast<uint32_t>(out.to_original.size()));
    return out;
}

Graph reweight_by_centrality(const Graph& g, const std::vector<double>& theta) {
    if (theta.size() != g.node_count())
        throw DataError("centrality vector length " + std::to_string(theta.size()) +
                        " does not match node count " + std::to_string(g.node_count()));
    for (uint32_t v = 0; v < theta.size(); ++v)
        if (!(theta[v] > 0.0))
            throw DataError("centrality must be strictly positive (node " + std::to_string(v) +
                            ")");
    std::vector<Edge> edges = g.edges();
    for (auto& e : edges) e.w *= theta[e.i] * theta[e.j];
    return Graph::from_edges(std::move(edges), g.node_count());
}

} // namespace epispec
