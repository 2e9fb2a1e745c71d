#include <vector>

#include "epispec/graph.hpp"

namespace epispec {

ToyFixture toy_graph() {
    // 11 nodes: a sparse cluster {0..4} laid out as the path 0-1-2-3-4, each
    // of its nodes attached to hub node 5, and a 6-clique on {5..10}. Both
    // named cuts cross exactly 5 edges: cut A separates {0..4} (the five
    // attachment edges), cut B separates {0..5} (the hub's five clique
    // edges). Degrees: [2,3,3,3,2, 10, 5,5,5,5,5], so the volumes are 13/35
    // for cut A and 23/25 for cut B. The path layout also makes {2,3,4} a
    // ratio-cut minimizer (4 crossing edges, 4*(1/3 + 1/8) = 11/6), tied
    // with both named cuts.
    std::vector<Edge> edges;
    for (uint32_t v = 0; v + 1 < 5; ++v) edges.push_back({v, v + 1, 1.0});
    for (uint32_t v = 0; v < 5; ++v) edges.push_back({v, 5, 1.0});
    for (uint32_t i = 5; i < 11; ++i)
        for (uint32_t j = i + 1; j < 11; ++j) edges.push_back({i, j, 1.0});

    ToyFixture fixture;
    fixture.graph = Graph::from_edges(std::move(edges), 11);
    fixture.cut_a = NodeSet::of(11, {0, 1, 2, 3, 4});
    fixture.cut_b = NodeSet::of(11, {0, 1, 2, 3, 4, 5});
    return fixture;
}

} // namespace epispec
