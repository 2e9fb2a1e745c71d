#include "epispec/benchmark.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "epispec/errors.hpp"
#include "epispec/rng.hpp"
#include "internal.hpp"

namespace epispec {

namespace detail {

void validate_benchmark_spec(const BenchmarkSpec& spec) {
    if (spec.n == 0) throw DataError("benchmark spec: n must be positive");
    if (spec.macro_count == 0 || spec.micro_per_macro == 0)
        throw DataError("benchmark spec: macro_count and micro_per_macro must be positive");
    const uint64_t communities =
        static_cast<uint64_t>(spec.macro_count) * spec.micro_per_macro;
    if (spec.n % communities != 0)
        throw DataError("benchmark spec: n = " + std::to_string(spec.n) +
                        " is not divisible by macro_count * micro_per_macro = " +
                        std::to_string(communities));
    auto in_unit_half = [](double v) { return v >= 0.0 && v <= 0.5; };
    if (!in_unit_half(spec.mu1))
        throw DataError("benchmark spec: mu1 = " + std::to_string(spec.mu1) +
                        " is outside [0, 0.5]");
    if (!in_unit_half(spec.mu2))
        throw DataError("benchmark spec: mu2 = " + std::to_string(spec.mu2) +
                        " is outside [0, 0.5]");
    if (spec.mu1 + spec.mu2 > 1.0)
        throw DataError("benchmark spec: mu1 + mu2 must not exceed 1");
    if (!(spec.target_degree > 0.0) || !std::isfinite(spec.target_degree))
        throw DataError("benchmark spec: target_degree must be positive and finite");
    const uint32_t micro_size = spec.n / static_cast<uint32_t>(communities);
    if (spec.target_degree >= static_cast<double>(micro_size))
        throw DataError("benchmark spec: target_degree = " + std::to_string(spec.target_degree) +
                        " must be below the micro-community size " + std::to_string(micro_size) +
                        " (intra-community demand cannot be met by a simple graph)");
}

} // namespace detail

namespace {

uint64_t edge_key(uint32_t a, uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | b;
}

// Uniform matching within one stub pool: shuffle, pair adjacent entries, and
// push the stubs of rejected pairs (self-loop, duplicate edge, or a class
// constraint breach) into the next pass. Leftovers after the pass budget are
// dropped and counted.
template <typename Valid>
uint32_t match_stubs(std::vector<uint32_t>& pool, Xoshiro256& rng,
                     std::set<uint64_t>& seen, std::vector<Edge>& edges, Valid&& valid) {
    std::vector<uint32_t> leftover;
    for (int pass = 0; pass < 20 && pool.size() >= 2; ++pass) {
        rng.shuffle(pool);
        leftover.clear();
        size_t k = 0;
        for (; k + 1 < pool.size(); k += 2) {
            const uint32_t a = pool[k], b = pool[k + 1];
            if (a != b && valid(a, b) && seen.insert(edge_key(a, b)).second) {
                edges.push_back({std::min(a, b), std::max(a, b), 1.0});
            } else {
                leftover.push_back(a);
                leftover.push_back(b);
            }
        }
        if (k < pool.size()) leftover.push_back(pool[k]);
        pool.swap(leftover);
    }
    return static_cast<uint32_t>(pool.size());
}

struct Components {
    std::vector<uint32_t> label; // per node
    std::vector<uint32_t> sizes; // per component
};

Components find_components(uint32_t n, const std::vector<Edge>& edges) {
    std::vector<std::vector<uint32_t>> adj(n);
    for (const Edge& e : edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    Components c;
    c.label.assign(n, UINT32_MAX);
    std::vector<uint32_t> stack;
    for (uint32_t start = 0; start < n; ++start) {
        if (c.label[start] != UINT32_MAX) continue;
        const uint32_t id = static_cast<uint32_t>(c.sizes.size());
        c.sizes.push_back(0);
        stack.assign(1, start);
        c.label[start] = id;
        while (!stack.empty()) {
            const uint32_t v = stack.back();
            stack.pop_back();
            ++c.sizes[id];
            for (uint32_t w : adj[v])
                if (c.label[w] == UINT32_MAX) {
                    c.label[w] = id;
                    stack.push_back(w);
                }
        }
    }
    return c;
}

} // namespace

LabeledGraph generate(const BenchmarkSpec& spec) {
    detail::validate_benchmark_spec(spec);

    const uint32_t n = spec.n;
    const uint32_t micro_total = spec.macro_count * spec.micro_per_macro;
    const uint32_t micro_size = n / micro_total;

    LabeledGraph out;
    out.macro_labels.resize(n);
    out.micro_labels.resize(n);
    for (uint32_t v = 0; v < n; ++v) {
        out.micro_labels[v] = v / micro_size;
        out.macro_labels[v] = out.micro_labels[v] / spec.micro_per_macro;
    }

    Xoshiro256 rng(spec.seed);

    // Stub counts: integer part plus a Bernoulli draw on the fraction, so the
    // mean degree tracks target_degree for non-integer targets too.
    const double base = std::floor(spec.target_degree);
    const double frac = spec.target_degree - base;
    std::vector<uint32_t> stub_count(n);
    for (uint32_t v = 0; v < n; ++v) {
        uint32_t s = static_cast<uint32_t>(base);
        if (frac > 0.0 && rng.next_double() < frac) ++s;
        stub_count[v] = s;
    }

    // Classify every stub: cross-macro with probability mu1, cross-micro
    // (same macro) with probability mu2, intra-micro otherwise.
    std::vector<std::vector<uint32_t>> intra_pool(micro_total);
    std::vector<std::vector<uint32_t>> cross_micro_pool(spec.macro_count);
    std::vector<uint32_t> cross_macro_pool;
    for (uint32_t v = 0; v < n; ++v) {
        for (uint32_t s = 0; s < stub_count[v]; ++s) {
            const double r = rng.next_double();
            if (r < spec.mu1)
                cross_macro_pool.push_back(v);
            else if (r < spec.mu1 + spec.mu2)
                cross_micro_pool[out.macro_labels[v]].push_back(v);
            else
                intra_pool[out.micro_labels[v]].push_back(v);
        }
    }

    std::set<uint64_t> seen;
    std::vector<Edge> edges;
    for (auto& pool : intra_pool)
        out.dropped_stubs += match_stubs(pool, rng, seen, edges,
                                         [](uint32_t, uint32_t) { return true; });
    for (auto& pool : cross_micro_pool)
        out.dropped_stubs += match_stubs(pool, rng, seen, edges, [&](uint32_t a, uint32_t b) {
            return out.micro_labels[a] != out.micro_labels[b];
        });
    out.dropped_stubs += match_stubs(cross_macro_pool, rng, seen, edges,
                                     [&](uint32_t a, uint32_t b) {
                                         return out.macro_labels[a] != out.macro_labels[b];
                                     });

    // Connectivity repair: per stray component, detach one endpoint of one of
    // its edges (intra-micro preferred) and redirect it into the main
    // component, preferring a same-macro target so the mixing fractions drift
    // as little as possible. Isolated nodes get a fresh bridge edge instead.
    // One component per pass, recomputing connectivity in between: later
    // strays then see earlier ones as bridge targets, so at mu = 0 the repair
    // adds a single cross-macro edge instead of a hub on the first block.
    // Every pass moves at least one node into the main component, so n + 8
    // passes can only be exceeded by a livelock, which is a hard error.
    for (uint32_t attempt = 0;; ++attempt) {
        const Components comps = find_components(n, edges);
        if (comps.sizes.size() <= 1) break;
        if (attempt >= n + 8)
            throw NumericalError("benchmark generator: connectivity repair did not terminate");

        uint32_t main_id = 0;
        for (uint32_t c = 1; c < comps.sizes.size(); ++c)
            if (comps.sizes[c] > comps.sizes[main_id]) main_id = c;
        // The stray containing the smallest node index, for a deterministic
        // processing order.
        uint32_t stray_id = UINT32_MAX;
        for (uint32_t v = 0; v < n && stray_id == UINT32_MAX; ++v)
            if (comps.label[v] != main_id) stray_id = comps.label[v];

        std::vector<uint32_t> main_nodes;
        for (uint32_t v = 0; v < n; ++v)
            if (comps.label[v] == main_id) main_nodes.push_back(v);

        auto pick_target = [&](uint32_t keep) -> uint32_t {
            std::vector<uint32_t> preferred;
            for (uint32_t w : main_nodes)
                if (out.macro_labels[w] == out.macro_labels[keep]) preferred.push_back(w);
            const std::vector<uint32_t>& pool = preferred.empty() ? main_nodes : preferred;
            for (int tries = 0; tries < 20; ++tries) {
                const uint32_t w = pool[rng.next_below(pool.size())];
                if (w != keep && !seen.count(edge_key(keep, w))) return w;
            }
            for (uint32_t w : pool)
                if (w != keep && !seen.count(edge_key(keep, w))) return w;
            throw NumericalError(
                "benchmark generator: no feasible bridge target during repair");
        };

        std::vector<size_t> intra_edges, any_edges;
        for (size_t e = 0; e < edges.size(); ++e) {
            if (comps.label[edges[e].i] != stray_id || comps.label[edges[e].j] != stray_id)
                continue;
            any_edges.push_back(e);
            if (out.micro_labels[edges[e].i] == out.micro_labels[edges[e].j])
                intra_edges.push_back(e);
        }
        const std::vector<size_t>& candidates = intra_edges.empty() ? any_edges : intra_edges;
        if (!candidates.empty()) {
            Edge& e = edges[candidates[rng.next_below(candidates.size())]];
            const uint32_t keep = rng.next_below(2) == 0 ? e.i : e.j;
            const uint32_t w = pick_target(keep);
            seen.erase(edge_key(e.i, e.j));
            e = {std::min(keep, w), std::max(keep, w), 1.0};
            seen.insert(edge_key(e.i, e.j));
        } else {
            // A single isolated node: bridging must add an edge.
            uint32_t x = UINT32_MAX;
            for (uint32_t v = 0; v < n; ++v)
                if (comps.label[v] == stray_id) {
                    x = v;
                    break;
                }
            const uint32_t w = pick_target(x);
            seen.insert(edge_key(x, w));
            edges.push_back({std::min(x, w), std::max(x, w), 1.0});
        }
        ++out.repair_rewires;
    }

    out.graph = Graph::from_edges(std::move(edges), n);
    return out;
}

double nmi(const std::vector<uint32_t>& labels_a, const std::vector<uint32_t>& labels_b) {
    if (labels_a.size() != labels_b.size())
        throw DataError("nmi: label vectors differ in length (" +
                        std::to_string(labels_a.size()) + " vs " +
                        std::to_string(labels_b.size()) + ")");
    if (labels_a.empty()) throw DataError("nmi: label vectors are empty");

    auto densify = [](const std::vector<uint32_t>& labels, std::vector<uint32_t>& dense) {
        std::unordered_map<uint32_t, uint32_t> ids;
        dense.resize(labels.size());
        for (size_t k = 0; k < labels.size(); ++k) {
            const auto [it, fresh] =
                ids.insert({labels[k], static_cast<uint32_t>(ids.size())});
            (void)fresh;
            dense[k] = it->second;
        }
        return static_cast<uint32_t>(ids.size());
    };
    std::vector<uint32_t> da, db;
    const uint32_t ra = densify(labels_a, da);
    const uint32_t rb = densify(labels_b, db);

    // Degenerate single-cluster conventions: the denominator vanishes when
    // both sides are one cluster (identical partitions, score 1); with
    // exactly one single-cluster side there is no information shared.
    if (ra == 1 && rb == 1) return 1.0;
    if (ra == 1 || rb == 1) return 0.0;

    const double total = static_cast<double>(da.size());
    std::vector<uint64_t> conf(static_cast<size_t>(ra) * rb, 0);
    std::vector<uint64_t> row(ra, 0), col(rb, 0);
    for (size_t k = 0; k < da.size(); ++k) {
        ++conf[static_cast<size_t>(da[k]) * rb + db[k]];
        ++row[da[k]];
        ++col[db[k]];
    }

    // Identical up to label renaming (exactly one nonzero per row and per
    // column): exactly 1 by definition, skipping round-off in the ratio.
    if (ra == rb) {
        bool permutation = true;
        for (uint32_t i = 0; i < ra && permutation; ++i) {
            uint32_t nonzero = 0;
            for (uint32_t j = 0; j < rb; ++j)
                if (conf[static_cast<size_t>(i) * rb + j]) ++nonzero;
            permutation = nonzero == 1;
        }
        if (permutation) return 1.0;
    }

    double numerator = 0.0;
    for (uint32_t i = 0; i < ra; ++i)
        for (uint32_t j = 0; j < rb; ++j) {
            const uint64_t nij = conf[static_cast<size_t>(i) * rb + j];
            if (nij == 0) continue;
            numerator += static_cast<double>(nij) *
                         std::log(static_cast<double>(nij) * total /
                                  (static_cast<double>(row[i]) * static_cast<double>(col[j])));
        }
    numerator *= -2.0;

    double denominator = 0.0;
    for (uint32_t i = 0; i < ra; ++i)
        denominator +=
            static_cast<double>(row[i]) * std::log(static_cast<double>(row[i]) / total);
    for (uint32_t j = 0; j < rb; ++j)
        denominator +=
            static_cast<double>(col[j]) * std::log(static_cast<double>(col[j]) / total);

    return std::clamp(numerator / denominator, 0.0, 1.0);
}

double avg_clustering_coefficient(const Graph& g) {
    const uint32_t n = g.node_count();
    if (n == 0) return 0.0;
    const std::vector<uint32_t>& offsets = g.row_offsets();
    const std::vector<uint32_t>& columns = g.columns();
    auto connected = [&](uint32_t a, uint32_t b) {
        return std::binary_search(columns.begin() + offsets[a],
                                  columns.begin() + offsets[a + 1], b);
    };
    double sum = 0.0;
    for (uint32_t v = 0; v < n; ++v) {
        const uint32_t begin = offsets[v], end = offsets[v + 1];
        const uint32_t deg = end - begin;
        if (deg < 2) continue;
        uint64_t triangles = 0;
        for (uint32_t p = begin; p < end; ++p)
            for (uint32_t q = p + 1; q < end; ++q)
                if (connected(columns[p], columns[q])) ++triangles;
        sum += 2.0 * static_cast<double>(triangles) /
               (static_cast<double>(deg) * (deg - 1));
    }
    return sum / n;
}

void write_labels(const LabeledGraph& lg, std::ostream& out) {
    for (uint32_t v = 0; v < lg.graph.node_count(); ++v)
        out << v << ' ' << lg.macro_labels[v] << ' ' << lg.micro_labels[v] << '\n';
}

std::vector<uint32_t> load_labels_file(const std::string& path, bool micro) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open label file: " + path);

    std::vector<std::pair<uint32_t, uint32_t>> sidecar; // (node, selected label)
    std::vector<uint32_t> bare;
    int format = 0; // 0 undecided, 1 bare, 3 sidecar
    std::string line;
    uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const size_t hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream fields(line);
        std::vector<uint64_t> values;
        uint64_t v = 0;
        while (fields >> v) values.push_back(v);
        std::string trailing;
        if (!fields.eof() || (fields.clear(), fields >> trailing))
            throw DataError("label file " + path + ": line " + std::to_string(line_no) +
                            " is not numeric");
        if (values.empty()) continue;
        if (format == 0) format = values.size() == 1 ? 1 : 3;
        if (static_cast<size_t>(format) != values.size())
            throw DataError("label file " + path + ": line " + std::to_string(line_no) +
                            " has " + std::to_string(values.size()) +
                            " fields, expected " + std::to_string(format));
        for (uint64_t value : values)
            if (value > UINT32_MAX)
                throw DataError("label file " + path + ": line " + std::to_string(line_no) +
                                " value out of range");
        if (format == 1) {
            bare.push_back(static_cast<uint32_t>(values[0]));
        } else {
            sidecar.push_back({static_cast<uint32_t>(values[0]),
                               static_cast<uint32_t>(values[micro ? 2 : 1])});
        }
    }
    if (format == 1) return bare;
    if (sidecar.empty()) throw DataError("label file " + path + ": no label lines");

    uint32_t max_node = 0;
    for (const auto& [node, label] : sidecar) max_node = std::max(max_node, node);
    std::vector<uint32_t> labels(static_cast<size_t>(max_node) + 1, UINT32_MAX);
    std::vector<uint8_t> seen(labels.size(), 0);
    for (const auto& [node, label] : sidecar) {
        if (seen[node])
            throw DataError("label file " + path + ": node " + std::to_string(node) +
                            " labeled twice");
        seen[node] = 1;
        labels[node] = label;
    }
    for (uint32_t v = 0; v < labels.size(); ++v)
        if (!seen[v])
            throw DataError("label file " + path + ": node " + std::to_string(v) +
                            " has no label line");
    return labels;
}

uint64_t derive_seed(uint64_t base_seed, double mu1, double mu2, uint32_t run) {
    uint64_t state = base_seed;
    uint64_t mixed = splitmix64(state);
    state = mixed ^ std::bit_cast<uint64_t>(mu1);
    mixed = splitmix64(state);
    state = mixed ^ std::bit_cast<uint64_t>(mu2);
    mixed = splitmix64(state);
    state = mixed ^ run;
    return splitmix64(state);
}

} // namespace epispec
