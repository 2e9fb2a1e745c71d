// Benchmark-harness tests: generator mixing statistics against edge-class
// counting, NMI against hand values and an independent transcription of the
// formula, clustering coefficient against closed forms, and grid determinism
// across thread counts.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "epispec/benchmark.hpp"
#include "epispec/errors.hpp"
#include "epispec/graph.hpp"
#include "epispec/rng.hpp"
#include "epispec/spectral.hpp"

using namespace epispec;

namespace {

struct MixingCounts {
    double cross_macro = 0.0;
    double cross_micro = 0.0; // same macro, different micro
    double total = 0.0;
};

MixingCounts count_mixing(const LabeledGraph& lg) {
    MixingCounts c;
    for (const Edge& e : lg.graph.edges()) {
        c.total += 1.0;
        if (lg.macro_labels[e.i] != lg.macro_labels[e.j])
            c.cross_macro += 1.0;
        else if (lg.micro_labels[e.i] != lg.micro_labels[e.j])
            c.cross_micro += 1.0;
    }
    return c;
}

// Literal second transcription of the score for cross-checking: maps instead
// of dense matrices, running sums in a different order.
double nmi_oracle(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    const double total = static_cast<double>(a.size());
    std::map<std::pair<uint32_t, uint32_t>, double> joint;
    std::map<uint32_t, double> ra, rb;
    for (size_t k = 0; k < a.size(); ++k) {
        joint[{a[k], b[k]}] += 1.0;
        ra[a[k]] += 1.0;
        rb[b[k]] += 1.0;
    }
    if (ra.size() == 1 && rb.size() == 1) return 1.0;
    if (ra.size() == 1 || rb.size() == 1) return 0.0;
    double numerator = 0.0;
    for (const auto& [ij, nij] : joint)
        numerator += nij * std::log(nij * total / (ra[ij.first] * rb[ij.second]));
    numerator *= -2.0;
    double denominator = 0.0;
    for (const auto& [label, ni] : ra) denominator += ni * std::log(ni / total);
    for (const auto& [label, nj] : rb) denominator += nj * std::log(nj / total);
    return numerator / denominator;
}

std::filesystem::path temp_file(const std::string& stem) {
    return std::filesystem::temp_directory_path() / (stem + ".labels");
}

Graph relabeled(const Graph& g, const std::vector<uint32_t>& perm) {
    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) {
        const uint32_t a = perm[e.i], b = perm[e.j];
        edges.push_back({std::min(a, b), std::max(a, b), e.w});
    }
    return Graph::from_edges(std::move(edges), g.node_count());
}

} // namespace

TEST_CASE("generator validates its spec") {
    BenchmarkSpec spec;
    spec.n = 0;
    CHECK_THROWS_AS(generate(spec), DataError);
    spec = BenchmarkSpec{};
    spec.n = 99; // not divisible by 2*2
    CHECK_THROWS_AS(generate(spec), DataError);
    spec = BenchmarkSpec{};
    spec.mu1 = 0.6;
    CHECK_THROWS_AS(generate(spec), DataError);
    spec = BenchmarkSpec{};
    spec.mu2 = -0.1;
    CHECK_THROWS_AS(generate(spec), DataError);
    spec = BenchmarkSpec{};
    spec.macro_count = 0;
    CHECK_THROWS_AS(generate(spec), DataError);
    spec = BenchmarkSpec{};
    spec.target_degree = 25.0; // micro community holds 25 nodes
    CHECK_THROWS_AS(generate(spec), DataError);
    spec = BenchmarkSpec{};
    spec.target_degree = 0.0;
    CHECK_THROWS_AS(generate(spec), DataError);
}

TEST_CASE("generator layout, determinism, and connectivity") {
    BenchmarkSpec spec;
    spec.mu1 = 0.3;
    spec.mu2 = 0.2;
    spec.seed = 42;
    const LabeledGraph a = generate(spec);
    CHECK(a.graph.node_count() == 100);
    CHECK(a.macro_labels.size() == 100);
    CHECK(a.micro_labels.size() == 100);
    // 2x2 layout in contiguous blocks of 25.
    for (uint32_t v = 0; v < 100; ++v) {
        CHECK(a.micro_labels[v] == v / 25);
        CHECK(a.macro_labels[v] == v / 50);
    }
    CHECK(is_connected(a.graph));

    const LabeledGraph b = generate(spec);
    CHECK(a.graph.edges() == b.graph.edges());
    CHECK(a.dropped_stubs == b.dropped_stubs);
    CHECK(a.repair_rewires == b.repair_rewires);

    spec.seed = 43;
    const LabeledGraph c = generate(spec);
    CHECK(a.graph.edges() != c.graph.edges());

    for (uint64_t seed = 100; seed < 130; ++seed) {
        spec.seed = seed;
        CHECK(is_connected(generate(spec).graph));
    }
}

TEST_CASE("zero mixing produces intra-community graphs up to repair bridges") {
    BenchmarkSpec spec;
    double worst_fraction = 0.0;
    for (uint64_t seed = 0; seed < 30; ++seed) {
        spec.seed = seed;
        const LabeledGraph lg = generate(spec);
        CHECK(is_connected(lg.graph));
        const MixingCounts mix = count_mixing(lg);
        worst_fraction = std::max(worst_fraction, mix.cross_macro / mix.total);
        // Repair must bridge the four blocks; at most a few rewires each.
        CHECK(lg.repair_rewires >= 3);
        CHECK(lg.repair_rewires <= 8);
    }
    CHECK(worst_fraction <= 0.02);
}

TEST_CASE("empirical mixing fractions track mu1 and mu2") {
    for (auto [m1, m2] : std::vector<std::pair<double, double>>{
             {0.5, 0.0}, {0.3, 0.2}, {0.1, 0.4}, {0.5, 0.5}}) {
        BenchmarkSpec spec;
        spec.mu1 = m1;
        spec.mu2 = m2;
        double fx = 0.0, fm = 0.0;
        const int seeds = 60;
        for (int s = 0; s < seeds; ++s) {
            spec.seed = 500 + static_cast<uint64_t>(s);
            const MixingCounts mix = count_mixing(generate(spec));
            fx += mix.cross_macro / mix.total;
            fm += mix.cross_micro / mix.total;
        }
        CHECK(std::fabs(fx / seeds - m1) <= 0.05);
        CHECK(std::fabs(fm / seeds - m2) <= 0.05);
    }
}

TEST_CASE("generator hits the target mean degree, fractional targets included") {
    for (double target : {10.0, 7.5}) {
        BenchmarkSpec spec;
        spec.mu1 = 0.2;
        spec.mu2 = 0.2;
        spec.target_degree = target;
        double mean = 0.0;
        const int seeds = 40;
        for (int s = 0; s < seeds; ++s) {
            spec.seed = 900 + static_cast<uint64_t>(s);
            const LabeledGraph lg = generate(spec);
            mean += 2.0 * static_cast<double>(lg.graph.edge_count()) / lg.graph.node_count();
        }
        mean /= seeds;
        // Dropped stubs pull the realized degree slightly under the target.
        CHECK(mean <= target + 0.1);
        CHECK(mean >= target - 0.8);
    }
}

TEST_CASE("nmi hand values") {
    CHECK(nmi({0, 1, 0, 2}, {0, 1, 0, 2}) == 1.0);
    CHECK(nmi({0, 1, 0, 2}, {5, 9, 5, 7}) == 1.0); // renaming only
    // Independent 4-element partitions: {a,b|c,d} vs {a,c|b,d}.
    CHECK(nmi({0, 0, 1, 1}, {0, 1, 0, 1}) == 0.0);
    // Frozen reference value, cross-checked by the in-test reimplementation.
    const std::vector<uint32_t> a{0, 0, 1, 1, 1}, b{0, 0, 0, 1, 1};
    CHECK(nmi(a, b) == doctest::Approx(0.4325380677663126).epsilon(1e-14));
    CHECK(nmi(a, b) == doctest::Approx(nmi_oracle(a, b)).epsilon(1e-14));
}

TEST_CASE("nmi degenerate single-cluster conventions") {
    CHECK(nmi({3, 3, 3}, {7, 7, 7}) == 1.0);
    CHECK(nmi({3, 3, 3}, {0, 1, 2}) == 0.0);
    CHECK(nmi({0, 1, 2}, {3, 3, 3}) == 0.0);
}

TEST_CASE("nmi input validation") {
    CHECK_THROWS_AS(nmi({0, 1}, {0, 1, 2}), DataError);
    CHECK_THROWS_AS(nmi({}, {}), DataError);
}

TEST_CASE("nmi properties over random label vectors") {
    Xoshiro256 rng(777);
    int nontrivial = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const size_t len = 2 + rng.next_below(40);
        const uint32_t ka = 1 + static_cast<uint32_t>(rng.next_below(5));
        const uint32_t kb = 1 + static_cast<uint32_t>(rng.next_below(5));
        std::vector<uint32_t> a(len), b(len);
        for (size_t i = 0; i < len; ++i) {
            a[i] = static_cast<uint32_t>(rng.next_below(ka));
            b[i] = static_cast<uint32_t>(rng.next_below(kb));
        }
        const double v = nmi(a, b);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        // Symmetric up to summation order (the confusion matrix transposes).
        CHECK(std::fabs(nmi(b, a) - v) < 1e-12);

        // Invariance under renaming: apply an affine-ish injective relabel.
        std::vector<uint32_t> renamed(len);
        for (size_t i = 0; i < len; ++i) renamed[i] = 1000 + 7 * a[i];
        CHECK(nmi(renamed, b) == v);

        // Independent literal transcription of the formula.
        const double reference = nmi_oracle(a, b);
        CHECK(std::fabs(v - std::clamp(reference, 0.0, 1.0)) < 1e-12);
        if (v > 0.0 && v < 1.0) ++nontrivial;
    }
    CHECK(nontrivial >= 20);
}

TEST_CASE("clustering coefficient closed forms") {
    const Graph triangle = Graph::from_edges({{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
    CHECK(avg_clustering_coefficient(triangle) == 1.0);

    const Graph p3 = Graph::from_edges({{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK(avg_clustering_coefficient(p3) == 0.0);

    std::vector<Edge> k4;
    for (uint32_t i = 0; i < 4; ++i)
        for (uint32_t j = i + 1; j < 4; ++j) k4.push_back({i, j, 1.0});
    CHECK(avg_clustering_coefficient(Graph::from_edges(k4)) == 1.0);

    // K4 minus edge {2,3}: locals 2/3, 2/3, 1, 1.
    const Graph k4m = Graph::from_edges(
        {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}});
    CHECK(avg_clustering_coefficient(k4m) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));

    // Star: the hub has no closed pairs, leaves have degree 1.
    const Graph star =
        Graph::from_edges({{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
    CHECK(avg_clustering_coefficient(star) == 0.0);

    // Degree-<2 nodes still count in the denominator.
    const Graph padded = Graph::from_edges({{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}}, 4);
    CHECK(avg_clustering_coefficient(padded) == doctest::Approx(0.75).epsilon(1e-15));

    CHECK(avg_clustering_coefficient(Graph{}) == 0.0);
}

TEST_CASE("clustering coefficient ignores weights and survives relabeling") {
    BenchmarkSpec spec;
    spec.mu1 = 0.1;
    spec.mu2 = 0.1;
    spec.seed = 31;
    const Graph g = generate(spec).graph;
    const double base = avg_clustering_coefficient(g);
    CHECK(base > 0.0);
    CHECK(base < 1.0);

    std::vector<Edge> reweighted = g.edges();
    Xoshiro256 rng(8);
    for (Edge& e : reweighted) e.w = 0.25 + rng.next_double();
    CHECK(avg_clustering_coefficient(Graph::from_edges(std::move(reweighted))) == base);

    std::vector<uint32_t> perm(g.node_count());
    std::iota(perm.begin(), perm.end(), 0u);
    rng.shuffle(perm);
    CHECK(avg_clustering_coefficient(relabeled(g, perm)) ==
          doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("derived seeds are deterministic and decorrelated") {
    CHECK(derive_seed(1, 0.1, 0.2, 3) == derive_seed(1, 0.1, 0.2, 3));
    CHECK(derive_seed(1, 0.1, 0.2, 3) != derive_seed(1, 0.1, 0.2, 4));
    CHECK(derive_seed(1, 0.1, 0.2, 3) != derive_seed(1, 0.2, 0.1, 3));
    CHECK(derive_seed(1, 0.1, 0.2, 3) != derive_seed(2, 0.1, 0.2, 3));
    CHECK(derive_seed(0, 0.0, 0.0, 0) != derive_seed(0, 0.0, 0.0, 1));
}

TEST_CASE("grid runs are deterministic and independent of the job count") {
    BenchmarkSpec base;
    base.n = 60; // micro communities of 15
    const std::vector<double> mu1s{0.0, 0.25};
    const std::vector<double> mu2s{0.0, 0.25};
    const std::vector<OperatorKind> methods{OperatorKind::Laplacian,
                                            OperatorKind::SymmetricNormalized,
                                            OperatorKind::Replicator};
    const GridResult a = run_grid(base, mu1s, mu2s, 3, methods, 12345, 1);
    const GridResult b = run_grid(base, mu1s, mu2s, 3, methods, 12345, 1);
    const GridResult c = run_grid(base, mu1s, mu2s, 3, methods, 12345, 4);

    REQUIRE(a.cells.size() == 2 * 2 * 3);
    for (size_t k = 0; k < a.cells.size(); ++k) {
        CAPTURE(k);
        CHECK(a.cells[k].nmi_mean == b.cells[k].nmi_mean);
        CHECK(a.cells[k].nmi_std == b.cells[k].nmi_std);
        CHECK(a.cells[k].nmi_mean == c.cells[k].nmi_mean);
        CHECK(a.cells[k].nmi_std == c.cells[k].nmi_std);
        CHECK(a.cells[k].cc_mean == c.cells[k].cc_mean);
        CHECK(a.cells[k].cc_std == c.cells[k].cc_std);
        CHECK(a.cells[k].runs == c.cells[k].runs);
        CHECK(a.cells[k].failed_runs == c.cells[k].failed_runs);
    }

    // Cell ordering is (mu1, mu2, method).
    CHECK(a.cells[0].mu1 == 0.0);
    CHECK(a.cells[0].mu2 == 0.0);
    CHECK(a.cells[0].method == OperatorKind::Laplacian);
    CHECK(a.cells[2].method == OperatorKind::Replicator);
    CHECK(a.cells[3].mu2 == 0.25);
    CHECK(a.cells[6].mu1 == 0.25);

    // All scores bounded; completed + failed = requested.
    for (const GridCell& cell : a.cells) {
        CHECK(cell.nmi_mean >= 0.0);
        CHECK(cell.nmi_mean <= 1.0);
        CHECK(cell.nmi_std >= 0.0);
        CHECK(cell.runs + cell.failed_runs == 3);
    }
}

TEST_CASE("laplacian baselines recover zero-mixing communities exactly") {
    BenchmarkSpec base;
    const GridResult g =
        run_grid(base, {0.0}, {0.0}, 6,
                 {OperatorKind::Laplacian, OperatorKind::SymmetricNormalized,
                  OperatorKind::RandomWalk},
                 2024, 2);
    for (const GridCell& cell : g.cells) {
        CAPTURE(to_string(cell.method));
        CHECK(cell.runs == 6);
        CHECK(cell.nmi_mean >= 0.99);
    }
}

TEST_CASE("single-run cells report zero deviation") {
    BenchmarkSpec base;
    base.n = 40;
    base.target_degree = 6.0;
    const GridResult g =
        run_grid(base, {0.1}, {0.1}, 1, {OperatorKind::Laplacian}, 7, 1);
    REQUIRE(g.cells.size() == 1);
    CHECK(g.cells[0].runs == 1);
    CHECK(g.cells[0].nmi_std == 0.0);
    CHECK(g.cells[0].cc_std == 0.0);
}

TEST_CASE("grid input validation") {
    BenchmarkSpec base;
    const std::vector<OperatorKind> methods{OperatorKind::Laplacian};
    CHECK_THROWS_AS(run_grid(base, {}, {0.1}, 1, methods, 1, 1), DataError);
    CHECK_THROWS_AS(run_grid(base, {0.1}, {0.1}, 0, methods, 1, 1), DataError);
    CHECK_THROWS_AS(run_grid(base, {0.1}, {0.1}, 1, {}, 1, 1), DataError);
    CHECK_THROWS_AS(run_grid(base, {0.1}, {0.1}, 1, methods, 1, 0), DataError);
    // Invalid mu anywhere in the grid is a hard error, not a failed cell.
    CHECK_THROWS_AS(run_grid(base, {0.1, 0.7}, {0.1}, 1, methods, 1, 1), DataError);
}

TEST_CASE("grid CSV shape and determinism") {
    BenchmarkSpec base;
    base.n = 40;
    base.target_degree = 6.0;
    const GridResult g = run_grid(base, {0.0, 0.5}, {0.25}, 2,
                                  {OperatorKind::Laplacian, OperatorKind::Replicator}, 99, 1);
    std::ostringstream first, second;
    write_grid_csv(g, first);
    write_grid_csv(g, second);
    CHECK(first.str() == second.str());

    std::istringstream lines(first.str());
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "mu1,mu2,method,nmi_mean,nmi_std,cc_mean,cc_std,runs");
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].substr(0, 17) == "0,0.25,laplacian,");
    CHECK(rows[1].substr(0, 18) == "0,0.25,replicator,");
    CHECK(rows[2].substr(0, 19) == "0.5,0.25,laplacian,");
    for (const std::string& row : rows)
        CHECK(std::count(row.begin(), row.end(), ',') == 7);
}

TEST_CASE("grid JSON round-trips through a parser") {
    BenchmarkSpec base;
    base.n = 40;
    base.target_degree = 6.0;
    const GridResult g =
        run_grid(base, {0.0}, {0.1, 0.2}, 2, {OperatorKind::SymmetricNormalized}, 3, 1);
    std::ostringstream out;
    write_grid_json(g, out);
    const nlohmann::json j = nlohmann::json::parse(out.str());
    CHECK(j["spec"]["n"] == 40);
    CHECK(j["spec"]["macro_count"] == 2);
    CHECK(j["base_seed"] == 3);
    CHECK(j["runs_requested"] == 2);
    CHECK(j["mu2_values"].size() == 2);
    CHECK(j["methods"][0] == "symmetric");
    REQUIRE(j["cells"].size() == 2);
    CHECK(j["cells"][0]["method"] == "symmetric");
    CHECK(j["cells"][0]["runs"] == 2);
    CHECK(j["cells"][0].contains("failed_runs"));
    CHECK(j["cells"][0]["nmi_mean"].is_number());
}

TEST_CASE("label files round-trip in both formats") {
    BenchmarkSpec spec;
    spec.n = 16;
    spec.macro_count = 2;
    spec.micro_per_macro = 2;
    spec.target_degree = 3.0;
    spec.seed = 5;
    const LabeledGraph lg = generate(spec);

    const auto sidecar = temp_file("epispec_sidecar_test");
    {
        std::ofstream out(sidecar);
        write_labels(lg, out);
    }
    CHECK(load_labels_file(sidecar.string()) == lg.macro_labels);
    CHECK(load_labels_file(sidecar.string(), true) == lg.micro_labels);

    const auto bare = temp_file("epispec_bare_test");
    {
        std::ofstream out(bare);
        out << "# one label per line\n";
        for (uint32_t label : {4u, 4u, 2u, 9u}) out << label << "\n";
    }
    CHECK(load_labels_file(bare.string()) == std::vector<uint32_t>{4, 4, 2, 9});

    std::filesystem::remove(sidecar);
    std::filesystem::remove(bare);
}

TEST_CASE("label file errors carry line diagnostics") {
    CHECK_THROWS_AS(load_labels_file("/nonexistent/epispec.labels"), DataError);

    const auto bad = temp_file("epispec_bad_labels");
    {
        std::ofstream out(bad);
        out << "0 0 0\n1 zero 0\n";
    }
    CHECK_THROWS_WITH_AS(load_labels_file(bad.string()),
                         doctest::Contains("line 2"), DataError);
    {
        std::ofstream out(bad);
        out << "0 0 0\n0 1 1\n"; // duplicate node
    }
    CHECK_THROWS_AS(load_labels_file(bad.string()), DataError);
    {
        std::ofstream out(bad);
        out << "0 0 0\n2 1 1\n"; // node 1 missing
    }
    CHECK_THROWS_AS(load_labels_file(bad.string()), DataError);
    {
        std::ofstream out(bad);
        out << "0 0\n"; // two fields is neither format
    }
    CHECK_THROWS_AS(load_labels_file(bad.string()), DataError);
    std::filesystem::remove(bad);
}
