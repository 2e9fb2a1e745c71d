// Command-line front end: partition / generate / sweep / nmi / toy / diffuse.
// Data goes to stdout (or --out), diagnostics to stderr as
// "error: <category>: ..." lines. Exit codes: 0 success, 1 usage error,
// 2 data error, 3 numerical failure.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epispec/benchmark.hpp"
#include "epispec/errors.hpp"
#include "epispec/graph.hpp"
#include "epispec/partition.hpp"
#include "epispec/rng.hpp"
#include "epispec/spectral.hpp"

namespace {

using namespace epispec;

std::string format_double(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ec == std::errc() ? end : buf);
}

// --seed wins; otherwise EPISPEC_SEED; otherwise 1.
uint64_t resolve_seed(const std::optional<uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("EPISPEC_SEED")) {
        const std::string text(env);
        uint64_t value = 0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || end != text.data() + text.size())
            throw DataError("EPISPEC_SEED is set but is not an unsigned integer: '" + text +
                            "'");
        return value;
    }
    return 1;
}

OperatorKind parse_method(const std::string& name) {
    const std::optional<OperatorKind> kind = operator_kind_from_string(name);
    if (!kind)
        throw DataError("unknown method '" + name +
                        "' (expected laplacian, symmetric, random-walk, or replicator)");
    return *kind;
}

std::vector<OperatorKind> parse_methods(const std::string& list) {
    std::vector<OperatorKind> methods;
    std::stringstream in(list);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        methods.push_back(parse_method(token));
    }
    if (methods.empty()) throw DataError("no methods given");
    return methods;
}

// "a:b:c" inclusive range (endpoint tolerance 1e-9) or a single value.
// Values are snapped to 12 decimal digits so accumulated step error does not
// leak into seeds or printed coordinates.
std::vector<double> parse_grid_range(const std::string& text) {
    auto parse_one = [&](const std::string& part) {
        try {
            size_t used = 0;
            const double v = std::stod(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
            return v;
        } catch (const std::exception&) {
            throw DataError("cannot parse grid value '" + part + "' in '" + text + "'");
        }
    };
    const size_t c1 = text.find(':');
    if (c1 == std::string::npos) return {parse_one(text)};
    const size_t c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw DataError("grid range '" + text + "' must be start:stop:step");
    const double start = parse_one(text.substr(0, c1));
    const double stop = parse_one(text.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_one(text.substr(c2 + 1));
    if (!(step > 0.0)) throw DataError("grid step must be positive in '" + text + "'");
    if (stop < start - 1e-9) throw DataError("grid stop is below start in '" + text + "'");
    std::vector<double> values;
    for (uint64_t k = 0;; ++k) {
        const double v = start + static_cast<double>(k) * step;
        if (v > stop + 1e-9) break;
        values.push_back(std::round(v * 1e12) / 1e12);
        if (k > 1000000) throw DataError("grid range '" + text + "' has too many points");
    }
    return values;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw DataError("cannot open output file: " + path);
    return file;
}

struct PartitionArgs {
    std::string graph_path;
    std::string method = "replicator";
    bool pretty = false;
    bool ordering = false;
    bool largest_component = false;
    bool one_indexed = false;
};

int cmd_partition(const PartitionArgs& args) {
    const OperatorKind method = parse_method(args.method);
    const Graph loaded = load_edge_list_file(args.graph_path, args.one_indexed);

    // Node ids in the output follow the input file's numbering: +1 under
    // --one-indexed, original ids when --largest-component extracts.
    const Graph* target = &loaded;
    ComponentExtract extract;
    bool extracted = false;
    if (!is_connected(loaded)) {
        if (!args.largest_component)
            throw DataError(
                "graph is disconnected; rerun with --largest-component to partition the "
                "largest component");
        extract = largest_component(loaded);
        target = &extract.graph;
        extracted = true;
        std::cerr << "note: partitioning the largest component (" +
                         std::to_string(extract.graph.node_count()) + " of " +
                         std::to_string(loaded.node_count()) + " nodes)\n";
    }

    Partition p = sweep_bisect(*target, method);

    const uint32_t offset = args.one_indexed ? 1 : 0;
    std::vector<uint32_t> members;
    for (uint32_t v : p.side.members())
        members.push_back((extracted ? extract.to_original[v] : v) + offset);

    if (args.pretty) {
        std::cout << "method: " << to_string(p.method) << "\n";
        std::cout << "quality: " << to_string(p.quality_kind) << " = "
                  << format_double(p.quality) << "\n";
        std::cout << "side (" << p.side.size() << " of " << target->node_count()
                  << " nodes):";
        for (uint32_t v : members) std::cout << ' ' << v;
        std::cout << "\n";
        std::cout << "sweep position: " << p.sweep_position << " of "
                  << (target->node_count() - 1) << "\n";
        std::cout << "degenerate second eigenvalue: "
                  << (p.degenerate_lambda2 ? "yes" : "no") << "\n";
        return 0;
    }

    if (extracted || offset != 0) {
        // Re-express the side in the input numbering before serializing.
        const uint32_t universe =
            extracted ? loaded.node_count() + offset : target->node_count() + offset;
        p.side = NodeSet::of(universe, members);
        if (args.ordering && extracted)
            std::cerr << "note: --ordering is omitted when the graph was reduced to its "
                         "largest component\n";
    }
    std::cout << partition_to_json(p, args.ordering && !extracted) << "\n";
    return 0;
}

struct GenerateArgs {
    BenchmarkSpec spec;
    std::optional<uint64_t> seed;
    std::string out_prefix;
};

int cmd_generate(GenerateArgs args) {
    args.spec.seed = resolve_seed(args.seed);
    const LabeledGraph lg = generate(args.spec);
    if (lg.dropped_stubs > 0)
        std::cerr << "warning: dropped " << lg.dropped_stubs
                  << " unmatched edge stubs during generation\n";
    if (lg.repair_rewires > 0)
        std::cerr << "note: rewired " << lg.repair_rewires
                  << " edges to restore connectivity\n";

    const std::string edges_path = args.out_prefix + ".edges";
    const std::string labels_path = args.out_prefix + ".labels";
    std::ofstream edges(edges_path);
    if (!edges) throw DataError("cannot open output file: " + edges_path);
    write_edge_list(lg.graph, edges);
    std::ofstream labels(labels_path);
    if (!labels) throw DataError("cannot open output file: " + labels_path);
    write_labels(lg, labels);
    return 0;
}

struct SweepArgs {
    BenchmarkSpec spec;
    std::string mu1 = "0:0.5:0.05";
    std::string mu2 = "0:0.5:0.05";
    std::string methods = "laplacian,symmetric,replicator";
    uint32_t runs = 10;
    uint32_t jobs = 1;
    std::optional<uint64_t> seed;
    std::string format = "csv";
    std::string out;
};

int cmd_sweep(const SweepArgs& args) {
    if (args.format != "csv" && args.format != "json")
        throw DataError("unknown --format '" + args.format + "' (expected csv or json)");
    const GridResult grid =
        run_grid(args.spec, parse_grid_range(args.mu1), parse_grid_range(args.mu2), args.runs,
                 parse_methods(args.methods), resolve_seed(args.seed), args.jobs);
    uint32_t failed = 0;
    for (const GridCell& cell : grid.cells) failed += cell.failed_runs;
    if (failed > 0)
        std::cerr << "warning: " << failed << " grid runs failed and were excluded\n";
    std::ofstream file;
    std::ostream& out = open_output(args.out, file);
    if (args.format == "csv")
        write_grid_csv(grid, out);
    else
        write_grid_json(grid, out);
    return 0;
}

struct NmiArgs {
    std::string path_a;
    std::string path_b;
    bool micro = false;
};

int cmd_nmi(const NmiArgs& args) {
    const double value =
        nmi(load_labels_file(args.path_a, args.micro), load_labels_file(args.path_b, args.micro));
    std::cout << format_double(value) << "\n";
    return 0;
}

int cmd_toy() {
    const ToyFixture toy = toy_graph();
    const Graph& g = toy.graph;

    const SpectralPair perron = eigenvector_centrality(g);
    // The reference table was produced with the centrality scaled to
    // 2-norm 10; the normalized measure is scale-invariant, the ratio
    // measure is not.
    std::vector<double> theta = perron.vector;
    for (double& t : theta) t *= 10.0;

    struct Row {
        const char* measure;
        const char* cut;
        double computed;
        double reference;
        double tolerance;
    };
    const Row rows[] = {
        {"R", "A", ratio_cut(g, toy.cut_a), 1.83, 0.005},
        {"R", "B", ratio_cut(g, toy.cut_b), 1.83, 0.005},
        {"N", "A", normalized_cut(g, toy.cut_a), 0.528, 0.001},
        {"N", "B", normalized_cut(g, toy.cut_b), 0.417, 0.001},
        {"R~", "A", reweighted_quality(g, theta, toy.cut_a, CutKind::RatioCut), 11.4, 0.05},
        {"R~", "B", reweighted_quality(g, theta, toy.cut_b, CutKind::RatioCut), 32.3, 1.5},
        {"N~", "A", reweighted_quality(g, theta, toy.cut_a, CutKind::NormalizedCut), 0.747,
         0.05},
        {"N~", "B", reweighted_quality(g, theta, toy.cut_b, CutKind::NormalizedCut), 0.778,
         0.05},
    };

    std::cout << "measure,cut,computed,reference,deviation,tolerance,status\n";
    uint32_t breaches = 0;
    for (const Row& row : rows) {
        const double deviation = std::fabs(row.computed - row.reference);
        const bool ok = deviation <= row.tolerance;
        if (!ok) ++breaches;
        std::cout << row.measure << ',' << row.cut << ',' << format_double(row.computed)
                  << ',' << format_double(row.reference) << ',' << format_double(deviation)
                  << ',' << format_double(row.tolerance) << ',' << (ok ? "ok" : "BREACH")
                  << "\n";
    }
    if (breaches > 0)
        throw NumericalError(std::to_string(breaches) +
                             " quality-table entries deviate beyond tolerance");
    return 0;
}

struct DiffuseArgs {
    std::string graph_path;
    std::string method = "laplacian";
    double dt = 0.0; // 0 = automatic (half the stability bound)
    uint64_t steps = 100;
    uint64_t stride = 1;
    std::string init = "ones";
    uint32_t node = 0;
    std::optional<uint64_t> seed;
    std::string out;
    bool one_indexed = false;
};

int cmd_diffuse(const DiffuseArgs& args) {
    const OperatorKind method = parse_method(args.method);
    const Graph g = load_edge_list_file(args.graph_path, args.one_indexed);
    const uint32_t n = g.node_count();

    std::vector<double> u0(n, 0.0);
    if (args.init == "ones") {
        u0.assign(n, 1.0);
    } else if (args.init == "delta") {
        if (args.node >= n)
            throw DataError("--node " + std::to_string(args.node) +
                            " is out of range for " + std::to_string(n) + " nodes");
        u0[args.node] = 1.0;
    } else if (args.init == "random") {
        Xoshiro256 rng(resolve_seed(args.seed));
        for (double& v : u0) v = 2.0 * rng.next_double() - 1.0;
    } else {
        throw DataError("unknown --init '" + args.init +
                        "' (expected ones, delta, or random)");
    }

    double dt = args.dt;
    if (dt == 0.0) {
        const Operator op(g, method);
        dt = 1.0 / op.spectral_upper_bound();
    }

    const std::vector<DiffusionState> trajectory =
        simulate_diffusion(g, method, u0, dt, args.steps, args.stride);

    std::ofstream file;
    std::ostream& out = open_output(args.out, file);
    out << "t";
    for (uint32_t i = 0; i < n; ++i) out << ",n" << (args.one_indexed ? i + 1 : i);
    out << "\n";
    for (const DiffusionState& state : trajectory) {
        out << format_double(state.t);
        for (double v : state.u) out << ',' << format_double(v);
        out << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral graph bisection by diffusion operators, with a synthetic "
                 "community benchmark"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    PartitionArgs pa;
    CLI::App* partition = app.add_subcommand(
        "partition", "Bisect a graph with the N-1 spectral sweep and print JSON");
    partition->add_option("--graph", pa.graph_path, "Edge-list file (i j [w] per line)")
        ->required();
    partition->add_option("--method", pa.method,
                          "laplacian | symmetric | random-walk | replicator");
    partition->add_flag("--pretty", pa.pretty, "Human-readable summary instead of JSON");
    partition->add_flag("--ordering", pa.ordering, "Include the sweep ordering vector");
    partition->add_flag("--largest-component", pa.largest_component,
                        "Partition the largest component of a disconnected graph");
    partition->add_flag("--one-indexed", pa.one_indexed,
                        "Treat the input (and report nodes) as 1-indexed");

    GenerateArgs ga;
    uint64_t ga_seed = 0;
    CLI::App* gen = app.add_subcommand(
        "generate", "Write a hierarchical benchmark graph (.edges) and labels (.labels)");
    gen->add_option("--n", ga.spec.n, "Node count");
    gen->add_option("--macro", ga.spec.macro_count, "Macro community count");
    gen->add_option("--micro", ga.spec.micro_per_macro, "Micro communities per macro");
    gen->add_option("--mu1", ga.spec.mu1, "Cross-macro mixing fraction in [0, 0.5]");
    gen->add_option("--mu2", ga.spec.mu2, "Cross-micro mixing fraction in [0, 0.5]");
    gen->add_option("--degree", ga.spec.target_degree, "Target mean degree");
    CLI::Option* gen_seed =
        gen->add_option("--seed", ga_seed, "Generator seed (default: $EPISPEC_SEED, else 1)");
    gen->add_option("--out", ga.out_prefix, "Output path prefix")->required();

    SweepArgs sa;
    uint64_t sa_seed = 0;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Run the (mu1, mu2) benchmark grid and emit per-cell NMI statistics");
    sweep->add_option("--n", sa.spec.n, "Node count per graph");
    sweep->add_option("--macro", sa.spec.macro_count, "Macro community count");
    sweep->add_option("--micro", sa.spec.micro_per_macro, "Micro communities per macro");
    sweep->add_option("--degree", sa.spec.target_degree, "Target mean degree");
    sweep->add_option("--mu1", sa.mu1, "mu1 values: start:stop:step or a single value");
    sweep->add_option("--mu2", sa.mu2, "mu2 values: start:stop:step or a single value");
    sweep->add_option("--runs", sa.runs, "Runs per grid cell");
    sweep->add_option("--methods", sa.methods, "Comma-separated method list");
    sweep->add_option("--jobs", sa.jobs, "Worker threads (output is jobs-invariant)");
    CLI::Option* sweep_seed =
        sweep->add_option("--seed", sa_seed, "Base seed (default: $EPISPEC_SEED, else 1)");
    sweep->add_option("--format", sa.format, "csv | json");
    sweep->add_option("--out", sa.out, "Output file ('-' or empty = stdout)");

    NmiArgs na;
    CLI::App* nmi_cmd = app.add_subcommand(
        "nmi", "Normalized mutual information between two label files");
    nmi_cmd->add_option("labels_a", na.path_a, "First label file")->required();
    nmi_cmd->add_option("labels_b", na.path_b, "Second label file")->required();
    nmi_cmd->add_flag("--micro", na.micro, "Score the micro column of sidecar files");

    CLI::App* toy = app.add_subcommand(
        "toy", "Quality table of the built-in 11-node fixture against reference values");

    DiffuseArgs da;
    uint64_t da_seed = 0;
    CLI::App* diffuse = app.add_subcommand(
        "diffuse", "Integrate du/dt = -M u with explicit Euler and emit a trajectory CSV");
    diffuse->add_option("--graph", da.graph_path, "Edge-list file")->required();
    diffuse->add_option("--method", da.method,
                        "laplacian | symmetric | random-walk | replicator");
    diffuse->add_option("--dt", da.dt, "Euler step (0 = half the stability bound)");
    diffuse->add_option("--steps", da.steps, "Step count");
    diffuse->add_option("--stride", da.stride, "Record every k-th step");
    diffuse->add_option("--init", da.init, "Initial condition: ones | delta | random");
    diffuse->add_option("--node", da.node, "Delta-initial node (with --init delta)");
    CLI::Option* diffuse_seed = diffuse->add_option(
        "--seed", da_seed, "Random-init seed (default: $EPISPEC_SEED, else 1)");
    diffuse->add_option("--out", da.out, "Output file ('-' or empty = stdout)");
    diffuse->add_flag("--one-indexed", da.one_indexed,
                      "Treat the input (and report nodes) as 1-indexed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "error: usage: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*partition) return cmd_partition(pa);
        if (*gen) {
            if (*gen_seed) ga.seed = ga_seed;
            return cmd_generate(ga);
        }
        if (*sweep) {
            if (*sweep_seed) sa.seed = sa_seed;
            return cmd_sweep(sa);
        }
        if (*nmi_cmd) return cmd_nmi(na);
        if (*toy) return cmd_toy();
        if (*diffuse) {
            if (*diffuse_seed) da.seed = da_seed;
            return cmd_diffuse(da);
        }
    } catch (const DataError& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: numerical: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 3;
    }
    return 1; // unreachable: require_subcommand guarantees a branch above
}
