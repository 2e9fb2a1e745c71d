#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "epispec/benchmark.hpp"
#include "epispec/errors.hpp"
#include "epispec/partition.hpp"
#include "epispec/spectral.hpp"
#include "internal.hpp"

namespace epispec {

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ec == std::errc() ? end : buf);
}

struct Stats {
    double mean = 0.0;
    double std_dev = 0.0; // population form, so one run yields exactly 0
};

Stats aggregate(const std::vector<double>& values) {
    Stats s;
    if (values.empty()) return s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(sq / static_cast<double>(values.size()));
    return s;
}

// One grid point: all runs and all methods for a fixed (mu1, mu2). Graphs
// are generated once per run and shared across methods, so every method is
// scored on the same instances.
void compute_cell_group(const BenchmarkSpec& base, double mu1, double mu2, uint32_t runs,
                        const std::vector<OperatorKind>& methods, uint64_t base_seed,
                        GridCell* cells) {
    const size_t m = methods.size();
    std::vector<std::vector<double>> nmis(m);
    std::vector<uint32_t> failed(m, 0);
    std::vector<double> ccs;
    for (uint32_t run = 0; run < runs; ++run) {
        BenchmarkSpec spec = base;
        spec.mu1 = mu1;
        spec.mu2 = mu2;
        spec.seed = derive_seed(base_seed, mu1, mu2, run);
        LabeledGraph lg;
        try {
            lg = generate(spec);
        } catch (const std::exception&) {
            for (size_t k = 0; k < m; ++k) ++failed[k];
            continue;
        }
        ccs.push_back(avg_clustering_coefficient(lg.graph));
        for (size_t k = 0; k < m; ++k) {
            try {
                const Partition p = sweep_bisect(lg.graph, methods[k]);
                std::vector<uint32_t> labels(lg.graph.node_count(), 0);
                for (uint32_t v : p.side.members()) labels[v] = 1;
                nmis[k].push_back(nmi(labels, lg.macro_labels));
            } catch (const std::exception&) {
                ++failed[k];
            }
        }
    }
    const Stats cc = aggregate(ccs);
    for (size_t k = 0; k < m; ++k) {
        const Stats s = aggregate(nmis[k]);
        GridCell& cell = cells[k];
        cell.mu1 = mu1;
        cell.mu2 = mu2;
        cell.method = methods[k];
        cell.nmi_mean = s.mean;
        cell.nmi_std = s.std_dev;
        cell.cc_mean = cc.mean;
        cell.cc_std = cc.std_dev;
        cell.runs = static_cast<uint32_t>(nmis[k].size());
        cell.failed_runs = failed[k];
    }
}

} // namespace

GridResult run_grid(const BenchmarkSpec& base, const std::vector<double>& mu1_values,
                    const std::vector<double>& mu2_values, uint32_t runs,
                    const std::vector<OperatorKind>& methods, uint64_t base_seed,
                    uint32_t jobs) {
    if (mu1_values.empty() || mu2_values.empty())
        throw DataError("run_grid: the (mu1, mu2) grid is empty");
    if (runs == 0) throw DataError("run_grid: runs must be at least 1");
    if (methods.empty()) throw DataError("run_grid: no methods selected");
    if (jobs == 0) throw DataError("run_grid: jobs must be at least 1");
    for (double mu1 : mu1_values)
        for (double mu2 : mu2_values) {
            BenchmarkSpec probe = base;
            probe.mu1 = mu1;
            probe.mu2 = mu2;
            detail::validate_benchmark_spec(probe);
        }

    GridResult result;
    result.base = base;
    result.mu1_values = mu1_values;
    result.mu2_values = mu2_values;
    result.methods = methods;
    result.runs_requested = runs;
    result.base_seed = base_seed;
    result.cells.resize(mu1_values.size() * mu2_values.size() * methods.size());

    // Work item = one (mu1, mu2) point writing methods.size() consecutive,
    // preallocated cells. Items are self-contained (per-run seeds derive from
    // the coordinates, never from thread order), so any jobs value produces
    // bit-identical results.
    const uint32_t items = static_cast<uint32_t>(mu1_values.size() * mu2_values.size());
    std::atomic<uint32_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_lock;
    auto worker = [&] {
        try {
            for (;;) {
                const uint32_t item = next.fetch_add(1);
                if (item >= items) return;
                const size_t i1 = item / mu2_values.size();
                const size_t i2 = item % mu2_values.size();
                compute_cell_group(base, mu1_values[i1], mu2_values[i2], runs, methods,
                                   base_seed,
                                   result.cells.data() + static_cast<size_t>(item) *
                                                             methods.size());
            }
        } catch (...) {
            const std::lock_guard<std::mutex> hold(error_lock);
            if (!first_error) first_error = std::current_exception();
        }
    };

    const uint32_t workers = std::min(jobs, items);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (uint32_t t = 0; t < workers; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return result;
}

void write_grid_csv(const GridResult& grid, std::ostream& out) {
    out << "mu1,mu2,method,nmi_mean,nmi_std,cc_mean,cc_std,runs\n";
    for (const GridCell& cell : grid.cells) {
        out << format_double(cell.mu1) << ',' << format_double(cell.mu2) << ','
            << to_string(cell.method) << ',' << format_double(cell.nmi_mean) << ','
            << format_double(cell.nmi_std) << ',' << format_double(cell.cc_mean) << ','
            << format_double(cell.cc_std) << ',' << cell.runs << '\n';
    }
}

void write_grid_json(const GridResult& grid, std::ostream& out) {
    nlohmann::json j;
    j["spec"] = {{"n", grid.base.n},
                 {"macro_count", grid.base.macro_count},
                 {"micro_per_macro", grid.base.micro_per_macro},
                 {"target_degree", grid.base.target_degree}};
    j["base_seed"] = grid.base_seed;
    j["runs_requested"] = grid.runs_requested;
    j["mu1_values"] = grid.mu1_values;
    j["mu2_values"] = grid.mu2_values;
    std::vector<std::string> method_names;
    for (OperatorKind kind : grid.methods) method_names.push_back(to_string(kind));
    j["methods"] = method_names;
    nlohmann::json cells = nlohmann::json::array();
    for (const GridCell& cell : grid.cells) {
        cells.push_back({{"mu1", cell.mu1},
                         {"mu2", cell.mu2},
                         {"method", to_string(cell.method)},
                         {"nmi_mean", cell.nmi_mean},
                         {"nmi_std", cell.nmi_std},
                         {"cc_mean", cell.cc_mean},
                         {"cc_std", cell.cc_std},
                         {"runs", cell.runs},
                         {"failed_runs", cell.failed_runs}});
    }
    j["cells"] = std::move(cells);
    out << j.dump(2) << '\n';
}

} // namespace epispec
