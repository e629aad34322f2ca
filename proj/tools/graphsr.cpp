// graphsr: command-line front end for the sparse graph-signal recovery library.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphsr/bench.hpp"
#include "graphsr/coherence.hpp"
#include "graphsr/edge_list.hpp"
#include "graphsr/generators.hpp"
#include "graphsr/recovery.hpp"

namespace {

using nlohmann::json;
using namespace gsr;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct GraphArgs {
    std::string kind = "sbm";
    std::string edge_list;
    std::size_t clusters = 2;
    std::size_t per_cluster = 70;
    std::optional<double> p_intra;
    std::size_t link_nodes = 2;
    std::size_t n = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    double p = 0.0;

    void attach(CLI::App& app) {
        app.add_option("--graph", kind, "generator: sbm, cycle, path, grid2d, erdos_renyi")
            ->check(CLI::IsMember({"sbm", "cycle", "path", "grid2d", "erdos_renyi"}));
        app.add_option("--edge-list", edge_list, "read the graph from an edge-list file")->check(CLI::ExistingFile);
        app.add_option("--clusters", clusters, "sbm clusters");
        app.add_option("--per-cluster", per_cluster, "sbm nodes per cluster");
        app.add_option("--p-intra", p_intra, "sbm intra-cluster edge probability (default 6/per-cluster)");
        app.add_option("--link-nodes", link_nodes, "sbm bridge edges between consecutive clusters");
        app.add_option("--n", n, "node count (cycle, path, erdos_renyi)");
        app.add_option("--rows", rows, "grid2d rows");
        app.add_option("--cols", cols, "grid2d cols");
        app.add_option("--p", p, "erdos_renyi edge probability");
    }

    Graph load(std::uint64_t seed) const {
        if (!edge_list.empty()) return read_edge_list_file(edge_list);
        if (kind == "sbm") {
            SbmParams sp;
            sp.clusters = clusters;
            sp.per_cluster = per_cluster;
            sp.p_intra = p_intra.value_or(6.0 / static_cast<double>(std::max<std::size_t>(per_cluster, 1)));
            sp.link_nodes = link_nodes;
            return generate_sbm(sp, seed);
        }
        NamedGraphParams np;
        np.n = n;
        np.rows = rows;
        np.cols = cols;
        np.p = p;
        return generate_named(named_graph_from_string(kind), np, seed);
    }
};

struct FilterArgs {
    int psi = 1;
    std::vector<double> coeffs;
    std::string gso = "laplacian";
    std::optional<double> max_eig;

    void attach(CLI::App& app) {
        app.add_option("--psi", psi, "filter degree")->check(CLI::PositiveNumber);
        app.add_option("--coeffs", coeffs, "filter coefficients h_0..h_psi (default all ones)")->delimiter(',');
        app.add_option("--gso", gso, "shift operator")
            ->check(CLI::IsMember({"laplacian", "laplacian-weighted", "adjacency"}));
        app.add_option("--max-eig", max_eig, "rescale the shift operator to this largest eigenvalue");
    }

    std::shared_ptr<const GraphFilter> build(const Graph& g, const GeodesicTable& dist) const {
        const GsoKind kind = gso_kind_from_string(gso);
        Gso s = kind == GsoKind::Adjacency ? adjacency_gso(g) : laplacian(g, kind == GsoKind::LaplacianWeighted);
        if (max_eig) s = normalize_gso_to_max_eig(s, *max_eig);
        const std::vector<double> c = coeffs.empty() ? geometric_coefficients(psi, 1.0) : coeffs;
        return std::make_shared<const GraphFilter>(build_filter(s, c, dist));
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Eigen::VectorXd read_measurements(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        double v = 0.0;
        std::string rest;
        if (!(ls >> v) || (ls >> rest)) {
            throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": expected one number");
        }
        values.push_back(v);
    }
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// ---------------------------------------------------------------------------

struct GenGraphArgs {
    GraphArgs graph;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_gen_graph(const GenGraphArgs& a) {
    const Graph g = a.graph.load(a.seed);
    write_output(save_edge_list(g), a.out);
    std::cerr << "graph: " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
    return 0;
}

struct SolveArgs {
    GraphArgs graph;
    FilterArgs filter;
    std::string method = "gm-gic";
    std::string measurements;
    std::size_t sparsity = 4;
    double sigma = 0.01;
    std::optional<double> zeta;
    double lambda = 0.01;
    double snr_db = 20.0;
    std::string scenario = "localized";
    std::string values = "std-normal";
    bool gfoc_correct = false;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    std::size_t max_subsets = 5'000'000;
};

int cmd_solve(const SolveArgs& a) {
    const Graph g = a.graph.load(a.seed);
    const GeodesicTable dist = geodesic_table(g);
    const auto filter = a.filter.build(g, dist);

    json out;
    Eigen::VectorXd y;
    if (!a.measurements.empty()) {
        y = read_measurements(a.measurements);
        if (static_cast<std::size_t>(y.size()) != g.node_count()) {
            throw std::runtime_error("measurement length " + std::to_string(y.size()) + " does not match the " +
                                     std::to_string(g.node_count()) + "-node graph");
        }
    } else {
        const SupportSet truth = draw_support(g, support_scenario_from_string(a.scenario), a.sparsity, a.seed);
        SimulationParams sim;
        sim.values = value_distribution_from_string(a.values);
        sim.snr_db = a.snr_db;
        sim.sigma_n = a.sigma;
        const Instance inst = simulate_instance(filter, truth, sim, a.seed + 1);
        y = inst.y;
        out["truth"] = truth.nodes();
        out["x_true"] = vector_json(inst.x);
    }

    GicConfig cfg;
    cfg.sparsity = a.sparsity;
    cfg.sigma_n = a.sigma;
    cfg.screening_zeta = a.zeta;
    GicEvaluator ev(filter->h, y, cfg);

    RecoveryResult r;
    if (a.method == "exhaustive") {
        const std::size_t size = enumeration_size(g.node_count(), a.sparsity);
        if (size > a.max_subsets) {
            std::cerr << "error: exhaustive search over " << size << " subsets exceeds --max-subsets "
                      << a.max_subsets << "; use gm-gic or g-bnb\n";
            return kExitFailure;
        }
        r = exhaustive_gic(ev);
    } else if (a.method == "gm-gic") {
        GmGicOptions o;
        o.psi = filter->psi;
        o.jobs = a.jobs;
        r = gm_gic(ev, dist, o);
    } else if (a.method == "g-bnb") {
        r = graph_bnb_gic(ev);
    } else if (a.method == "omp") {
        r = omp(ev);
    } else {
        LassoOptions o;
        o.lambda = a.lambda;
        r = lasso(ev, o);
    }
    if (a.gfoc_correct) {
        RecoveryResult corrected = gfoc(ev, g, r.support);
        corrected.method = r.method + "+gfoc";
        r = std::move(corrected);
    }

    out["method"] = r.method;
    out["support"] = r.support.nodes();
    out["x_hat"] = vector_json(r.x_hat);
    out["gic"] = r.gic_value;
    out["evaluations"] = r.evaluations;
    out["rank_skips"] = r.rank_skips;
    out["converged"] = r.converged;
    std::cout << out.dump(2) << "\n";
    return 0;
}

struct BenchArgs {
    std::string spec;
    std::string out;
    std::string format = "csv";
    std::size_t jobs = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
};

int cmd_bench(const BenchArgs& a) {
    ExperimentSpec spec = read_experiment_spec_file(a.spec);
    if (a.seed) spec.seed = *a.seed;
    if (a.trials) spec.trials = *a.trials;
    const auto t0 = std::chrono::steady_clock::now();
    RunOptions opts;
    opts.jobs = a.jobs;
    const BenchmarkReport report = run_experiment(spec, opts);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_output(emit_report(report, report_format_from_string(a.format)), a.out);
    for (const auto& r : report.rows) {
        std::cerr << r.method << " " << r.axis_name << "=" << r.axis_value << ": F=" << r.fscore_mean
                  << " MSE=" << r.mse_mean << " evals=" << r.evals_mean << " failures=" << r.failures << "/"
                  << r.trials << "\n";
    }
    std::cerr << "wall time " << seconds << " s\n";
    return 0;
}

struct CoherenceArgs {
    GraphArgs graph;
    std::optional<int> psi;
    FilterArgs filter;
    std::uint64_t seed = 1;
};

int cmd_coherence(const CoherenceArgs& a) {
    const Graph g = a.graph.load(a.seed);
    CoherenceReport rep;
    std::string matrix = "laplacian";
    if (a.psi) {
        FilterArgs f = a.filter;
        f.psi = *a.psi;
        rep = mutual_coherence(f.build(g, geodesic_table(g))->h);
        rep.d_min = g.min_degree();
        rep.d_max = g.max_degree();
        matrix = "filter";
    } else {
        rep = laplacian_coherence(g);
    }
    json out;
    out["matrix"] = matrix;
    out["mu"] = rep.mu;
    out["argmax_pair"] = {rep.argmax_pair.first, rep.argmax_pair.second};
    out["lower_bound"] = rep.lower_bound ? json(*rep.lower_bound) : json(nullptr);
    out["upper_bound"] = rep.upper_bound ? json(*rep.upper_bound) : json(nullptr);
    out["d_min"] = rep.d_min;
    out["d_max"] = rep.d_max;
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse graph-signal support recovery"};
    app.require_subcommand(1);

    GenGraphArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-graph", "generate a graph and print it as an edge list");
    gen.graph.attach(*gen_cmd);
    gen_cmd->add_option("--seed", gen.seed, "RNG seed");
    gen_cmd->add_option("--out", gen.out, "output path (default stdout)");

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "recover a support from measurements (or a simulated draw)");
    solve.graph.attach(*solve_cmd);
    solve.filter.attach(*solve_cmd);
    solve_cmd->add_option("--method", solve.method, "exhaustive, gm-gic, g-bnb, omp, lasso")
        ->check(CLI::IsMember({"exhaustive", "gm-gic", "g-bnb", "omp", "lasso"}));
    solve_cmd->add_option("--measurements", solve.measurements, "measurement file, one value per line")
        ->check(CLI::ExistingFile);
    solve_cmd->add_option("--sparsity", solve.sparsity, "sparsity budget s")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--sigma", solve.sigma, "noise standard deviation")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--zeta", solve.zeta, "screening threshold (default sigma)");
    solve_cmd->add_option("--lambda", solve.lambda, "lasso regularization")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--snr", solve.snr_db, "simulated SNR in dB");
    solve_cmd->add_option("--scenario", solve.scenario, "simulated support: localized, mixed")
        ->check(CLI::IsMember({"localized", "mixed"}));
    solve_cmd->add_option("--values", solve.values, "simulated values: std-normal, uniform-split")
        ->check(CLI::IsMember({"std-normal", "uniform-split"}));
    solve_cmd->add_flag("--gfoc", solve.gfoc_correct, "apply the one-hop correction to the estimate");
    solve_cmd->add_option("--seed", solve.seed, "RNG seed");
    solve_cmd->add_option("--jobs", solve.jobs, "worker threads (gm-gic)")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--max-subsets", solve.max_subsets, "refuse exhaustive searches larger than this");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "run a Monte-Carlo experiment spec");
    bench_cmd->add_option("spec", bench.spec, "experiment spec (JSON)")->required();
    bench_cmd->add_option("--out", bench.out, "report path (default stdout)");
    bench_cmd->add_option("--format", bench.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    bench_cmd->add_option("--jobs", bench.jobs, "worker threads")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench.seed, "override the spec seed");
    bench_cmd->add_option("--trials", bench.trials, "override the trial count");

    CoherenceArgs coh;
    auto* coh_cmd = app.add_subcommand("coherence", "mutual coherence of the Laplacian (or a filter with --psi)");
    coh.graph.attach(*coh_cmd);
    coh_cmd->add_option("--psi", coh.psi, "analyze the degree-psi filter instead of L")->check(CLI::PositiveNumber);
    coh_cmd->add_option("--coeffs", coh.filter.coeffs, "filter coefficients")->delimiter(',');
    coh_cmd->add_option("--max-eig", coh.filter.max_eig, "rescale L to this largest eigenvalue");
    coh_cmd->add_option("--seed", coh.seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n\n";
        const CLI::App* target = &app;
        for (const auto* sub : app.get_subcommands()) target = sub;
        std::cerr << target->help();
        return kExitUsage;
    }

    try {
        if (*gen_cmd) return cmd_gen_graph(gen);
        if (*solve_cmd) return cmd_solve(solve);
        if (*bench_cmd) return cmd_bench(bench);
        if (*coh_cmd) return cmd_coherence(coh);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
