#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "graphsr/bench.hpp"
#include "graphsr/edge_list.hpp"

namespace gsr {

using nlohmann::json;

namespace {

const std::vector<std::string> kMethods = {"exhaustive", "gm-gic", "g-bnb", "omp", "lasso"};

template <typename T>
T read_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("experiment spec: bad value for '") + key + "': " + e.what());
    }
}

json section(const json& doc, const char* key) {
    if (!doc.contains(key)) return json::object();
    if (!doc.at(key).is_object()) throw std::invalid_argument(std::string("experiment spec: '") + key + "' must be an object");
    return doc.at(key);
}

std::vector<double> number_list(const json& value, const char* key) {
    if (value.is_number()) return {value.get<double>()};
    if (!value.is_array()) throw std::invalid_argument(std::string("experiment spec: '") + key + "' must be a number or array");
    std::vector<double> out;
    for (const auto& v : value) {
        if (!v.is_number()) throw std::invalid_argument(std::string("experiment spec: '") + key + "' holds a non-number");
        out.push_back(v.get<double>());
    }
    return out;
}

SweepAxis sweep_axis_from_string(const std::string& name) {
    if (name == "snr_db") return SweepAxis::SnrDb;
    if (name == "psi") return SweepAxis::Psi;
    if (name == "clusters") return SweepAxis::Clusters;
    throw std::invalid_argument("experiment spec: unknown sweep axis '" + name + "'");
}

// Independent 64-bit stream seed per (seed, point, trial, purpose).
std::uint64_t derive_seed(std::uint64_t seed, std::size_t point, std::size_t trial, std::uint32_t purpose) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(point), static_cast<std::uint32_t>(trial),
                      static_cast<std::uint32_t>(trial >> 32), purpose};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

constexpr std::uint32_t kGraphStream = 1;
constexpr std::uint32_t kSupportStream = 2;
constexpr std::uint32_t kNoiseStream = 3;
constexpr std::size_t kFixedGraph = static_cast<std::size_t>(-1);

struct PointSetup {
    double axis_value = 0.0;
    int psi = 1;
    std::size_t clusters = 2;
    double snr_db = 20.0;
};

struct GraphBundle {
    std::shared_ptr<const Graph> graph;
    std::shared_ptr<const GeodesicTable> dist;
    std::shared_ptr<const GraphFilter> filter;
    std::vector<NodeId> seed_pool;
};

GraphBundle make_bundle(const ExperimentSpec& spec, const PointSetup& pt, std::uint64_t seed) {
    const auto& gs = spec.graph;
    GraphBundle b;
    if (gs.kind == "sbm") {
        SbmParams params = gs.sbm;
        params.clusters = pt.clusters;
        b.graph = std::make_shared<const Graph>(generate_sbm(params, seed));
        if (spec.signal.seed_pool == "first-cluster") {
            for (std::size_t i = 0; i < params.per_cluster; ++i) b.seed_pool.push_back(static_cast<NodeId>(i));
        }
    } else if (gs.kind == "edge_list") {
        b.graph = std::make_shared<const Graph>(read_edge_list_file(gs.path));
    } else {
        b.graph = std::make_shared<const Graph>(generate_named(named_graph_from_string(gs.kind), gs.named, seed));
    }
    b.dist = std::make_shared<const GeodesicTable>(geodesic_table(*b.graph));

    Gso gso = spec.filter.gso == GsoKind::Adjacency
                  ? adjacency_gso(*b.graph)
                  : laplacian(*b.graph, spec.filter.gso == GsoKind::LaplacianWeighted);
    if (spec.filter.max_eig) gso = normalize_gso_to_max_eig(gso, *spec.filter.max_eig);
    const std::vector<double> coeffs = spec.filter.coeffs.empty()
                                           ? geometric_coefficients(pt.psi, spec.filter.coeff_rate)
                                           : spec.filter.coeffs;
    b.filter = std::make_shared<const GraphFilter>(build_filter(gso, coeffs, *b.dist));
    return b;
}

struct MethodOutcome {
    bool failed = true;
    double fscore = 0.0;
    double mse = 0.0;
    double evals = 0.0;
};

struct Accumulator {
    std::size_t count = 0;
    std::size_t failures = 0;
    double f_sum = 0.0, f_sq = 0.0;
    double m_sum = 0.0, m_sq = 0.0;
    double e_sum = 0.0;

    void add(const MethodOutcome& o) {
        if (o.failed) {
            ++failures;
            return;
        }
        ++count;
        f_sum += o.fscore;
        f_sq += o.fscore * o.fscore;
        m_sum += o.mse;
        m_sq += o.mse * o.mse;
        e_sum += o.evals;
    }
};

double mean_of(double sum, std::size_t n) { return n == 0 ? 0.0 : sum / static_cast<double>(n); }

double standard_error(double sum, double sq, std::size_t n) {
    if (n < 2) return 0.0;
    const double k = static_cast<double>(n);
    const double var = std::max(0.0, (sq - sum * sum / k) / (k - 1.0));
    return std::sqrt(var / k);
}

class TrialRunner {
public:
    TrialRunner(const ExperimentSpec& spec, const RunOptions& opts) : spec_(spec), opts_(opts) {}

    std::vector<MethodOutcome> run(std::size_t point, std::size_t trial, const PointSetup& pt,
                                   const GraphBundle* fixed) const {
        const std::size_t reported = reported_methods(spec_).size();
        std::vector<MethodOutcome> out(reported);
        GraphBundle local;
        const GraphBundle* bundle = fixed;
        Instance inst;
        try {
            if (bundle == nullptr) {
                local = make_bundle(spec_, pt, derive_seed(spec_.seed, point, trial, kGraphStream));
                bundle = &local;
            }
            const SupportSet truth =
                draw_support(*bundle->graph, spec_.signal.scenario, spec_.signal.sparsity,
                             derive_seed(spec_.seed, point, trial, kSupportStream), bundle->seed_pool);
            SimulationParams sim;
            sim.values = spec_.signal.values;
            sim.snr_db = pt.snr_db;
            sim.sigma_n = spec_.noise.sigma_n;
            inst = simulate_instance(bundle->filter, truth, sim, derive_seed(spec_.seed, point, trial, kNoiseStream));
        } catch (const std::exception& e) {
            for (const auto& name : reported_methods(spec_)) notify(point, trial, name, nullptr, nullptr, nullptr, e.what());
            return out;
        }

        GicConfig cfg;
        cfg.sparsity = spec_.signal.sparsity;
        cfg.sigma_n = spec_.noise.sigma_n;
        cfg.screening_zeta = spec_.noise.zeta;

        std::size_t slot = 0;
        for (const auto& m : spec_.methods) {
            GicEvaluator ev(bundle->filter->h, inst.y, cfg);
            std::optional<RecoveryResult> base;
            try {
                base = solve(m, ev, *bundle, pt);
                out[slot] = score(inst, *base);
                notify(point, trial, m.name, &inst, &cfg, &*base, {});
            } catch (const std::exception& e) {
                notify(point, trial, m.name, &inst, &cfg, nullptr, e.what());
            }
            ++slot;
            if (!m.gfoc) continue;
            const std::string name = m.name + "+gfoc";
            if (!base) {
                notify(point, trial, name, &inst, &cfg, nullptr, "base method failed");
                ++slot;
                continue;
            }
            try {
                RecoveryResult corrected = gfoc(ev, *bundle->graph, base->support);
                corrected.method = name;
                out[slot] = score(inst, corrected);
                notify(point, trial, name, &inst, &cfg, &corrected, {});
            } catch (const std::exception& e) {
                notify(point, trial, name, &inst, &cfg, nullptr, e.what());
            }
            ++slot;
        }
        return out;
    }

private:
    RecoveryResult solve(const MethodSpec& m, GicEvaluator& ev, const GraphBundle& b, const PointSetup& pt) const {
        if (m.name == "exhaustive") {
            const std::size_t size = enumeration_size(ev.node_count(), ev.config().sparsity);
            if (size > spec_.exhaustive_limit) {
                throw std::runtime_error("exhaustive enumeration of " + std::to_string(size) +
                                         " subsets exceeds the limit");
            }
            return exhaustive_gic(ev);
        }
        if (m.name == "gm-gic") {
            GmGicOptions o;
            o.psi = pt.psi;
            return gm_gic(ev, *b.dist, o);
        }
        if (m.name == "g-bnb") return graph_bnb_gic(ev);
        if (m.name == "omp") return omp(ev);
        if (m.name == "lasso") {
            LassoOptions o;
            o.lambda = m.lambda;
            return lasso(ev, o);
        }
        throw std::invalid_argument("unknown method '" + m.name + "'");
    }

    static MethodOutcome score(const Instance& inst, const RecoveryResult& r) {
        MethodOutcome o;
        o.failed = false;
        o.fscore = f_score(inst.support, r.support);
        o.mse = mse(inst.x, r.dense_signal(static_cast<std::size_t>(inst.x.size())));
        o.evals = static_cast<double>(r.evaluations);
        return o;
    }

    void notify(std::size_t point, std::size_t trial, const std::string& method, const Instance* inst,
                const GicConfig* cfg, const RecoveryResult* result, std::string error) const {
        if (!opts_.observer) return;
        TrialRecord rec;
        rec.point = point;
        rec.trial = trial;
        rec.method = method;
        rec.instance = inst;
        rec.config = cfg;
        rec.result = result;
        rec.error = std::move(error);
        opts_.observer(rec);
    }

    const ExperimentSpec& spec_;
    const RunOptions& opts_;
};

}  // namespace

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::SnrDb: return "snr_db";
        case SweepAxis::Psi: return "psi";
        case SweepAxis::Clusters: return "clusters";
    }
    return "snr_db";
}

void ExperimentSpec::validate() const {
    if (trials < 1) throw std::invalid_argument("experiment spec: trials must be >= 1");
    if (axis_values.empty()) throw std::invalid_argument("experiment spec: sweep grid is empty");
    if (methods.empty()) throw std::invalid_argument("experiment spec: no methods configured");
    if (signal.sparsity < 1) throw std::invalid_argument("experiment spec: sparsity must be >= 1");
    if (!(noise.sigma_n > 0.0)) throw std::invalid_argument("experiment spec: sigma_n must be positive");
    if (signal.seed_pool != "all" && signal.seed_pool != "first-cluster") {
        throw std::invalid_argument("experiment spec: seed_pool must be 'all' or 'first-cluster'");
    }
    if (signal.seed_pool == "first-cluster" && graph.kind != "sbm") {
        throw std::invalid_argument("experiment spec: seed_pool 'first-cluster' needs an sbm graph");
    }
    if (graph.kind == "edge_list" && graph.path.empty()) {
        throw std::invalid_argument("experiment spec: edge_list graph needs a path");
    }
    if (graph.kind != "sbm" && graph.kind != "edge_list") named_graph_from_string(graph.kind);
    if (axis == SweepAxis::Clusters && graph.kind != "sbm") {
        throw std::invalid_argument("experiment spec: clusters sweep needs an sbm graph");
    }
    if (!filter.coeffs.empty() && axis == SweepAxis::Psi) {
        throw std::invalid_argument("experiment spec: explicit coeffs cannot be combined with a psi sweep");
    }
    for (double v : axis_values) {
        if (!std::isfinite(v)) throw std::invalid_argument("experiment spec: non-finite grid value");
        if (axis != SweepAxis::SnrDb && (v < 1.0 || v != std::floor(v))) {
            throw std::invalid_argument("experiment spec: " + to_string(axis) + " values must be positive integers");
        }
    }
    for (const auto& m : methods) {
        if (std::find(kMethods.begin(), kMethods.end(), m.name) == kMethods.end()) {
            throw std::invalid_argument("experiment spec: unknown method '" + m.name + "'");
        }
        if (!(m.lambda > 0.0)) throw std::invalid_argument("experiment spec: lambda must be positive");
    }
}

ExperimentSpec parse_experiment_spec(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("experiment spec: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("experiment spec: top level must be an object");

    ExperimentSpec spec;
    const json g = section(doc, "graph");
    spec.graph.kind = read_or<std::string>(g, "kind", "sbm");
    spec.graph.sbm.clusters = read_or<std::size_t>(g, "clusters", spec.graph.sbm.clusters);
    spec.graph.sbm.per_cluster = read_or<std::size_t>(g, "per_cluster", spec.graph.sbm.per_cluster);
    spec.graph.sbm.p_intra =
        read_or<double>(g, "p_intra", 6.0 / static_cast<double>(std::max<std::size_t>(spec.graph.sbm.per_cluster, 1)));
    spec.graph.sbm.link_nodes = read_or<std::size_t>(g, "link_nodes", spec.graph.sbm.link_nodes);
    spec.graph.named.n = read_or<std::size_t>(g, "n", 0);
    spec.graph.named.rows = read_or<std::size_t>(g, "rows", 0);
    spec.graph.named.cols = read_or<std::size_t>(g, "cols", 0);
    spec.graph.named.p = read_or<double>(g, "p", 0.0);
    spec.graph.path = read_or<std::string>(g, "path", "");
    spec.graph.regenerate_per_trial = read_or<bool>(g, "regenerate_per_trial", false);

    const json f = section(doc, "filter");
    spec.filter.psi = read_or<int>(f, "psi", 1);
    spec.filter.coeffs = read_or<std::vector<double>>(f, "coeffs", {});
    spec.filter.coeff_rate = read_or<double>(f, "coeff_rate", 1.0);
    try {
        spec.filter.gso = gso_kind_from_string(read_or<std::string>(f, "gso", "laplacian"));
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("experiment spec: ") + e.what());
    }
    if (f.contains("max_eig") && !f.at("max_eig").is_null()) spec.filter.max_eig = read_or<double>(f, "max_eig", 0.0);

    const json s = section(doc, "signal");
    try {
        spec.signal.scenario = support_scenario_from_string(read_or<std::string>(s, "scenario", "localized"));
        spec.signal.values = value_distribution_from_string(read_or<std::string>(s, "values", "std-normal"));
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("experiment spec: ") + e.what());
    }
    spec.signal.sparsity = read_or<std::size_t>(s, "sparsity", 4);
    spec.signal.seed_pool = read_or<std::string>(s, "seed_pool", "all");

    const json n = section(doc, "noise");
    spec.noise.sigma_n = read_or<double>(n, "sigma_n", 0.01);
    std::vector<double> snr_grid{20.0};
    if (n.contains("snr_db")) snr_grid = number_list(n.at("snr_db"), "snr_db");
    if (!snr_grid.empty()) spec.noise.snr_db = snr_grid.front();
    if (n.contains("zeta") && !n.at("zeta").is_null()) spec.noise.zeta = read_or<double>(n, "zeta", 0.0);

    if (doc.contains("sweep")) {
        const json sw = section(doc, "sweep");
        spec.axis = sweep_axis_from_string(read_or<std::string>(sw, "axis", "snr_db"));
        if (!sw.contains("values")) throw std::invalid_argument("experiment spec: sweep needs 'values'");
        spec.axis_values = number_list(sw.at("values"), "values");
    } else {
        spec.axis = SweepAxis::SnrDb;
        spec.axis_values = snr_grid;
    }

    if (doc.contains("methods")) {
        const json& ms = doc.at("methods");
        if (!ms.is_array()) throw std::invalid_argument("experiment spec: 'methods' must be an array");
        for (const auto& m : ms) {
            MethodSpec ms_entry;
            if (m.is_string()) {
                ms_entry.name = m.get<std::string>();
            } else if (m.is_object()) {
                ms_entry.name = read_or<std::string>(m, "name", "");
                ms_entry.gfoc = read_or<bool>(m, "gfoc", false);
                ms_entry.lambda = read_or<double>(m, "lambda", 0.01);
            } else {
                throw std::invalid_argument("experiment spec: method entries must be strings or objects");
            }
            spec.methods.push_back(std::move(ms_entry));
        }
    }
    const auto trials = read_or<long long>(doc, "trials", 100);
    if (trials < 0) throw std::invalid_argument("experiment spec: trials must be >= 1");
    spec.trials = static_cast<std::size_t>(trials);
    spec.seed = read_or<std::uint64_t>(doc, "seed", 1);
    spec.exhaustive_limit = read_or<std::size_t>(doc, "exhaustive_limit", spec.exhaustive_limit);
    spec.validate();
    return spec;
}

ExperimentSpec read_experiment_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open experiment spec '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_spec(buf.str());
}

std::string experiment_spec_to_json(const ExperimentSpec& spec) {
    json doc;
    doc["graph"] = {{"kind", spec.graph.kind},
                    {"clusters", spec.graph.sbm.clusters},
                    {"per_cluster", spec.graph.sbm.per_cluster},
                    {"p_intra", spec.graph.sbm.p_intra},
                    {"link_nodes", spec.graph.sbm.link_nodes},
                    {"n", spec.graph.named.n},
                    {"rows", spec.graph.named.rows},
                    {"cols", spec.graph.named.cols},
                    {"p", spec.graph.named.p},
                    {"path", spec.graph.path},
                    {"regenerate_per_trial", spec.graph.regenerate_per_trial}};
    doc["filter"] = {{"psi", spec.filter.psi},
                     {"coeffs", spec.filter.coeffs},
                     {"coeff_rate", spec.filter.coeff_rate},
                     {"gso", to_string(spec.filter.gso)}};
    doc["filter"]["max_eig"] = spec.filter.max_eig ? json(*spec.filter.max_eig) : json(nullptr);
    doc["signal"] = {{"scenario", to_string(spec.signal.scenario)},
                     {"sparsity", spec.signal.sparsity},
                     {"values", to_string(spec.signal.values)},
                     {"seed_pool", spec.signal.seed_pool}};
    doc["noise"] = {{"sigma_n", spec.noise.sigma_n}, {"snr_db", spec.noise.snr_db}};
    doc["noise"]["zeta"] = spec.noise.zeta ? json(*spec.noise.zeta) : json(nullptr);
    doc["sweep"] = {{"axis", to_string(spec.axis)}, {"values", spec.axis_values}};
    doc["methods"] = json::array();
    for (const auto& m : spec.methods) {
        doc["methods"].push_back({{"name", m.name}, {"gfoc", m.gfoc}, {"lambda", m.lambda}});
    }
    doc["trials"] = spec.trials;
    doc["seed"] = spec.seed;
    doc["exhaustive_limit"] = spec.exhaustive_limit;
    return doc.dump(2);
}

std::vector<std::string> reported_methods(const ExperimentSpec& spec) {
    std::vector<std::string> out;
    for (const auto& m : spec.methods) {
        out.push_back(m.name);
        if (m.gfoc) out.push_back(m.name + "+gfoc");
    }
    return out;
}

BenchmarkReport run_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
    spec.validate();
    const auto names = reported_methods(spec);
    const TrialRunner runner(spec, opts);
    BenchmarkReport report;

    for (std::size_t p = 0; p < spec.axis_values.size(); ++p) {
        PointSetup pt;
        pt.axis_value = spec.axis_values[p];
        pt.psi = spec.filter.psi;
        pt.clusters = spec.graph.sbm.clusters;
        pt.snr_db = spec.noise.snr_db;
        switch (spec.axis) {
            case SweepAxis::SnrDb: pt.snr_db = pt.axis_value; break;
            case SweepAxis::Psi: pt.psi = static_cast<int>(pt.axis_value); break;
            case SweepAxis::Clusters: pt.clusters = static_cast<std::size_t>(pt.axis_value); break;
        }

        std::optional<GraphBundle> fixed;
        if (!spec.graph.regenerate_per_trial) {
            fixed = make_bundle(spec, pt, derive_seed(spec.seed, p, kFixedGraph, kGraphStream));
        }
        const GraphBundle* fixed_ptr = fixed ? &*fixed : nullptr;

        std::vector<std::vector<MethodOutcome>> outcomes(spec.trials);
        const std::size_t workers = std::clamp<std::size_t>(opts.jobs, 1, spec.trials);
        if (workers == 1) {
            for (std::size_t t = 0; t < spec.trials; ++t) outcomes[t] = runner.run(p, t, pt, fixed_ptr);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(workers);
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t t = next++; t < spec.trials; t = next++) {
                            outcomes[t] = runner.run(p, t, pt, fixed_ptr);
                        }
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (const auto& e : errors) {
                if (e) std::rethrow_exception(e);
            }
        }

        // Aggregate in trial order so floating-point sums do not depend on scheduling.
        std::vector<Accumulator> acc(names.size());
        for (const auto& trial : outcomes) {
            for (std::size_t i = 0; i < names.size(); ++i) acc[i].add(trial[i]);
        }
        for (std::size_t i = 0; i < names.size(); ++i) {
            const auto& a = acc[i];
            ReportRow row;
            row.method = names[i];
            row.axis_name = to_string(spec.axis);
            row.axis_value = pt.axis_value;
            row.fscore_mean = mean_of(a.f_sum, a.count);
            row.fscore_se = standard_error(a.f_sum, a.f_sq, a.count);
            row.mse_mean = mean_of(a.m_sum, a.count);
            row.mse_se = standard_error(a.m_sum, a.m_sq, a.count);
            row.evals_mean = mean_of(a.e_sum, a.count);
            row.failures = a.failures;
            row.trials = spec.trials;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

const ReportRow* BenchmarkReport::find(const std::string& method, double axis_value) const {
    for (const auto& r : rows) {
        if (r.method == method && r.axis_value == axis_value) return &r;
    }
    return nullptr;
}

}  // namespace gsr
