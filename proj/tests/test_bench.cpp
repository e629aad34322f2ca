#include <doctest.h>

#include <mutex>
#include <sstream>

#include "graphsr/bench.hpp"
#include "oracles.hpp"

using namespace gsr;

namespace {

ExperimentSpec small_spec() {
    ExperimentSpec spec;
    spec.graph.sbm.clusters = 2;
    spec.graph.sbm.per_cluster = 20;
    spec.graph.sbm.p_intra = 0.2;
    spec.filter.psi = 2;
    spec.filter.max_eig = 12.0;
    spec.signal.sparsity = 3;
    spec.noise.sigma_n = 0.01;
    spec.axis_values = {10.0, 20.0};
    spec.methods = {{"gm-gic", true, 0.01}, {"g-bnb", false, 0.01}, {"omp", true, 0.01}, {"lasso", false, 0.01}};
    spec.trials = 6;
    spec.seed = 5;
    return spec;
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("F-score") {
    CHECK(f_score({1, 2}, {1, 3}) == 0.5);
    CHECK(f_score({1, 2, 5}, {1, 2, 5}) == 1.0);
    CHECK(f_score({0, 1, 2, 3}, {0, 1}) == doctest::Approx(2.0 / 3.0));
    CHECK(f_score({}, {}) == 1.0);
    CHECK(f_score({}, {4}) == 0.0);
    CHECK(f_score({4}, {}) == 0.0);

    std::mt19937_64 rng(113);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<NodeId> a, b;
        const std::size_t size = rng() % 6;
        while (SupportSet(a).size() < size) a.push_back(static_cast<NodeId>(rng() % 10));
        while (SupportSet(b).size() < size) b.push_back(static_cast<NodeId>(rng() % 10));
        const SupportSet sa(a), sb(b);
        const double f = f_score(sa, sb);
        CHECK(f == doctest::Approx(f_score(sb, sa)));
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }
}

TEST_CASE("MSE") {
    const Eigen::VectorXd x = (Eigen::VectorXd(4) << 1.0, 0.0, -2.0, 0.5).finished();
    CHECK(mse(x, x) == doctest::Approx(0.0));
    CHECK(mse(x, 3.0 * x) == doctest::Approx(0.0));
    CHECK(mse(x, -x) == doctest::Approx(4.0));
    CHECK(mse(x, Eigen::VectorXd::Zero(4)) == 1.0);
    CHECK_THROWS_AS(mse(Eigen::VectorXd::Zero(4), x), std::invalid_argument);
    CHECK_THROWS_AS(mse(x, Eigen::VectorXd::Ones(3)), std::invalid_argument);
}

TEST_CASE("experiment spec parsing") {
    const char* text = R"({
        "graph": {"kind": "sbm", "clusters": 2, "per_cluster": 30},
        "filter": {"psi": 3, "max_eig": 12},
        "signal": {"scenario": "mixed", "sparsity": 4, "values": "uniform-split", "seed_pool": "first-cluster"},
        "noise": {"sigma_n": 0.02, "snr_db": [5, 15, 25], "zeta": 0.5},
        "methods": ["omp", {"name": "lasso", "gfoc": true, "lambda": 0.1}],
        "trials": 12,
        "seed": 99
    })";
    const ExperimentSpec spec = parse_experiment_spec(text);
    CHECK(spec.graph.sbm.per_cluster == 30);
    CHECK(spec.graph.sbm.p_intra == doctest::Approx(0.2));
    CHECK(spec.filter.psi == 3);
    CHECK(spec.filter.max_eig.value() == 12.0);
    CHECK(spec.signal.scenario == SupportScenario::Mixed);
    CHECK(spec.signal.values == ValueDistribution::UniformSplit);
    CHECK(spec.noise.zeta.value() == 0.5);
    CHECK(spec.axis == SweepAxis::SnrDb);
    CHECK(spec.axis_values == std::vector<double>{5, 15, 25});
    REQUIRE(spec.methods.size() == 2);
    CHECK(spec.methods[1].gfoc);
    CHECK(spec.methods[1].lambda == 0.1);
    CHECK(reported_methods(spec) == std::vector<std::string>{"omp", "lasso", "lasso+gfoc"});

    const ExperimentSpec again = parse_experiment_spec(experiment_spec_to_json(spec));
    CHECK(experiment_spec_to_json(again) == experiment_spec_to_json(spec));

    const ExperimentSpec sweep =
        parse_experiment_spec(R"({"sweep": {"axis": "psi", "values": [1, 2]}, "methods": ["omp"], "trials": 1})");
    CHECK(sweep.axis == SweepAxis::Psi);

    CHECK_THROWS_AS(parse_experiment_spec(R"({"methods": ["omp"], "trials": 0})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_spec(R"({"methods": ["omp"], "noise": {"snr_db": []}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_spec(R"({"methods": ["foo"]})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_spec(R"({"methods": []})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_spec("{not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_spec(R"({"methods": ["omp"], "trials": "many"})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_spec(R"({"methods": ["omp"], "sweep": {"axis": "psi", "values": [1.5]}})"),
                    std::invalid_argument);

    ExperimentSpec zero = small_spec();
    zero.trials = 0;
    CHECK_THROWS_AS(run_experiment(zero), std::invalid_argument);
}

TEST_CASE("report emission") {
    BenchmarkReport empty;
    CHECK(emit_report(empty, ReportFormat::Csv) ==
          "method,axis_name,axis_value,fscore_mean,fscore_se,mse_mean,mse_se,evals_mean,failures,trials\n");
    CHECK(parse_report_json(emit_report(empty, ReportFormat::Json)) == empty);

    BenchmarkReport r;
    r.rows.push_back({"omp", "snr_db", 20.0, 0.1 + 0.2, 1.0 / 3.0, 2.0 / 7.0, 1e-17, 123.456, 2, 10});
    r.rows.push_back({"gm-gic", "snr_db", -5.5, 1.0, 0.0, 0.0, 0.0, 1e6, 0, 10});
    CHECK(parse_report_json(emit_report(r, ReportFormat::Json)) == r);
    const std::string csv = emit_report(r, ReportFormat::Csv);
    CHECK(count_lines(csv) == 3);
    CHECK(csv.find("omp,snr_db,20,0.30000000000000004,") != std::string::npos);
    CHECK(report_format_from_string("json") == ReportFormat::Json);
    CHECK_THROWS(report_format_from_string("xml"));
}

TEST_CASE("run_experiment") {
    const ExperimentSpec spec = small_spec();
    std::mutex lock;
    std::size_t records = 0;
    RunOptions opts;
    opts.observer = [&](const TrialRecord& rec) {
        std::lock_guard<std::mutex> guard(lock);
        ++records;
        REQUIRE(rec.result != nullptr);
        // The reported GIC must match a fresh evaluation of the same support.
        GicEvaluator fresh(rec.instance->filter->h, rec.instance->y, *rec.config);
        CHECK(rec.result->gic_value == doctest::Approx(fresh.gic(rec.result->support)).epsilon(1e-9));
        CHECK(rec.result->support.size() <= spec.signal.sparsity);
    };
    const BenchmarkReport report = run_experiment(spec, opts);
    CHECK(records == spec.trials * spec.axis_values.size() * 6);
    CHECK(report.rows.size() == 6 * spec.axis_values.size());
    CHECK(count_lines(emit_report(report, ReportFormat::Csv)) == report.rows.size() + 1);
    for (const auto& row : report.rows) {
        CHECK(row.fscore_mean >= 0.0);
        CHECK(row.fscore_mean <= 1.0);
        CHECK(row.mse_mean >= 0.0);
        CHECK(row.trials == spec.trials);
        CHECK(row.failures == 0);
        CHECK(row.axis_name == "snr_db");
    }
    REQUIRE(report.find("omp+gfoc", 20.0) != nullptr);
    CHECK(report.find("omp+gfoc", 20.0)->evals_mean > report.find("omp", 20.0)->evals_mean);

    SUBCASE("replay and worker count do not change the report") {
        CHECK(run_experiment(spec) == report);
        RunOptions par;
        par.jobs = 3;
        CHECK(emit_report(run_experiment(spec, par), ReportFormat::Csv) == emit_report(report, ReportFormat::Csv));
        ExperimentSpec other = spec;
        other.seed = 6;
        CHECK_FALSE(run_experiment(other) == report);
    }
    SUBCASE("failures are counted, not fatal") {
        ExperimentSpec big = spec;
        big.methods = {{"exhaustive", false, 0.01}, {"omp", false, 0.01}};
        big.exhaustive_limit = 10;
        const BenchmarkReport r = run_experiment(big);
        CHECK(r.find("exhaustive", 10.0)->failures == spec.trials);
        CHECK(r.find("omp", 10.0)->failures == 0);
    }
    SUBCASE("psi and cluster sweeps") {
        ExperimentSpec sw = spec;
        sw.methods = {{"omp", false, 0.01}};
        sw.axis = SweepAxis::Psi;
        sw.axis_values = {1, 3};
        const BenchmarkReport r = run_experiment(sw);
        CHECK(r.rows.size() == 2);
        CHECK(r.rows[1].axis_name == "psi");
        sw.axis = SweepAxis::Clusters;
        sw.axis_values = {1, 3};
        sw.graph.regenerate_per_trial = true;
        CHECK(run_experiment(sw).rows.size() == 2);
    }
}
