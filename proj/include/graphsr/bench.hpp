#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "graphsr/filter.hpp"
#include "graphsr/generators.hpp"
#include "graphsr/recovery.hpp"

namespace gsr {

// ---------------------------------------------------------------------------
// Metrics

/// 2tp / (2tp + fn + fp). Both empty scores 1.
double f_score(const SupportSet& truth, const SupportSet& estimate);

/// ||x/||x|| - x_hat/||x_hat||||^2, with 1 for an all-zero estimate.
/// Throws std::invalid_argument when x_true is zero or the lengths differ.
double mse(const Eigen::VectorXd& x_true, const Eigen::VectorXd& x_hat);

// ---------------------------------------------------------------------------
// Experiment description

struct GraphSpec {
    std::string kind = "sbm";  // sbm | cycle | path | grid2d | erdos_renyi | edge_list
    SbmParams sbm;
    NamedGraphParams named;
    std::string path;  // edge_list
    bool regenerate_per_trial = false;
};

struct FilterSpec {
    int psi = 1;
    std::vector<double> coeffs;  // empty: geometric_coefficients(psi, coeff_rate)
    double coeff_rate = 1.0;
    GsoKind gso = GsoKind::LaplacianUnweighted;
    std::optional<double> max_eig;
};

struct SignalSpec {
    SupportScenario scenario = SupportScenario::Localized;
    std::size_t sparsity = 4;
    ValueDistribution values = ValueDistribution::StdNormal;
    std::string seed_pool = "all";  // all | first-cluster
};

struct NoiseSpec {
    double sigma_n = 0.01;
    double snr_db = 20.0;  // used when the sweep axis is not snr_db
    std::optional<double> zeta;
};

struct MethodSpec {
    std::string name;  // exhaustive | gm-gic | g-bnb | omp | lasso
    bool gfoc = false;
    double lambda = 0.01;
};

enum class SweepAxis { SnrDb, Psi, Clusters };

std::string to_string(SweepAxis axis);

struct ExperimentSpec {
    GraphSpec graph;
    FilterSpec filter;
    SignalSpec signal;
    NoiseSpec noise;
    SweepAxis axis = SweepAxis::SnrDb;
    std::vector<double> axis_values{20.0};
    std::vector<MethodSpec> methods;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::size_t exhaustive_limit = 5'000'000;

    /// Throws std::invalid_argument on an unusable spec.
    void validate() const;
};

/// JSON document -> spec. Throws std::invalid_argument with the offending key.
ExperimentSpec parse_experiment_spec(std::string_view json_text);
ExperimentSpec read_experiment_spec_file(const std::string& path);
std::string experiment_spec_to_json(const ExperimentSpec& spec);

/// Reported method names: each MethodSpec yields `name`, plus `name+gfoc`
/// when the correction is enabled.
std::vector<std::string> reported_methods(const ExperimentSpec& spec);

// ---------------------------------------------------------------------------
// Execution

struct ReportRow {
    std::string method;
    std::string axis_name;
    double axis_value = 0.0;
    double fscore_mean = 0.0;
    double fscore_se = 0.0;
    double mse_mean = 0.0;
    double mse_se = 0.0;
    double evals_mean = 0.0;
    std::size_t failures = 0;
    std::size_t trials = 0;

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct BenchmarkReport {
    std::vector<ReportRow> rows;

    const ReportRow* find(const std::string& method, double axis_value) const;
    friend bool operator==(const BenchmarkReport&, const BenchmarkReport&) = default;
};

/// Per (trial, method) record handed to an observer; `instance` and
/// `result` are only valid during the call. `result` is null on failure.
struct TrialRecord {
    std::size_t point = 0;
    std::size_t trial = 0;
    std::string method;
    const Instance* instance = nullptr;
    const GicConfig* config = nullptr;
    const RecoveryResult* result = nullptr;
    std::string error;
};

struct RunOptions {
    std::size_t jobs = 1;
    /// Called from worker threads when jobs > 1.
    std::function<void(const TrialRecord&)> observer;
};

/// Monte-Carlo sweep. Each trial draws from its own RNG stream derived from
/// (seed, grid point, trial), so the report does not depend on `jobs`.
BenchmarkReport run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});

enum class ReportFormat { Csv, Json };

ReportFormat report_format_from_string(const std::string& name);
std::string emit_report(const BenchmarkReport& report, ReportFormat format);
BenchmarkReport parse_report_json(std::string_view json_text);

}  // namespace gsr
