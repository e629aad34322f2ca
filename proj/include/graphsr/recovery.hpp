#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphsr/gic.hpp"
#include "graphsr/graph.hpp"

namespace gsr {

struct RecoveryResult {
    SupportSet support;
    Eigen::VectorXd x_hat;  // values on `support`, in ascending node order
    double gic_value = 0.0;
    std::size_t evaluations = 0;
    std::string method;
    bool converged = true;
    std::size_t rank_skips = 0;

    /// x_hat scattered into a length-n vector.
    Eigen::VectorXd dense_signal(std::size_t n) const;
};

/// Fills x_hat (LS on the support), gic_value and the evaluator counters.
RecoveryResult finalize_result(GicEvaluator& ev, SupportSet support, std::string method,
                               bool converged = true);

// ---------------------------------------------------------------------------
// Exhaustive GIC

/// argmax of GIC over all subsets of `candidates` with at most cfg.sparsity
/// elements, the empty support (GIC 0) included. Ties go to the smaller
/// cardinality, then the lexicographically smaller support.
RecoveryResult exhaustive_gic(GicEvaluator& ev, const SupportSet& candidates);
RecoveryResult exhaustive_gic(GicEvaluator& ev);

/// sum_{j=1}^{s} C(n, j), saturating.
std::size_t enumeration_size(std::size_t n, std::size_t s);

// ---------------------------------------------------------------------------
// GM-GIC

/// Connected components of the auxiliary graph on d_hat whose edges join
/// pairs at hop distance 1..2 psi. Components are ordered by smallest node.
std::vector<SupportSet> partition_candidates(const GeodesicTable& dist, const SupportSet& d_hat, int psi);

struct GmGicOptions {
    int psi = 1;
    std::size_t jobs = 1;  // workers for the per-subset searches
};

struct GmGicTrace {
    SupportSet screened;
    std::vector<SupportSet> partition;
    std::vector<SupportSet> partial;
    SupportSet joint;
};

/// Screen, partition, per-subset exhaustive GIC, then a sparsity-level
/// correction by exhaustive GIC over subsets of the joint estimate.
RecoveryResult gm_gic(GicEvaluator& ev, const GeodesicTable& dist, const GmGicOptions& opts,
                      GmGicTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// Graph branch and bound

/// One leaf (S0, S1) of the search tree. Because branching always fixes the
/// next node of the energy ordering, S0 u S1 is the first `depth` nodes of
/// that ordering.
struct BnbNode {
    SupportSet s0;
    SupportSet s1;
    double lower = 0.0;
    double upper = 0.0;

    std::size_t depth() const noexcept { return s0.size() + s1.size(); }
};

struct BnbOptions {
    /// 0 selects the default 10 * 2^s * n.
    std::size_t max_iterations = 0;
    double termination_tolerance = 1e-9;
};

/// Best-first search over boolean inclusion vectors: the min-depth leaf with
/// the largest heuristic upper bound is split on the next node of the
/// ordering; leaves whose upper bound falls below the global lower bound are
/// pruned.
class GraphBnb {
public:
    GraphBnb(GicEvaluator& ev, std::vector<NodeId> ordering, BnbOptions opts = {});

    /// Returns false once terminated (U == L within tolerance) or no leaf can
    /// be split.
    bool step();
    RecoveryResult run();

    const std::vector<BnbNode>& leaves() const noexcept { return leaves_; }
    double lower() const noexcept { return global_lower_; }
    double upper() const noexcept { return global_upper_; }
    std::size_t iterations() const noexcept { return iterations_; }
    bool terminated() const;
    /// S1 of the leaf attaining the global lower bound.
    SupportSet incumbent() const;

    /// Heuristic bound gic(S1) + (s - |S1|) max(gic({next}), 0).
    double upper_bound(const SupportSet& s1, std::size_t depth);

private:
    BnbNode make_node(SupportSet s0, SupportSet s1);
    bool branchable(const BnbNode& node) const;
    void refresh_bounds();

    GicEvaluator& ev_;
    std::vector<NodeId> ordering_;
    BnbOptions opts_;
    std::vector<BnbNode> leaves_;
    double global_lower_ = 0.0;
    double global_upper_ = 0.0;
    std::size_t iterations_ = 0;
};

RecoveryResult graph_bnb_gic(GicEvaluator& ev, const std::vector<NodeId>& ordering, const BnbOptions& opts = {});
RecoveryResult graph_bnb_gic(GicEvaluator& ev, const BnbOptions& opts = {});

// ---------------------------------------------------------------------------
// Graph first-order correction

struct GfocOptions {
    /// Swap candidates are nodes 1..radius hops away (1 = one-hop correction).
    int radius = 1;
};

/// For each node k of the input (ascending), swap k for the neighbor that
/// maximizes GIC of the working set when that strictly improves it. Inputs
/// larger than the budget are first cut to the s largest |x_hat| entries.
RecoveryResult gfoc(GicEvaluator& ev, const Graph& g, const SupportSet& omega_in, const GfocOptions& opts = {});

// ---------------------------------------------------------------------------
// Baselines

struct OmpOptions {
    std::optional<std::size_t> max_cardinality;   // default: cfg.sparsity
    std::optional<double> residual_threshold;     // default: n * sigma_n^2
};

RecoveryResult omp(GicEvaluator& ev, const OmpOptions& opts = {});

struct LassoOptions {
    double lambda = 0.01;
    std::size_t max_iterations = 100000;
    double tolerance = 1e-8;
};

/// Dense coordinate-descent solution of 0.5 ||y - H x||^2 + lambda ||x||_1.
struct LassoSolution {
    Eigen::VectorXd x;
    std::size_t sweeps = 0;
    bool converged = false;
};

LassoSolution lasso_solve(const Eigen::MatrixXd& h, const Eigen::VectorXd& y, const LassoOptions& opts);

/// Lasso, then the up-to-s largest-|x| nonzeros as the support, re-fit by LS.
RecoveryResult lasso(GicEvaluator& ev, const LassoOptions& opts = {});

}  // namespace gsr
