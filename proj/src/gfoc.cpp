#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "graphsr/recovery.hpp"

namespace gsr {

namespace {

double objective(GicEvaluator& ev, const SupportSet& omega) {
    try {
        return ev.gic(omega);
    } catch (const RankError&) {
        return -std::numeric_limits<double>::infinity();
    }
}

// Keeps the s entries with the largest |LS coefficient|; falls back to the
// single-node energies when the oversized support is itself rank deficient.
SupportSet truncate_to_budget(GicEvaluator& ev, const SupportSet& omega, std::size_t s) {
    std::vector<double> score(omega.size());
    try {
        const Eigen::VectorXd x = ev.ls_recover(omega);
        for (std::size_t i = 0; i < omega.size(); ++i) score[i] = std::abs(x(static_cast<Eigen::Index>(i)));
    } catch (const RankError&) {
        const auto& energies = ev.single_energies();
        for (std::size_t i = 0; i < omega.size(); ++i) score[i] = energies[static_cast<std::size_t>(omega[i])];
    }
    std::vector<std::size_t> idx(omega.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    std::vector<NodeId> kept;
    for (std::size_t i = 0; i < s; ++i) kept.push_back(omega[idx[i]]);
    return SupportSet(std::move(kept));
}

}  // namespace

RecoveryResult gfoc(GicEvaluator& ev, const Graph& g, const SupportSet& omega_in, const GfocOptions& opts) {
    if (opts.radius < 1) throw std::invalid_argument("GFOC radius must be >= 1");
    if (g.node_count() != ev.node_count()) throw std::invalid_argument("graph and filter sizes differ");
    omega_in.validate(ev.node_count());
    const std::size_t s = ev.config().sparsity;
    const SupportSet start = omega_in.size() > s ? truncate_to_budget(ev, omega_in, s) : omega_in;

    SupportSet working = start;
    double working_value = objective(ev, working);
    for (NodeId k : start) {
        const SupportSet reduced = working.without(k);
        SupportSet best;
        double best_value = -std::numeric_limits<double>::infinity();
        for (NodeId m : neighborhood(g, SupportSet{k}, opts.radius)) {
            if (m == k) continue;
            SupportSet trial = reduced.with(m);
            const double value = objective(ev, trial);
            if (value > best_value) {
                best_value = value;
                best = std::move(trial);
            }
        }
        if (best_value > working_value) {
            working = std::move(best);
            working_value = best_value;
        }
    }
    return finalize_result(ev, std::move(working), "gfoc");
}

}  // namespace gsr
