#include <limits>

#include "graphsr/recovery.hpp"

namespace gsr {

Eigen::VectorXd RecoveryResult::dense_signal(std::size_t n) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < support.size(); ++i) x(support[i]) = x_hat(static_cast<Eigen::Index>(i));
    return x;
}

RecoveryResult finalize_result(GicEvaluator& ev, SupportSet support, std::string method, bool converged) {
    RecoveryResult out;
    out.method = std::move(method);
    out.converged = converged;
    if (!support.empty()) {
        out.x_hat = ev.ls_recover(support);
        out.gic_value = ev.gic(support);
    }
    out.support = std::move(support);
    out.evaluations = ev.evaluations();
    out.rank_skips = ev.rank_skips();
    return out;
}

std::size_t enumeration_size(std::size_t n, std::size_t s) {
    constexpr auto kMax = std::numeric_limits<std::size_t>::max();
    std::size_t total = 0;
    std::size_t binom = 1;  // C(n, j)
    for (std::size_t j = 1; j <= s && j <= n; ++j) {
        // C(n, j) = C(n, j-1) * (n - j + 1) / j, exact at every step.
        const std::size_t factor = n - j + 1;
        if (binom > kMax / factor) return kMax;
        binom = binom * factor / j;
        if (total > kMax - binom) return kMax;
        total += binom;
    }
    return total;
}

namespace {

bool preferred(double gic, std::span<const NodeId> support, double best_gic, const std::vector<NodeId>& best) {
    if (gic != best_gic) return gic > best_gic;
    if (support.size() != best.size()) return support.size() < best.size();
    return std::lexicographical_compare(support.begin(), support.end(), best.begin(), best.end());
}

}  // namespace

RecoveryResult exhaustive_gic(GicEvaluator& ev, const SupportSet& candidates) {
    double best_gic = 0.0;
    std::vector<NodeId> best;
    ev.for_each_subset(candidates, ev.config().sparsity, [&](std::span<const NodeId> omega, double energy) {
        const double value = ev.gic_from_energy(energy, omega.size());
        if (preferred(value, omega, best_gic, best)) {
            best_gic = value;
            best.assign(omega.begin(), omega.end());
        }
    });
    return finalize_result(ev, SupportSet(std::move(best)), "exhaustive");
}

RecoveryResult exhaustive_gic(GicEvaluator& ev) {
    return exhaustive_gic(ev, SupportSet::range(0, static_cast<NodeId>(ev.node_count())));
}

}  // namespace gsr
