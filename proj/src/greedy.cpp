#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphsr/recovery.hpp"

namespace gsr {

RecoveryResult omp(GicEvaluator& ev, const OmpOptions& opts) {
    const Eigen::MatrixXd& h = ev.h();
    const std::size_t n = ev.node_count();
    const std::size_t max_card = std::min(opts.max_cardinality.value_or(ev.config().sparsity), n);
    const double threshold =
        opts.residual_threshold.value_or(static_cast<double>(h.rows()) * ev.config().noise_variance());

    const Eigen::VectorXd norms = h.colwise().norm().transpose();
    const Eigen::VectorXd& y = ev.y();
    Projector proj(y, static_cast<Eigen::Index>(std::max<std::size_t>(max_card, 1)));
    std::vector<bool> excluded(n, false);
    for (std::size_t k = 0; k < n; ++k) excluded[k] = !(norms(static_cast<Eigen::Index>(k)) > 0.0);
    SupportSet chosen;
    Eigen::VectorXd residual = y;

    while (chosen.size() < max_card && residual.squaredNorm() > threshold) {
        const Eigen::VectorXd corr = h.transpose() * residual;
        std::size_t pick = n;
        double best = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (excluded[k]) continue;
            const double score = std::abs(corr(static_cast<Eigen::Index>(k))) / norms(static_cast<Eigen::Index>(k));
            if (score > best) {
                best = score;
                pick = k;
            }
        }
        if (pick == n) break;
        excluded[pick] = true;
        if (!proj.push(h.col(static_cast<Eigen::Index>(pick)), ev.config().rank_tolerance)) continue;
        chosen.insert(static_cast<NodeId>(pick));
        residual = proj.residual();
    }
    return finalize_result(ev, std::move(chosen), "omp");
}

LassoSolution lasso_solve(const Eigen::MatrixXd& h, const Eigen::VectorXd& y, const LassoOptions& opts) {
    if (!(opts.lambda > 0.0)) throw std::invalid_argument("lasso lambda must be positive");
    const Eigen::Index n = h.cols();
    const Eigen::MatrixXd gram = h.transpose() * h;
    Eigen::VectorXd c = h.transpose() * y;  // H^T (y - H x)
    LassoSolution sol{Eigen::VectorXd::Zero(n), 0, false};
    Eigen::VectorXd& x = sol.x;

    for (std::size_t sweep = 1; sweep <= opts.max_iterations; ++sweep) {
        double max_delta = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double gjj = gram(j, j);
            if (!(gjj > 0.0)) continue;
            const double rho = c(j) + gjj * x(j);
            const double shrunk = std::copysign(std::max(std::abs(rho) - opts.lambda, 0.0), rho) / gjj;
            const double delta = shrunk - x(j);
            if (delta != 0.0) {
                c.noalias() -= gram.col(j) * delta;
                x(j) = shrunk;
                max_delta = std::max(max_delta, std::abs(delta));
            }
        }
        sol.sweeps = sweep;
        const double scale = x.cwiseAbs().maxCoeff();
        if (max_delta <= opts.tolerance * std::max(scale, 1e-300)) {
            sol.converged = true;
            break;
        }
    }
    return sol;
}

RecoveryResult lasso(GicEvaluator& ev, const LassoOptions& opts) {
    const LassoSolution sol = lasso_solve(ev.h(), ev.y(), opts);
    std::vector<NodeId> nonzero;
    for (Eigen::Index k = 0; k < sol.x.size(); ++k) {
        if (sol.x(k) != 0.0) nonzero.push_back(static_cast<NodeId>(k));
    }
    std::stable_sort(nonzero.begin(), nonzero.end(),
                     [&](NodeId a, NodeId b) { return std::abs(sol.x(a)) > std::abs(sol.x(b)); });
    if (nonzero.size() > ev.config().sparsity) nonzero.resize(ev.config().sparsity);
    SupportSet support(std::move(nonzero));
    // The LS re-fit on a rank-deficient top-s set falls back to the largest
    // full-rank prefix.
    try {
        return finalize_result(ev, support, "lasso", sol.converged);
    } catch (const RankError&) {
        std::vector<NodeId> ranked(support.begin(), support.end());
        std::stable_sort(ranked.begin(), ranked.end(),
                         [&](NodeId a, NodeId b) { return std::abs(sol.x(a)) > std::abs(sol.x(b)); });
        SupportSet kept;
        for (NodeId k : ranked) {
            SupportSet trial = kept.with(k);
            try {
                ev.ls_recover(trial);
                kept = std::move(trial);
            } catch (const RankError&) {
            }
        }
        return finalize_result(ev, std::move(kept), "lasso", sol.converged);
    }
}

}  // namespace gsr
