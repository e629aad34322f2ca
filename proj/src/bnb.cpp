#include <algorithm>
#include <cmath>

#include "graphsr/recovery.hpp"

namespace gsr {

GraphBnb::GraphBnb(GicEvaluator& ev, std::vector<NodeId> ordering, BnbOptions opts)
    : ev_(ev), ordering_(std::move(ordering)), opts_(opts) {
    if (ordering_.size() != ev_.node_count()) {
        throw std::invalid_argument("node ordering must be a permutation of all nodes");
    }
    ev_.single_energies();
    leaves_.push_back(make_node({}, {}));
    refresh_bounds();
}

double GraphBnb::upper_bound(const SupportSet& s1, std::size_t depth) {
    const double lower = ev_.gic(s1);
    const std::size_t s = ev_.config().sparsity;
    if (s1.size() >= s || depth >= ordering_.size()) return lower;
    const double next_energy = ev_.single_energies()[static_cast<std::size_t>(ordering_[depth])];
    const double next_gic = ev_.gic_from_energy(next_energy, 1);
    return lower + static_cast<double>(s - s1.size()) * std::max(next_gic, 0.0);
}

BnbNode GraphBnb::make_node(SupportSet s0, SupportSet s1) {
    BnbNode node{std::move(s0), std::move(s1), 0.0, 0.0};
    node.lower = ev_.gic(node.s1);
    node.upper = upper_bound(node.s1, node.depth());
    return node;
}

bool GraphBnb::branchable(const BnbNode& node) const {
    return node.s1.size() < ev_.config().sparsity && node.depth() < ordering_.size();
}

void GraphBnb::refresh_bounds() {
    global_lower_ = leaves_.front().lower;
    global_upper_ = leaves_.front().upper;
    for (const BnbNode& leaf : leaves_) {
        global_lower_ = std::max(global_lower_, leaf.lower);
        global_upper_ = std::max(global_upper_, leaf.upper);
    }
    std::erase_if(leaves_, [&](const BnbNode& leaf) { return leaf.upper < global_lower_; });
}

bool GraphBnb::terminated() const {
    return std::abs(global_upper_ - global_lower_) <=
           opts_.termination_tolerance * std::max(1.0, std::abs(global_upper_));
}

bool GraphBnb::step() {
    if (terminated()) return false;
    std::size_t pick = leaves_.size();
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
        const BnbNode& leaf = leaves_[i];
        if (!branchable(leaf)) continue;
        if (pick == leaves_.size()) {
            pick = i;
            continue;
        }
        const BnbNode& best = leaves_[pick];
        if (leaf.depth() != best.depth()) {
            if (leaf.depth() < best.depth()) pick = i;
        } else if (leaf.upper != best.upper) {
            if (leaf.upper > best.upper) pick = i;
        } else if (leaf.s1 < best.s1) {
            pick = i;
        }
    }
    if (pick == leaves_.size()) return false;

    BnbNode parent = std::move(leaves_[pick]);
    leaves_.erase(leaves_.begin() + static_cast<std::ptrdiff_t>(pick));
    const NodeId k = ordering_[parent.depth()];
    leaves_.push_back(make_node(parent.s0.with(k), parent.s1));
    leaves_.push_back(make_node(parent.s0, parent.s1.with(k)));
    refresh_bounds();
    ++iterations_;
    return true;
}

SupportSet GraphBnb::incumbent() const {
    const BnbNode* best = nullptr;
    for (const BnbNode& leaf : leaves_) {
        if (!best || leaf.lower > best->lower ||
            (leaf.lower == best->lower &&
             (leaf.s1.size() < best->s1.size() || (leaf.s1.size() == best->s1.size() && leaf.s1 < best->s1)))) {
            best = &leaf;
        }
    }
    return best ? best->s1 : SupportSet{};
}

RecoveryResult GraphBnb::run() {
    std::size_t cap = opts_.max_iterations;
    if (cap == 0) {
        const std::size_t s = std::min<std::size_t>(ev_.config().sparsity, 40);
        cap = 10 * (std::size_t{1} << s) * std::max<std::size_t>(ordering_.size(), 1);
    }
    while (iterations_ < cap && step()) {
    }
    return finalize_result(ev_, incumbent(), "g-bnb", terminated());
}

RecoveryResult graph_bnb_gic(GicEvaluator& ev, const std::vector<NodeId>& ordering, const BnbOptions& opts) {
    GraphBnb search(ev, ordering, opts);
    return search.run();
}

RecoveryResult graph_bnb_gic(GicEvaluator& ev, const BnbOptions& opts) {
    return graph_bnb_gic(ev, node_ordering(ev), opts);
}

}  // namespace gsr
