#include "graphsr/gic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gsr {

Penalty Penalty::linear(double per_element) {
    return Penalty{"linear", [per_element](std::size_t c) { return per_element * static_cast<double>(c); }};
}

void GicConfig::validate() const {
    if (sparsity == 0) throw std::invalid_argument("sparsity budget must be >= 1");
    if (!(sigma_n > 0.0)) throw std::invalid_argument("sigma_n must be positive");
    if (penalty(0) != 0.0) throw std::invalid_argument("penalty must satisfy rho(0) = 0");
    for (std::size_t c = 1; c <= sparsity; ++c) {
        if (penalty(c) < penalty(c - 1)) throw std::invalid_argument("penalty must be nondecreasing");
    }
    if (!(rank_tolerance >= 0.0)) throw std::invalid_argument("rank tolerance must be >= 0");
}

// ---------------------------------------------------------------------------
// Projector

Projector::Projector(const Eigen::VectorXd& y, Eigen::Index capacity)
    : y_(&y),
      q_(y.size(), std::max<Eigen::Index>(capacity, 1)),
      r_(Eigen::MatrixXd::Zero(std::max<Eigen::Index>(capacity, 1), std::max<Eigen::Index>(capacity, 1))),
      qty_(std::max<Eigen::Index>(capacity, 1)),
      prefix_energy_(static_cast<std::size_t>(std::max<Eigen::Index>(capacity, 1))) {}

bool Projector::push(const Eigen::Ref<const Eigen::VectorXd>& column, double rank_tolerance) {
    const double norm0 = column.norm();
    if (!(norm0 > 0.0)) return false;
    if (size_ == q_.cols()) {
        const Eigen::Index cap = 2 * q_.cols();
        q_.conservativeResize(Eigen::NoChange, cap);
        r_.conservativeResizeLike(Eigen::MatrixXd::Zero(cap, cap));
        qty_.conservativeResize(cap);
        prefix_energy_.resize(static_cast<std::size_t>(cap));
    }
    Eigen::VectorXd v = column;
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(size_);
    if (size_ > 0) {
        auto q = q_.leftCols(size_);
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd c = q.transpose() * v;
            v.noalias() -= q * c;
            coeff += c;
        }
    }
    const double rnorm = v.norm();
    if (!(rnorm > rank_tolerance * norm0)) return false;
    q_.col(size_) = v / rnorm;
    r_.col(size_).head(size_) = coeff;
    r_(size_, size_) = rnorm;
    qty_(size_) = q_.col(size_).dot(*y_);
    const double prev = size_ == 0 ? 0.0 : prefix_energy_[static_cast<std::size_t>(size_ - 1)];
    prefix_energy_[static_cast<std::size_t>(size_)] = prev + qty_(size_) * qty_(size_);
    ++size_;
    return true;
}

void Projector::pop() {
    if (size_ > 0) --size_;
}

Eigen::VectorXd Projector::coefficients() const {
    if (size_ == 0) return {};
    return r_.topLeftCorner(size_, size_).triangularView<Eigen::Upper>().solve(qty_.head(size_));
}

Eigen::VectorXd Projector::residual() const {
    if (size_ == 0) return *y_;
    return *y_ - q_.leftCols(size_) * qty_.head(size_);
}

// ---------------------------------------------------------------------------
// GicEvaluator

GicEvaluator::GicEvaluator(const Eigen::MatrixXd& h, Eigen::VectorXd y, GicConfig cfg, bool use_cache)
    : h_(&h), y_(std::move(y)), cfg_(std::move(cfg)), use_cache_(use_cache) {
    if (h.rows() != y_.size()) {
        throw std::invalid_argument("measurement length " + std::to_string(y_.size()) +
                                    " does not match the filter size " + std::to_string(h.rows()));
    }
    cfg_.validate();
}

std::optional<GicEvaluator::Key> GicEvaluator::make_key(std::span<const NodeId> nodes) {
    if (nodes.size() > 8) return std::nullopt;
    Key key;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto id = static_cast<std::uint64_t>(nodes[i]) + 1;
        if (id >= 0xffff) return std::nullopt;
        if (i < 4) {
            key.lo |= id << (16 * i);
        } else {
            key.hi |= id << (16 * (i - 4));
        }
    }
    return key;
}

std::optional<double> GicEvaluator::lookup(std::span<const NodeId> nodes) const {
    if (!use_cache_) return std::nullopt;
    const auto key = make_key(nodes);
    if (!key) return std::nullopt;
    if (auto it = cache_.find(*key); it != cache_.end()) return it->second;
    return std::nullopt;
}

void GicEvaluator::remember(std::span<const NodeId> nodes, double energy) {
    if (!use_cache_ || cache_.size() >= kCacheCapacity) return;
    if (const auto key = make_key(nodes)) cache_.emplace(*key, energy);
}

double GicEvaluator::projected_energy(const SupportSet& omega) {
    if (omega.empty()) return 0.0;
    omega.validate(node_count());
    if (auto hit = lookup(omega.view())) return *hit;
    Projector proj(y_, static_cast<Eigen::Index>(omega.size()));
    for (NodeId k : omega) {
        if (!proj.push(h_->col(k), cfg_.rank_tolerance)) {
            throw RankError("H restricted to " + omega.to_string() + " is rank deficient");
        }
    }
    ++evaluations_;
    const double energy = proj.energy();
    remember(omega.view(), energy);
    return energy;
}

double GicEvaluator::gic_from_energy(double energy, std::size_t cardinality) const {
    return energy / cfg_.noise_variance() - cfg_.penalty(cardinality);
}

double GicEvaluator::gic(const SupportSet& omega) {
    return gic_from_energy(projected_energy(omega), omega.size());
}

Eigen::VectorXd GicEvaluator::ls_recover(const SupportSet& omega) const {
    if (omega.empty()) return {};
    omega.validate(node_count());
    Projector proj(y_, static_cast<Eigen::Index>(omega.size()));
    for (NodeId k : omega) {
        if (!proj.push(h_->col(k), cfg_.rank_tolerance)) {
            throw RankError("H restricted to " + omega.to_string() + " is rank deficient");
        }
    }
    return proj.coefficients();
}

const std::vector<double>& GicEvaluator::single_energies() {
    if (singles_.size() == node_count()) return singles_;
    singles_.assign(node_count(), 0.0);
    for (std::size_t m = 0; m < node_count(); ++m) {
        try {
            singles_[m] = projected_energy(SupportSet{static_cast<NodeId>(m)});
        } catch (const RankError&) {
            ++rank_skips_;
        }
    }
    return singles_;
}

void GicEvaluator::for_each_subset(const SupportSet& candidates, std::size_t max_card,
                                   const SubsetVisitor& visit) {
    candidates.validate(node_count());
    const std::size_t depth_cap = std::min(max_card, candidates.size());
    if (depth_cap == 0) return;
    Projector proj(y_, static_cast<Eigen::Index>(depth_cap));
    std::vector<NodeId> current;
    std::vector<std::size_t> cursor;  // candidate position per depth
    current.reserve(depth_cap);
    const auto& cand = candidates.nodes();

    // Iterative DFS: at each depth try positions after the previous one.
    std::size_t next = 0;
    while (true) {
        if (current.size() < depth_cap && next < cand.size()) {
            const NodeId k = cand[next];
            if (!proj.push(h_->col(k), cfg_.rank_tolerance)) {
                ++rank_skips_;
                ++next;
                continue;
            }
            current.push_back(k);
            cursor.push_back(next);
            double energy = proj.energy();
            if (auto hit = lookup(current)) {
                energy = *hit;
            } else {
                ++evaluations_;
                remember(current, energy);
            }
            visit(current, energy);
            ++next;
            continue;
        }
        if (current.empty()) break;
        proj.pop();
        current.pop_back();
        next = cursor.back() + 1;
        cursor.pop_back();
    }
}

GicEvaluator GicEvaluator::fork() const {
    GicEvaluator child = *this;
    child.evaluations_ = 0;
    child.rank_skips_ = 0;
    return child;
}

void GicEvaluator::absorb(const GicEvaluator& child) {
    evaluations_ += child.evaluations_;
    rank_skips_ += child.rank_skips_;
    if (use_cache_) {
        for (const auto& [key, energy] : child.cache_) {
            if (cache_.size() >= kCacheCapacity) break;
            cache_.emplace(key, energy);
        }
    }
}

SupportSet glrt_screen(GicEvaluator& ev) {
    const double zeta = ev.config().zeta();
    const auto& energies = ev.single_energies();
    std::vector<NodeId> out;
    for (std::size_t m = 0; m < energies.size(); ++m) {
        if (energies[m] > zeta) out.push_back(static_cast<NodeId>(m));
    }
    return SupportSet(std::move(out));
}

std::vector<NodeId> node_ordering(GicEvaluator& ev) {
    const auto& energies = ev.single_energies();
    std::vector<NodeId> order(energies.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return energies[a] > energies[b]; });
    return order;
}

}  // namespace gsr
