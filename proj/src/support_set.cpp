#include "graphsr/support_set.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace gsr {

SupportSet::SupportSet(std::initializer_list<NodeId> nodes)
    : SupportSet(std::vector<NodeId>(nodes)) {}

SupportSet::SupportSet(std::vector<NodeId> nodes) : nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
}

SupportSet SupportSet::range(NodeId first, NodeId last) {
    SupportSet out;
    for (NodeId k = first; k < last; ++k) out.nodes_.push_back(k);
    return out;
}

bool SupportSet::contains(NodeId k) const noexcept {
    return std::binary_search(nodes_.begin(), nodes_.end(), k);
}

void SupportSet::insert(NodeId k) {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), k);
    if (it == nodes_.end() || *it != k) nodes_.insert(it, k);
}

void SupportSet::erase(NodeId k) {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), k);
    if (it != nodes_.end() && *it == k) nodes_.erase(it);
}

SupportSet SupportSet::with(NodeId k) const {
    SupportSet out = *this;
    out.insert(k);
    return out;
}

SupportSet SupportSet::without(NodeId k) const {
    SupportSet out = *this;
    out.erase(k);
    return out;
}

SupportSet SupportSet::unite(const SupportSet& other) const {
    SupportSet out;
    std::set_union(nodes_.begin(), nodes_.end(), other.nodes_.begin(), other.nodes_.end(),
                   std::back_inserter(out.nodes_));
    return out;
}

SupportSet SupportSet::intersect(const SupportSet& other) const {
    SupportSet out;
    std::set_intersection(nodes_.begin(), nodes_.end(), other.nodes_.begin(),
                          other.nodes_.end(), std::back_inserter(out.nodes_));
    return out;
}

SupportSet SupportSet::minus(const SupportSet& other) const {
    SupportSet out;
    std::set_difference(nodes_.begin(), nodes_.end(), other.nodes_.begin(), other.nodes_.end(),
                        std::back_inserter(out.nodes_));
    return out;
}

void SupportSet::validate(std::size_t n) const {
    if (!nodes_.empty() && (nodes_.front() < 0 || static_cast<std::size_t>(nodes_.back()) >= n)) {
        throw std::out_of_range("support " + to_string() + " has node outside [0, " +
                                std::to_string(n) + ")");
    }
}

std::string SupportSet::to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(nodes_[i]);
    }
    return s + "}";
}

}  // namespace gsr
