#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace gsr {

using NodeId = int;

/// Ordered set of node indices (the support of a sparse graph signal).
///
/// Storage is a strictly increasing vector, so iteration order is ascending
/// node id and comparison is lexicographic over that order.
class SupportSet {
public:
    SupportSet() = default;
    SupportSet(std::initializer_list<NodeId> nodes);
    /// Accepts any order; duplicates are collapsed.
    explicit SupportSet(std::vector<NodeId> nodes);

    static SupportSet range(NodeId first, NodeId last);  // [first, last)

    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    bool contains(NodeId k) const noexcept;

    NodeId operator[](std::size_t i) const { return nodes_[i]; }
    auto begin() const noexcept { return nodes_.begin(); }
    auto end() const noexcept { return nodes_.end(); }
    std::span<const NodeId> view() const noexcept { return nodes_; }
    const std::vector<NodeId>& nodes() const noexcept { return nodes_; }

    void insert(NodeId k);
    void erase(NodeId k);
    SupportSet with(NodeId k) const;
    SupportSet without(NodeId k) const;

    SupportSet unite(const SupportSet& other) const;
    SupportSet intersect(const SupportSet& other) const;
    SupportSet minus(const SupportSet& other) const;

    /// Throws std::out_of_range if any index is outside [0, n).
    void validate(std::size_t n) const;

    std::string to_string() const;

    friend bool operator==(const SupportSet&, const SupportSet&) = default;
    friend auto operator<=>(const SupportSet& a, const SupportSet& b) {
        return a.nodes_ <=> b.nodes_;
    }

private:
    std::vector<NodeId> nodes_;
};

}  // namespace gsr
