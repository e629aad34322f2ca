#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphsr/support_set.hpp"

namespace gsr {

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    double w = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
    NodeId node = 0;
    double weight = 1.0;
};

/// Undirected weighted graph without self-loops or parallel edges.
///
/// Edges are stored canonically (u < v, sorted by (u, v)); per-node neighbor
/// lists are sorted by neighbor id. Connectedness is not required.
class Graph {
public:
    Graph() = default;

    /// Validates and canonicalizes; throws GraphError naming the offending edge.
    static Graph build(std::size_t n, std::vector<Edge> edges);

    std::size_t node_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::span<const Neighbor> neighbors(NodeId k) const { return adjacency_.at(k); }

    std::size_t degree(NodeId k) const { return adjacency_.at(k).size(); }
    double weighted_degree(NodeId k) const;
    std::size_t max_degree() const noexcept;
    std::size_t min_degree() const noexcept;
    bool has_edge(NodeId u, NodeId v) const;

    friend bool operator==(const Graph& a, const Graph& b) { return a.edges_ == b.edges_ && a.node_count() == b.node_count(); }

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

inline Graph build_graph(std::size_t n, std::vector<Edge> edges) {
    return Graph::build(n, std::move(edges));
}

/// All-pairs hop counts. Edge weights are ignored: distance is the number of
/// edges on a shortest path.
class GeodesicTable {
public:
    static constexpr int kUnreachable = std::numeric_limits<int>::max();

    GeodesicTable() = default;
    GeodesicTable(std::size_t n, std::vector<int> dist) : n_(n), dist_(std::move(dist)) {}

    std::size_t node_count() const noexcept { return n_; }
    int at(NodeId k, NodeId m) const { return dist_[static_cast<std::size_t>(k) * n_ + m]; }
    bool reachable(NodeId k, NodeId m) const { return at(k, m) != kUnreachable; }

private:
    std::size_t n_ = 0;
    std::vector<int> dist_;
};

GeodesicTable geodesic_table(const Graph& g);

/// Closed neighborhood {m : exists k in seeds with dist(k, m) <= radius}.
SupportSet neighborhood(const Graph& g, const SupportSet& seeds, int radius);
SupportSet neighborhood(const GeodesicTable& dist, const SupportSet& seeds, int radius);

/// s * sum_{j=0}^{2 psi} d_max^j. Saturates at UINT64_MAX.
std::uint64_t neighborhood_cardinality_bound(std::size_t sparsity, std::size_t d_max, int psi);

enum class GsoKind { LaplacianUnweighted, LaplacianWeighted, Adjacency, Custom };

std::string to_string(GsoKind kind);
GsoKind gso_kind_from_string(const std::string& name);

struct Gso {
    Eigen::MatrixXd matrix;
    GsoKind kind = GsoKind::Custom;
};

Gso laplacian(const Graph& g, bool weighted);
Gso adjacency_gso(const Graph& g);

struct EigenEstimate {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Largest (algebraic) eigenvalue of a symmetric matrix by shifted power
/// iteration. Stops when successive Rayleigh quotients agree to rel_tol.
EigenEstimate largest_eigenvalue(const Eigen::MatrixXd& s, double rel_tol = 1e-10,
                                 int max_iterations = 10000);

/// Rescales so the largest eigenvalue equals target. A zero matrix is
/// returned unchanged.
Gso normalize_gso_to_max_eig(const Gso& s, double target);

}  // namespace gsr
