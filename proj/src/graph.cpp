#include "graphsr/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <set>
#include <utility>

namespace gsr {

namespace {

std::string describe(const Edge& e) {
    return "(" + std::to_string(e.u) + ", " + std::to_string(e.v) + ", " + std::to_string(e.w) + ")";
}

}  // namespace

Graph Graph::build(std::size_t n, std::vector<Edge> edges) {
    Graph g;
    g.adjacency_.resize(n);
    std::set<std::pair<NodeId, NodeId>> seen;
    for (Edge& e : edges) {
        if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
            static_cast<std::size_t>(e.v) >= n) {
            throw GraphError("edge " + describe(e) + " has node index outside [0, " +
                             std::to_string(n) + ")");
        }
        if (e.u == e.v) throw GraphError("edge " + describe(e) + " is a self-loop");
        if (!(e.w > 0.0) || !std::isfinite(e.w)) {
            throw GraphError("edge " + describe(e) + " has non-positive weight");
        }
        if (e.u > e.v) std::swap(e.u, e.v);
        if (!seen.emplace(e.u, e.v).second) {
            throw GraphError("edge " + describe(e) + " is a duplicate");
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    for (const Edge& e : edges) {
        g.adjacency_[e.u].push_back({e.v, e.w});
        g.adjacency_[e.v].push_back({e.u, e.w});
    }
    for (auto& list : g.adjacency_) {
        std::sort(list.begin(), list.end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    }
    g.edges_ = std::move(edges);
    return g;
}

double Graph::weighted_degree(NodeId k) const {
    double total = 0.0;
    for (const Neighbor& nb : adjacency_.at(k)) total += nb.weight;
    return total;
}

std::size_t Graph::max_degree() const noexcept {
    std::size_t d = 0;
    for (const auto& list : adjacency_) d = std::max(d, list.size());
    return d;
}

std::size_t Graph::min_degree() const noexcept {
    if (adjacency_.empty()) return 0;
    std::size_t d = adjacency_.front().size();
    for (const auto& list : adjacency_) d = std::min(d, list.size());
    return d;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    const auto& list = adjacency_.at(u);
    return std::binary_search(list.begin(), list.end(), Neighbor{v, 0.0},
                              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
}

GeodesicTable geodesic_table(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<int> dist(n * n, GeodesicTable::kUnreachable);
    std::vector<NodeId> frontier;
    frontier.reserve(n);
    for (std::size_t src = 0; src < n; ++src) {
        int* row = dist.data() + src * n;
        row[src] = 0;
        frontier.assign(1, static_cast<NodeId>(src));
        for (std::size_t head = 0; head < frontier.size(); ++head) {
            const NodeId k = frontier[head];
            for (const Neighbor& nb : g.neighbors(k)) {
                if (row[nb.node] == GeodesicTable::kUnreachable) {
                    row[nb.node] = row[k] + 1;
                    frontier.push_back(nb.node);
                }
            }
        }
    }
    return GeodesicTable(n, std::move(dist));
}

SupportSet neighborhood(const Graph& g, const SupportSet& seeds, int radius) {
    if (radius < 0) throw std::invalid_argument("neighborhood radius must be >= 0");
    const std::size_t n = g.node_count();
    seeds.validate(n);
    std::vector<int> hops(n, -1);
    std::queue<NodeId> q;
    for (NodeId k : seeds) {
        hops[k] = 0;
        q.push(k);
    }
    std::vector<NodeId> out(seeds.begin(), seeds.end());
    while (!q.empty()) {
        const NodeId k = q.front();
        q.pop();
        if (hops[k] == radius) continue;
        for (const Neighbor& nb : g.neighbors(k)) {
            if (hops[nb.node] < 0) {
                hops[nb.node] = hops[k] + 1;
                out.push_back(nb.node);
                q.push(nb.node);
            }
        }
    }
    return SupportSet(std::move(out));
}

SupportSet neighborhood(const GeodesicTable& dist, const SupportSet& seeds, int radius) {
    if (radius < 0) throw std::invalid_argument("neighborhood radius must be >= 0");
    std::vector<NodeId> out;
    const auto n = static_cast<NodeId>(dist.node_count());
    for (NodeId m = 0; m < n; ++m) {
        for (NodeId k : seeds) {
            if (dist.at(k, m) <= radius) {
                out.push_back(m);
                break;
            }
        }
    }
    return SupportSet(std::move(out));
}

std::uint64_t neighborhood_cardinality_bound(std::size_t sparsity, std::size_t d_max, int psi) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 0;
    std::uint64_t power = 1;
    for (int j = 0; j <= 2 * psi; ++j) {
        if (total > kMax - power) return kMax;
        total += power;
        if (j < 2 * psi) {
            if (d_max != 0 && power > kMax / d_max) {
                power = kMax;
            } else {
                power *= d_max;
            }
        }
    }
    if (sparsity != 0 && total > kMax / sparsity) return kMax;
    return total * sparsity;
}

std::string to_string(GsoKind kind) {
    switch (kind) {
        case GsoKind::LaplacianUnweighted: return "laplacian";
        case GsoKind::LaplacianWeighted: return "laplacian-weighted";
        case GsoKind::Adjacency: return "adjacency";
        case GsoKind::Custom: return "custom";
    }
    return "custom";
}

GsoKind gso_kind_from_string(const std::string& name) {
    if (name == "laplacian" || name == "laplacian-unweighted") return GsoKind::LaplacianUnweighted;
    if (name == "laplacian-weighted") return GsoKind::LaplacianWeighted;
    if (name == "adjacency") return GsoKind::Adjacency;
    throw std::invalid_argument("unknown GSO kind '" + name + "'");
}

Gso laplacian(const Graph& g, bool weighted) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Gso out{Eigen::MatrixXd::Zero(n, n),
            weighted ? GsoKind::LaplacianWeighted : GsoKind::LaplacianUnweighted};
    for (const Edge& e : g.edges()) {
        const double w = weighted ? e.w : 1.0;
        out.matrix(e.u, e.v) = -w;
        out.matrix(e.v, e.u) = -w;
        out.matrix(e.u, e.u) += w;
        out.matrix(e.v, e.v) += w;
    }
    return out;
}

Gso adjacency_gso(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Gso out{Eigen::MatrixXd::Zero(n, n), GsoKind::Adjacency};
    for (const Edge& e : g.edges()) {
        out.matrix(e.u, e.v) = e.w;
        out.matrix(e.v, e.u) = e.w;
    }
    return out;
}

EigenEstimate largest_eigenvalue(const Eigen::MatrixXd& s, double rel_tol, int max_iterations) {
    const Eigen::Index n = s.rows();
    if (n == 0) return {0.0, 0, true};
    // Gershgorin shift makes S + shift*I positive semidefinite, so the
    // dominant eigenvalue of the shifted matrix is the algebraic maximum.
    double shift = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double off = s.row(i).cwiseAbs().sum() - std::abs(s(i, i));
        shift = std::max(shift, off - s(i, i));
    }
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unit(0.5, 1.5);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = unit(rng);
    v.normalize();

    EigenEstimate est;
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (int it = 1; it <= max_iterations; ++it) {
        Eigen::VectorXd w = s * v + shift * v;
        const double norm = w.norm();
        if (norm == 0.0) return {-shift + 0.0, it, true};
        v = w / norm;
        const Eigen::VectorXd sv = s * v;
        const double rayleigh = v.dot(sv);
        est.value = rayleigh;
        est.iterations = it;
        const double scale = std::max(std::abs(rayleigh), 1e-300);
        if (std::abs(rayleigh - previous) <= rel_tol * scale && (sv - rayleigh * v).norm() <= rel_tol * scale) {
            est.converged = true;
            break;
        }
        previous = rayleigh;
    }
    return est;
}

Gso normalize_gso_to_max_eig(const Gso& s, double target) {
    if (!(target > 0.0)) throw std::invalid_argument("normalization target must be positive");
    if (s.matrix.isZero(0.0)) return s;
    const EigenEstimate top = largest_eigenvalue(s.matrix);
    if (!(top.value > 0.0)) {
        throw std::invalid_argument("GSO has no positive eigenvalue to normalize");
    }
    return Gso{s.matrix * (target / top.value), s.kind};
}

}  // namespace gsr
