#include "graphsr/generators.hpp"

#include <random>
#include <stdexcept>
#include <vector>

namespace gsr {

namespace {

void bernoulli_block(std::vector<Edge>& edges, NodeId first, std::size_t count, double p,
                     std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            if (unit(rng) < p) {
                edges.push_back({first + static_cast<NodeId>(i), first + static_cast<NodeId>(j), 1.0});
            }
        }
    }
}

}  // namespace

Graph generate_sbm(const SbmParams& params, std::uint64_t seed) {
    if (params.clusters < 1) throw std::invalid_argument("SBM needs at least one cluster");
    if (params.per_cluster < params.link_nodes) {
        throw std::invalid_argument("SBM cluster smaller than its link-node count");
    }
    if (params.p_intra < 0.0 || params.p_intra > 1.0) {
        throw std::invalid_argument("SBM intra-cluster probability outside [0, 1]");
    }
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    const auto n_per = static_cast<NodeId>(params.per_cluster);
    for (std::size_t c = 0; c < params.clusters; ++c) {
        bernoulli_block(edges, static_cast<NodeId>(c) * n_per, params.per_cluster, params.p_intra, rng);
    }
    for (std::size_t c = 0; c + 1 < params.clusters; ++c) {
        for (std::size_t l = 0; l < params.link_nodes; ++l) {
            const NodeId a = static_cast<NodeId>(c) * n_per + static_cast<NodeId>(l);
            edges.push_back({a, a + n_per, 1.0});
        }
    }
    return Graph::build(params.clusters * params.per_cluster, std::move(edges));
}

NamedGraph named_graph_from_string(const std::string& kind) {
    if (kind == "cycle") return NamedGraph::Cycle;
    if (kind == "path") return NamedGraph::Path;
    if (kind == "grid2d") return NamedGraph::Grid2d;
    if (kind == "erdos_renyi" || kind == "erdos-renyi") return NamedGraph::ErdosRenyi;
    throw std::invalid_argument("unknown graph kind '" + kind + "'");
}

Graph generate_named(NamedGraph kind, const NamedGraphParams& params, std::uint64_t seed) {
    std::vector<Edge> edges;
    switch (kind) {
        case NamedGraph::Cycle: {
            if (params.n < 3) throw std::invalid_argument("cycle needs n >= 3");
            for (std::size_t k = 0; k < params.n; ++k) {
                edges.push_back({static_cast<NodeId>(k), static_cast<NodeId>((k + 1) % params.n), 1.0});
            }
            return Graph::build(params.n, std::move(edges));
        }
        case NamedGraph::Path: {
            if (params.n < 1) throw std::invalid_argument("path needs n >= 1");
            for (std::size_t k = 0; k + 1 < params.n; ++k) {
                edges.push_back({static_cast<NodeId>(k), static_cast<NodeId>(k + 1), 1.0});
            }
            return Graph::build(params.n, std::move(edges));
        }
        case NamedGraph::Grid2d: {
            if (params.rows < 1 || params.cols < 1) throw std::invalid_argument("grid2d needs rows, cols >= 1");
            auto id = [&](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * params.cols + c); };
            for (std::size_t r = 0; r < params.rows; ++r) {
                for (std::size_t c = 0; c < params.cols; ++c) {
                    if (c + 1 < params.cols) edges.push_back({id(r, c), id(r, c + 1), 1.0});
                    if (r + 1 < params.rows) edges.push_back({id(r, c), id(r + 1, c), 1.0});
                }
            }
            return Graph::build(params.rows * params.cols, std::move(edges));
        }
        case NamedGraph::ErdosRenyi: {
            if (params.n < 1) throw std::invalid_argument("erdos_renyi needs n >= 1");
            if (params.p < 0.0 || params.p > 1.0) throw std::invalid_argument("erdos_renyi p outside [0, 1]");
            std::mt19937_64 rng(seed);
            bernoulli_block(edges, 0, params.n, params.p, rng);
            return Graph::build(params.n, std::move(edges));
        }
    }
    throw std::invalid_argument("unknown graph kind");
}

}  // namespace gsr
