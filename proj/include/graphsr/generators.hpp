#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "graphsr/graph.hpp"

namespace gsr {

struct SbmParams {
    std::size_t clusters = 2;
    std::size_t per_cluster = 70;
    double p_intra = 6.0 / 70.0;
    std::size_t link_nodes = 2;
};

/// Stochastic block model: Bernoulli(p_intra) edges inside each cluster and,
/// for every consecutive cluster pair (c, c+1), `link_nodes` bridge edges
/// joining the l-th lowest-indexed node of c to the l-th of c+1. Nodes of
/// cluster c occupy [c*N, (c+1)*N). All weights are 1.
Graph generate_sbm(const SbmParams& params, std::uint64_t seed);

enum class NamedGraph { Cycle, Path, Grid2d, ErdosRenyi };

NamedGraph named_graph_from_string(const std::string& kind);

struct NamedGraphParams {
    std::size_t n = 0;     // cycle, path, erdos_renyi
    std::size_t rows = 0;  // grid2d
    std::size_t cols = 0;  // grid2d
    double p = 0.0;        // erdos_renyi
};

Graph generate_named(NamedGraph kind, const NamedGraphParams& params, std::uint64_t seed = 0);

}  // namespace gsr
