#pragma once

#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "graphsr/graph.hpp"

namespace gsr {

struct CoherenceReport {
    double mu = 0.0;
    std::pair<NodeId, NodeId> argmax_pair{0, 0};
    // Filled for unweighted Laplacians only.
    std::optional<double> upper_bound;
    std::optional<double> lower_bound;
    std::size_t d_min = 0;
    std::size_t d_max = 0;
};

/// L_k^T L_m for the unweighted Laplacian from the degree / shared-neighbor
/// case formula. Throws std::logic_error if it disagrees with the direct
/// column dot product by more than 1e-12.
double laplacian_inner_product(const Graph& g, NodeId k, NodeId m);

/// |N_1(k) cap N_1(m)| counted over open neighborhoods.
std::size_t shared_neighbors(const Graph& g, NodeId k, NodeId m);

/// max_{i != j} |a_i^T a_j| / (||a_i|| ||a_j||) by full pair scan.
/// Throws std::invalid_argument on a zero column.
CoherenceReport mutual_coherence(const Eigen::MatrixXd& a);

/// Coherence of the unweighted Laplacian with the degree bounds
/// d_min / (d_max + d_max^2) <= mu <= 2 d_max / (d_min + d_min^2).
CoherenceReport laplacian_coherence(const Graph& g);

struct MonotonicityCheck {
    bool holds = false;
    double near_energy = 0.0;  // ||P_{L_m} L_k||^2
    double far_energy = 0.0;   // ||P_{L_m} L_j||^2
};

/// Compares the projections of L_k and L_j onto col(L_m), with k the closer
/// source. Throws std::invalid_argument unless dist(k, m) < dist(j, m).
MonotonicityCheck projection_monotonicity_check(const Graph& g, const GeodesicTable& dist, NodeId m, NodeId k,
                                                NodeId j);

}  // namespace gsr
