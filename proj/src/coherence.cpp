#include "graphsr/coherence.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gsr {

std::size_t shared_neighbors(const Graph& g, NodeId k, NodeId m) {
    const auto a = g.neighbors(k);
    const auto b = g.neighbors(m);
    std::size_t i = 0, j = 0, count = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].node < b[j].node) {
            ++i;
        } else if (b[j].node < a[i].node) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

namespace {

// Entry (i, k) of the unweighted Laplacian.
double lap_entry(const Graph& g, NodeId i, NodeId k) {
    if (i == k) return static_cast<double>(g.degree(k));
    return g.has_edge(i, k) ? -1.0 : 0.0;
}

// Dot product of two sparse Laplacian columns over the union of their supports.
double direct_dot(const Graph& g, NodeId k, NodeId m) {
    double total = lap_entry(g, k, k) * lap_entry(g, k, m);
    if (m != k) total += lap_entry(g, m, k) * lap_entry(g, m, m);
    for (const Neighbor& nb : g.neighbors(k)) {
        if (nb.node == m) continue;
        total += lap_entry(g, nb.node, k) * lap_entry(g, nb.node, m);
    }
    return total;
}

double case_formula(const Graph& g, NodeId k, NodeId m) {
    const auto dk = static_cast<double>(g.degree(k));
    if (k == m) return dk + dk * dk;
    const auto dm = static_cast<double>(g.degree(m));
    const auto shared = static_cast<double>(shared_neighbors(g, k, m));
    if (g.has_edge(k, m)) return -dk - dm + shared;
    // At distance two the shared count is positive; beyond it is zero.
    return shared;
}

}  // namespace

double laplacian_inner_product(const Graph& g, NodeId k, NodeId m) {
    const double formula = case_formula(g, k, m);
    const double direct = direct_dot(g, k, m);
    if (std::abs(formula - direct) > 1e-12) {
        throw std::logic_error("Laplacian inner product mismatch at (" + std::to_string(k) + ", " +
                               std::to_string(m) + ")");
    }
    return formula;
}

CoherenceReport mutual_coherence(const Eigen::MatrixXd& a) {
    const Eigen::Index n = a.cols();
    const Eigen::VectorXd norms = a.colwise().norm().transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(norms(i) > 0.0)) throw std::invalid_argument("column " + std::to_string(i) + " is zero");
    }
    CoherenceReport report;
    const Eigen::MatrixXd gram = a.transpose() * a;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double value = std::abs(gram(i, j)) / (norms(i) * norms(j));
            if (value > report.mu) {
                report.mu = value;
                report.argmax_pair = {static_cast<NodeId>(i), static_cast<NodeId>(j)};
            }
        }
    }
    return report;
}

CoherenceReport laplacian_coherence(const Graph& g) {
    CoherenceReport report = mutual_coherence(laplacian(g, false).matrix);
    report.d_min = g.min_degree();
    report.d_max = g.max_degree();
    const auto dmin = static_cast<double>(report.d_min);
    const auto dmax = static_cast<double>(report.d_max);
    report.upper_bound = 2.0 * dmax / (dmin + dmin * dmin);
    report.lower_bound = dmin / (dmax + dmax * dmax);
    return report;
}

MonotonicityCheck projection_monotonicity_check(const Graph& g, const GeodesicTable& dist, NodeId m, NodeId k,
                                                NodeId j) {
    if (!(dist.at(k, m) < dist.at(j, m))) {
        throw std::invalid_argument("monotonicity check needs dist(k, m) < dist(j, m)");
    }
    const double self = laplacian_inner_product(g, m, m);
    if (!(self > 0.0)) throw std::invalid_argument("probe node has a zero Laplacian column");
    auto energy = [&](NodeId src) {
        const double ip = dist.at(src, m) > 2 ? 0.0 : laplacian_inner_product(g, src, m);
        return ip * ip / self;
    };
    MonotonicityCheck out;
    out.near_energy = energy(k);
    out.far_energy = energy(j);
    out.holds = out.near_energy >= out.far_energy - 1e-12;
    return out;
}

}  // namespace gsr
