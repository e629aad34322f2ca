#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphsr/graph.hpp"

namespace gsr {

class FilterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Polynomial graph filter H = sum_i coeffs[i] * S^i of degree psi.
struct GraphFilter {
    Eigen::MatrixXd h;
    int psi = 0;
    std::vector<double> coeffs;
    Gso gso;

    std::size_t node_count() const noexcept { return static_cast<std::size_t>(h.rows()); }
};

/// Builds H by Horner accumulation and checks that H[k][m] vanishes for every
/// pair more than psi hops apart. Requires 1 <= psi <= n - 1.
GraphFilter build_filter(const Gso& s, std::span<const double> coeffs, const GeodesicTable& dist);

/// Decaying-rate coefficients h_i = rate^(psi - i), so h_i = rate * h_{i+1}
/// and h_psi = 1. All ones when rate = 1.
std::vector<double> geometric_coefficients(int psi, double rate);

/// H_k^T H_m. Exactly zero when dist(k, m) > 2 psi.
double filter_column_inner_product(const GraphFilter& f, NodeId k, NodeId m);

enum class ValueDistribution { StdNormal, UniformSplit };

ValueDistribution value_distribution_from_string(const std::string& name);
std::string to_string(ValueDistribution d);

struct SimulationParams {
    ValueDistribution values = ValueDistribution::StdNormal;
    double snr_db = 20.0;
    double sigma_n = 0.01;
    bool noiseless = false;
};

/// One draw of the measurement model y = H x + w.
struct Instance {
    std::shared_ptr<const GraphFilter> filter;
    Eigen::VectorXd x;
    SupportSet support;
    double sigma_n = 0.0;
    double snr_db = 0.0;
    Eigen::VectorXd y;

    /// ||H x||^2 / (n sigma_n^2).
    double realized_snr() const;
};

/// Nonzeros are drawn on `support`, then x is rescaled so that
/// ||H x||^2 = 10^(snr_db/10) * n * sigma_n^2, and i.i.d. N(0, sigma_n^2)
/// noise is added unless `noiseless` is set.
Instance simulate_instance(std::shared_ptr<const GraphFilter> f, const SupportSet& support,
                           const SimulationParams& params, std::uint64_t seed);

enum class SupportScenario { Localized, Mixed };

SupportScenario support_scenario_from_string(const std::string& name);
std::string to_string(SupportScenario s);

/// Localized: one seed plus s-1 distinct random neighbors of it.
/// Mixed: two distinct seeds, the first growing ceil(s/2)-1 random neighbors
/// and the second floor(s/2)-1, until s distinct nodes are held.
/// Seeds come from `seed_pool` (all nodes when empty). Seeds that cannot
/// supply enough neighbors are resampled a bounded number of times.
SupportSet draw_support(const Graph& g, SupportScenario scenario, std::size_t s, std::uint64_t seed,
                        std::span<const NodeId> seed_pool = {});

}  // namespace gsr
