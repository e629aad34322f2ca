#include "graphsr/filter.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gsr {

GraphFilter build_filter(const Gso& s, std::span<const double> coeffs, const GeodesicTable& dist) {
    const Eigen::Index n = s.matrix.rows();
    if (s.matrix.cols() != n) throw FilterError("GSO must be square");
    if (static_cast<std::size_t>(n) != dist.node_count()) {
        throw FilterError("GSO size does not match the geodesic table");
    }
    if (coeffs.size() < 2) throw FilterError("filter degree must be >= 1 (need at least two coefficients)");
    const int psi = static_cast<int>(coeffs.size()) - 1;
    if (psi >= n) {
        throw FilterError("filter degree " + std::to_string(psi) + " must be below the node count " +
                          std::to_string(n));
    }

    Eigen::MatrixXd h = coeffs.back() * Eigen::MatrixXd::Identity(n, n);
    for (int i = psi - 1; i >= 0; --i) {
        h = s.matrix * h;
        h.diagonal().array() += coeffs[static_cast<std::size_t>(i)];
    }

    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index m = 0; m < n; ++m) {
            if (dist.at(static_cast<NodeId>(k), static_cast<NodeId>(m)) > psi && std::abs(h(k, m)) > 1e-10) {
                throw FilterError("filter entry (" + std::to_string(k) + ", " + std::to_string(m) +
                                  ") is nonzero beyond psi hops; S is not a valid GSO");
            }
        }
    }
    return GraphFilter{std::move(h), psi, std::vector<double>(coeffs.begin(), coeffs.end()), s};
}

std::vector<double> geometric_coefficients(int psi, double rate) {
    if (psi < 1) throw FilterError("filter degree must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(psi) + 1);
    for (int i = 0; i <= psi; ++i) out[static_cast<std::size_t>(i)] = std::pow(rate, psi - i);
    return out;
}

double filter_column_inner_product(const GraphFilter& f, NodeId k, NodeId m) {
    return f.h.col(k).dot(f.h.col(m));
}

ValueDistribution value_distribution_from_string(const std::string& name) {
    if (name == "std-normal") return ValueDistribution::StdNormal;
    if (name == "uniform-split") return ValueDistribution::UniformSplit;
    throw std::invalid_argument("unknown value distribution '" + name + "'");
}

std::string to_string(ValueDistribution d) {
    return d == ValueDistribution::StdNormal ? "std-normal" : "uniform-split";
}

double Instance::realized_snr() const {
    const double energy = (filter->h * x).squaredNorm();
    return energy / (static_cast<double>(x.size()) * sigma_n * sigma_n);
}

Instance simulate_instance(std::shared_ptr<const GraphFilter> f, const SupportSet& support,
                           const SimulationParams& params, std::uint64_t seed) {
    const auto n = static_cast<Eigen::Index>(f->node_count());
    if (support.empty()) throw FilterError("signal support must be nonempty");
    support.validate(static_cast<std::size_t>(n));
    if (!(params.sigma_n > 0.0)) throw FilterError("sigma_n must be positive");
    if (!std::isfinite(params.snr_db)) throw FilterError("SNR must be finite");

    std::mt19937_64 rng(seed);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> magnitude(0.5, 1.0);
    std::bernoulli_distribution coin(0.5);
    for (NodeId k : support) {
        if (params.values == ValueDistribution::StdNormal) {
            x(k) = normal(rng);
        } else {
            x(k) = coin(rng) ? magnitude(rng) : -magnitude(rng);
        }
    }

    const double energy = (f->h * x).squaredNorm();
    if (!(energy > 0.0)) throw FilterError("H x vanishes for support " + support.to_string());
    const double snr_linear = std::pow(10.0, params.snr_db / 10.0);
    const double target = snr_linear * static_cast<double>(n) * params.sigma_n * params.sigma_n;
    x *= std::sqrt(target / energy);

    Eigen::VectorXd y = f->h * x;
    if (!params.noiseless) {
        std::normal_distribution<double> noise(0.0, params.sigma_n);
        for (Eigen::Index i = 0; i < n; ++i) y(i) += noise(rng);
    }
    return Instance{std::move(f), std::move(x), support, params.sigma_n, params.snr_db, std::move(y)};
}

SupportScenario support_scenario_from_string(const std::string& name) {
    if (name == "localized") return SupportScenario::Localized;
    if (name == "mixed") return SupportScenario::Mixed;
    throw std::invalid_argument("unknown support scenario '" + name + "'");
}

std::string to_string(SupportScenario s) {
    return s == SupportScenario::Localized ? "localized" : "mixed";
}

namespace {

// Adds `count` distinct random neighbors of `seed` that are not yet in `held`.
bool grow_group(const Graph& g, NodeId seed, std::size_t count, std::vector<NodeId>& held,
                std::mt19937_64& rng) {
    std::vector<NodeId> options;
    for (const Neighbor& nb : g.neighbors(seed)) {
        if (std::find(held.begin(), held.end(), nb.node) == held.end()) options.push_back(nb.node);
    }
    if (options.size() < count) return false;
    std::shuffle(options.begin(), options.end(), rng);
    held.insert(held.end(), options.begin(), options.begin() + static_cast<std::ptrdiff_t>(count));
    return true;
}

}  // namespace

SupportSet draw_support(const Graph& g, SupportScenario scenario, std::size_t s, std::uint64_t seed,
                        std::span<const NodeId> seed_pool) {
    if (s < 1) throw FilterError("sparsity must be >= 1");
    if (scenario == SupportScenario::Mixed && s < 2) throw FilterError("mixed support needs s >= 2");
    std::vector<NodeId> pool(seed_pool.begin(), seed_pool.end());
    if (pool.empty()) {
        for (std::size_t k = 0; k < g.node_count(); ++k) pool.push_back(static_cast<NodeId>(k));
    }
    if (pool.empty()) throw FilterError("cannot draw a support on an empty graph");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    constexpr int kMaxAttempts = 1000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<NodeId> held;
        if (scenario == SupportScenario::Localized) {
            const NodeId seed_node = pool[pick(rng)];
            held.push_back(seed_node);
            if (s > 1 && !grow_group(g, seed_node, s - 1, held, rng)) continue;
            return SupportSet(std::move(held));
        }
        const NodeId first = pool[pick(rng)];
        const NodeId second = pool[pick(rng)];
        if (first == second) continue;
        const std::size_t first_size = (s + 1) / 2;
        const std::size_t second_size = s / 2;
        held.push_back(first);
        held.push_back(second);
        if (!grow_group(g, first, first_size - 1, held, rng)) continue;
        if (!grow_group(g, second, second_size - 1, held, rng)) continue;
        return SupportSet(std::move(held));
    }
    throw FilterError("could not draw a " + to_string(scenario) + " support of size " + std::to_string(s) +
                      " after " + std::to_string(kMaxAttempts) + " attempts");
}

}  // namespace gsr
