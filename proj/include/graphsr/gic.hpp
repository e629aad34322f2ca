#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "graphsr/support_set.hpp"

namespace gsr {

/// H_Omega is not of full column rank within the configured tolerance.
class RankError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cardinality penalty rho(|Omega|) of the information criterion.
struct Penalty {
    std::string name = "aic";
    std::function<double(std::size_t)> fn = [](std::size_t c) { return 2.0 * static_cast<double>(c); };

    static Penalty aic() { return {}; }
    static Penalty linear(double per_element);

    double operator()(std::size_t cardinality) const { return fn(cardinality); }
};

struct GicConfig {
    Penalty penalty = Penalty::aic();
    std::size_t sparsity = 1;
    double sigma_n = 1.0;
    /// Pre-screening threshold on ||P_m y||^2; defaults to sigma_n.
    std::optional<double> screening_zeta;
    double rank_tolerance = 1e-10;

    double zeta() const { return screening_zeta.value_or(sigma_n); }
    double noise_variance() const { return sigma_n * sigma_n; }

    /// Throws std::invalid_argument on rho(0) != 0, a decreasing penalty over
    /// 0..sparsity, non-positive sigma_n or a zero sparsity budget.
    void validate() const;
};

/// Incremental thin QR of a growing column block, used for projections.
///
/// Columns are orthogonalized by classical Gram-Schmidt applied twice, which
/// keeps Q orthonormal to working precision. Holds Q^T y so that the
/// projected energy ||P y||^2 = ||Q^T y||^2 is available after each push.
class Projector {
public:
    Projector(const Eigen::VectorXd& y, Eigen::Index capacity);

    /// Returns false (and leaves the state unchanged) when the column lies in
    /// the current span to within rank_tolerance * ||column||.
    bool push(const Eigen::Ref<const Eigen::VectorXd>& column, double rank_tolerance);
    void pop();
    void clear() { size_ = 0; }

    Eigen::Index size() const noexcept { return size_; }
    double energy() const noexcept { return size_ == 0 ? 0.0 : prefix_energy_[size_ - 1]; }
    /// Least-squares coefficients R^{-1} Q^T y for the pushed columns.
    Eigen::VectorXd coefficients() const;
    /// y - P y.
    Eigen::VectorXd residual() const;

private:
    const Eigen::VectorXd* y_;
    Eigen::MatrixXd q_;
    Eigen::MatrixXd r_;
    Eigen::VectorXd qty_;
    std::vector<double> prefix_energy_;
    Eigen::Index size_ = 0;
};

/// Projection energies and GIC values for one (H, y) pair.
///
/// GIC(Omega) = ||P_Omega y||^2 / sigma_n^2 - rho(|Omega|): energies are
/// measured in units of the noise variance, so with sigma_n = 1 the value is
/// the plain ||P y||^2 - rho. The empty support has energy 0 and GIC 0.
///
/// Every distinct support whose energy is computed increments the evaluation
/// counter once; with the cache enabled, repeated queries are free.
/// Single-writer: give each thread its own evaluator (see fork/absorb).
class GicEvaluator {
public:
    GicEvaluator(const Eigen::MatrixXd& h, Eigen::VectorXd y, GicConfig cfg, bool use_cache = true);

    const GicConfig& config() const noexcept { return cfg_; }
    const Eigen::MatrixXd& h() const noexcept { return *h_; }
    const Eigen::VectorXd& y() const noexcept { return y_; }
    std::size_t node_count() const noexcept { return static_cast<std::size_t>(h_->cols()); }

    double projected_energy(const SupportSet& omega);
    double gic(const SupportSet& omega);
    double gic_from_energy(double energy, std::size_t cardinality) const;

    /// x_Omega = argmin ||y - H_Omega x||; not counted as an evaluation.
    Eigen::VectorXd ls_recover(const SupportSet& omega) const;

    /// ||P_m y||^2 for every node m (zero for a zero column).
    const std::vector<double>& single_energies();

    using SubsetVisitor = std::function<void(std::span<const NodeId>, double energy)>;

    /// Depth-first enumeration of every nonempty subset of `candidates` with
    /// at most max_card elements, in lexicographic order, extending one QR
    /// factorization along the way. Rank-deficient subsets (and their
    /// supersets) are skipped and tallied in rank_skips().
    void for_each_subset(const SupportSet& candidates, std::size_t max_card, const SubsetVisitor& visit);

    std::size_t evaluations() const noexcept { return evaluations_; }
    std::size_t rank_skips() const noexcept { return rank_skips_; }
    bool caching() const noexcept { return use_cache_; }

    /// Evaluator on the same data with a copy of the cache and zeroed counters.
    GicEvaluator fork() const;
    /// Merges a forked evaluator's counters and cache entries.
    void absorb(const GicEvaluator& child);

private:
    struct Key {
        std::uint64_t lo = 0;
        std::uint64_t hi = 0;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            return std::hash<std::uint64_t>{}(k.lo * 0x9e3779b97f4a7c15ULL ^ (k.hi + 0x632be59bd9b4e019ULL));
        }
    };
    static std::optional<Key> make_key(std::span<const NodeId> nodes);

    std::optional<double> lookup(std::span<const NodeId> nodes) const;
    void remember(std::span<const NodeId> nodes, double energy);

    static constexpr std::size_t kCacheCapacity = 4'000'000;

    const Eigen::MatrixXd* h_;
    Eigen::VectorXd y_;
    GicConfig cfg_;
    bool use_cache_;
    std::unordered_map<Key, double, KeyHash> cache_;
    std::vector<double> singles_;
    std::size_t evaluations_ = 0;
    std::size_t rank_skips_ = 0;
};

/// GLRT pre-screening: {m : ||P_m y||^2 > zeta}.
SupportSet glrt_screen(GicEvaluator& ev);

/// Nodes by single-node projected energy, descending; ties by node id.
std::vector<NodeId> node_ordering(GicEvaluator& ev);

}  // namespace gsr
