#include <stdexcept>

#include "graphsr/bench.hpp"

namespace gsr {

double f_score(const SupportSet& truth, const SupportSet& estimate) {
    const auto tp = static_cast<double>(truth.intersect(estimate).size());
    const auto fp = static_cast<double>(estimate.minus(truth).size());
    const auto fn = static_cast<double>(truth.minus(estimate).size());
    const double denom = 2.0 * tp + fn + fp;
    if (denom == 0.0) return 1.0;
    return 2.0 * tp / denom;
}

double mse(const Eigen::VectorXd& x_true, const Eigen::VectorXd& x_hat) {
    if (x_true.size() != x_hat.size()) throw std::invalid_argument("mse: length mismatch");
    const double true_norm = x_true.norm();
    if (!(true_norm > 0.0)) throw std::invalid_argument("mse: true signal is zero");
    const double hat_norm = x_hat.norm();
    if (!(hat_norm > 0.0)) return 1.0;
    return (x_true / true_norm - x_hat / hat_norm).squaredNorm();
}

}  // namespace gsr
