#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qmono/measure_value.hpp"
#include "qmono/tensor.hpp"

namespace qmono {

enum class RoofObjective { Negativity, Concurrence };

struct RoofConfig {
    /// Ensemble size m; defaults to rank^2.
    std::optional<int> ensemble_size;
    int restarts = 16;
    int max_iterations = 2000;
    /// Stop when the objective changes by less than this between iterations.
    double tolerance = 1e-8;
    std::uint64_t seed = 0;
    /// Restarts run on this many worker threads; the result does not depend on it.
    int threads = 1;
};

/// A pure-state decomposition of a density operator, parametrized by an
/// m x r isometry acting on its eigen-ensemble:
///   |psi~_j> = sum_k V_jk sqrt(lambda_k) |e_k>,  p_j = <psi~_j|psi~_j>.
class DecompositionPoint {
public:
    /// `weighted_eigenvectors` is D x r with columns sqrt(lambda_k)|e_k>.
    DecompositionPoint(Matrix weighted_eigenvectors, Matrix isometry);

    int ensemble_size() const noexcept { return static_cast<int>(isometry_.rows()); }
    const Matrix& isometry() const noexcept { return isometry_; }

    /// Rows are the unnormalized members psi~_j (as row vectors, m x D).
    Matrix unnormalized_members() const;
    std::vector<double> probabilities() const;
    /// sum_j |psi~_j><psi~_j|
    Matrix reconstruct() const;

private:
    Matrix weighted_;
    Matrix isometry_;
};

struct RoofResult {
    MeasureValue value;
    int rank = 0;
    int ensemble_size = 0;
    /// Objective reached by each restart, in restart order.
    std::vector<double> restart_values;
    /// Best value after restarts 0..k; non-increasing.
    std::vector<double> best_so_far;
    int best_restart = 0;
    Matrix best_isometry;
};

/// p * measure(psi) for the unnormalized member psi~ = sqrt(p) psi, reshaped
/// to its bipartite matrix.
double weighted_pure_measure(const Matrix& member, RoofObjective objective);

/// Best-found average measure over pure-state decompositions of `rho`: an
/// upper bound on the convex roof. The interval lower end is
/// max(lower_hint, negativity(rho) for the negativity objective, 0).
RoofResult roof_upper_bound(const DensityOperator& rho, const Partition& p, RoofObjective objective,
                            const RoofConfig& cfg, std::optional<double> lower_hint = std::nullopt);

} // namespace qmono
