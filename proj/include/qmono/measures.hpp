#pragma once

#include <optional>

#include "qmono/convex_roof.hpp"
#include "qmono/measure_value.hpp"
#include "qmono/tensor.hpp"

namespace qmono {

// Negativity throughout is ||rho^{T_A}|| - 1 (twice the Vidal-Werner value).

MeasureValue concurrence_pure(const PureState& psi, const Partition& p);

/// (sigma_y x sigma_y) rho^* (sigma_y x sigma_y) for a two-qubit state.
Matrix spin_flip(const DensityOperator& rho);

/// Square roots of the eigenvalues of rho * spin_flip(rho), descending.
/// Throws NumericalError when that product has an eigenvalue with real part
/// below -1e-8.
RealVector wootters_roots(const DensityOperator& rho);

MeasureValue wootters_concurrence(const DensityOperator& rho);

/// Tr(rho * spin_flip(rho)).
double tilde_overlap(const DensityOperator& rho);

MeasureValue negativity(const DensityOperator& rho, const Partition& p);
MeasureValue negativity(const PureState& psi, const Partition& p);

MeasureValue negativity_pure_schmidt(const PureState& psi, const Partition& p);
MeasureValue concurrence_pure_schmidt(const PureState& psi, const Partition& p);

/// Convex-roof extended negativity. Pure input: its negativity. Two-qubit
/// mixed input: the Wootters concurrence. Anything else: optimizer upper bound.
MeasureValue cren(const PureState& psi, const Partition& p);
MeasureValue cren(const DensityOperator& rho, const Partition& p, const RoofConfig& cfg,
                  std::optional<double> lower_hint = std::nullopt);

/// Mixed-state concurrence on a register: Wootters for two qubits, the
/// pure-state formula for rank-1 input, otherwise an optimizer upper bound.
MeasureValue concurrence(const DensityOperator& rho, const Partition& p, const RoofConfig& cfg,
                         std::optional<double> lower_hint = std::nullopt);

enum class MeasureKind { Concurrence, Cren };

struct ResidualEntanglement {
    /// Best estimate (exact when `uncertainty` is empty). Not clamped.
    double value = 0.0;
    MeasureKind measure_kind = MeasureKind::Concurrence;
    std::optional<Interval> uncertainty;

    Interval range() const { return uncertainty.value_or(Interval::point(value)); }
};

/// Everything the monogamy bounds consume for one pure state and one focus
/// subsystem A, with B_1, ..., B_{N-1} the remaining subsystems in register order.
struct ResidualIngredients {
    MeasureKind kind = MeasureKind::Concurrence;
    int first = 0;
    /// Measure across A | B_1...B_{N-1} (exact for pure input).
    double total = 0.0;
    /// Pairwise measures of rho_{A B_i}, i = 1..N-1.
    std::vector<MeasureValue> pairwise;
    /// Measure of rho_{A | B_2...B_{N-1}}; equals pairwise[1] when N = 3.
    MeasureValue rest;
    ResidualEntanglement residual;
};

ResidualIngredients residual_ingredients(const PureState& psi, int first, MeasureKind kind, const RoofConfig& cfg);

struct KappaResult {
    ResidualEntanglement kappa;
    /// 4 theta_1 theta_2 from the spectrum of rho_AB * spin_flip(rho_AB).
    double four_theta_product = 0.0;
};

/// Three-qubit residual concurrence with its spectral cross-check; throws
/// NumericalError when the two routes disagree by more than 1e-6.
KappaResult residual_kappa(const PureState& psi);

ResidualEntanglement residual_epsilon(const PureState& psi, int first, const RoofConfig& cfg = {});

} // namespace qmono
