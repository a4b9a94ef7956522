#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmono/measures.hpp"

namespace qmono {

/// Lower bounds on LHS^nu = (measure across A | B_1...B_{N-1})^nu.
enum class BoundId {
    SumC,       ///< sum_i C^nu(rho_{AB_i})
    Prod2020C,  ///< 2 (C_AB^2 C_AC^2 + kappa^2/4)^{1/2}, nu = 2 only
    Prod2021C,  ///< (4 C_AB^2 C_AC^2 + kappa^2)^{nu/4}
    Lemma1C,    ///< [4 (C_AB^2 + kappa/2)(C_AC^2 + kappa/2)]^{nu/4}
    Theorem1C,  ///< N-party generalization of Lemma1C via a geometric mean
    SumN,
    Prod2021N,
    Lemma3N,
    Theorem2N,
};

std::string_view to_string(BoundId id);
std::optional<BoundId> bound_from_string(std::string_view s);
MeasureKind kind_of(BoundId id);

std::string_view to_string(MeasureKind k);
std::optional<MeasureKind> measure_kind_from_string(std::string_view s);

// ---- bound evaluators --------------------------------------------------------
// Residuals are clamped to max(residual, 0). Evaluators taking nu throw
// ValidationError for nu < 2.

double kappa_half_terms(double ab_sq, double ac_sq, double residual, double nu);
double zhang2021(double ab, double ac, double residual, double nu);
double zhang2020(double ab, double ac, double residual);
double sum_bound(std::span<const double> pairwise, double nu);

struct AmGmChain {
    double geometric;
    double arithmetic;
    double cap;
};

AmGmChain amgm_chain(std::span<const double> pairwise_sq, double total_sq);

/// Geometric mean (prod x_i)^{1/n}, taken as 0 when any factor is 0.
double geometric_mean(std::span<const double> values);

double theorem_bound(double ab1_sq, std::span<const double> rest_sq, double residual, double nu);
/// The bound is non-decreasing in the residual, so an interval maps endpoint-wise.
Interval theorem_bound(double ab1_sq, std::span<const double> rest_sq, Interval residual, double nu);

/// Lemma-3 form with CREN ingredients, as used for the qutrit counterexamples.
double counterexample_bound(double n_sq, double n2_sq, double residual, double nu);

// ---- audit -------------------------------------------------------------------

enum class Verdict {
    HoldsWithCertainty,  ///< LHS >= worst-case (highest) RHS
    HoldsAtBestEstimate, ///< LHS >= RHS at the optimizer's estimates only
    Indeterminate,       ///< only the most favourable RHS endpoint stays below LHS
    Violated,            ///< even the lowest RHS exceeds LHS
};

std::string_view to_string(Verdict v);
std::optional<Verdict> verdict_from_string(std::string_view s);

struct Tolerance {
    double relative = 1e-8;
    double absolute_floor = 1e-12;

    double at(double lhs) const;
};

struct BoundEvaluation {
    BoundId id;
    /// RHS at the best estimates of the ingredients.
    double rhs = 0.0;
    /// RHS at the lower / upper endpoints of all ingredient intervals.
    Interval rhs_range;
    /// lhs - rhs
    double margin = 0.0;
    /// lhs - rhs_range.upper
    double worst_margin = 0.0;
    Verdict verdict = Verdict::HoldsWithCertainty;
};

struct AuditRow {
    double nu = 2.0;
    double lhs = 0.0;
    std::vector<BoundEvaluation> bounds;
    /// Largest best-estimate RHS among the evaluated bounds.
    std::optional<BoundId> tightest;
};

/// Bound inputs; `pairwise` holds the measures of rho_{AB_i} in B order.
struct AuditIngredients {
    MeasureKind kind = MeasureKind::Concurrence;
    double total = 0.0;
    std::vector<MeasureValue> pairwise;
    ResidualEntanglement residual;

    static AuditIngredients from(const ResidualIngredients& r);
};

struct AuditReport {
    std::string label;
    MeasureKind kind = MeasureKind::Concurrence;
    int first = 0;
    AuditIngredients ingredients;
    Tolerance tolerance;
    std::vector<AuditRow> rows;

    bool any_violated() const;
    /// Every verdict is HoldsWithCertainty.
    bool all_certain() const;
    const BoundEvaluation* find(double nu, BoundId id) const;
};

struct AuditOptions {
    Tolerance tolerance;
    RoofConfig roof;
};

/// Default nu grid: 2 to 10 in steps of 0.25.
std::vector<double> nu_grid(double min = 2.0, double max = 10.0, double step = 0.25);

/// Evaluates every applicable bound at each nu. Three parties: sum, prod2020
/// (nu = 2), prod2021, lemma. Four or more: sum and theorem.
AuditReport audit_ingredients(std::string label, int first, const AuditIngredients& ingredients,
                              std::span<const double> nus, const AuditOptions& options = {});

/// Audits a pure state with subsystem `first` as A. Concurrence audits need a
/// qubit register; CREN audits accept qudits.
AuditReport audit(const PureState& psi, std::string label, int first, MeasureKind kind, std::span<const double> nus,
                  const AuditOptions& options = {});

} // namespace qmono
