#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmono/monogamy.hpp"

namespace qmono {

struct FigureIngredients {
    double total = 0.0;
    double ab = 0.0;
    double ac = 0.0;
    double residual = 0.0;
};

struct FigureRow {
    double nu;
    double lhs;
    double lemma_bound;
    double zhang2021_bound;
    double sum_bound;
};

/// A quantity computed from the state next to the value quoted for it and
/// the value of the quoted closed-form expression.
struct Discrepancy {
    std::string quantity;
    double state_value;
    double quoted_value;
    double closed_form_value;
    bool quoted_matches;
    bool closed_form_matches;
};

struct FigureData {
    std::string which;
    bool paper_values = false;
    MeasureKind kind = MeasureKind::Concurrence;
    FigureIngredients ingredients;
    std::vector<FigureRow> rows;
    std::vector<Discrepancy> diagnostics;

    bool has_mismatch() const;
};

/// "fig1": Example-1 state, concurrence bounds. "fig2": Example-2 generalized
/// Schmidt state, CREN bounds. Ingredients come from the state unless
/// `paper_values` substitutes the quoted numbers.
FigureData figure_data(std::string_view which, bool paper_values, std::span<const double> nus);

FigureIngredients figure_paper_ingredients(std::string_view which);
FigureRow figure_row(const FigureIngredients& ing, double nu);

struct CounterexampleRow {
    double nu;
    double lhs;
    double lemma3;
    double difference;
};

struct CounterexampleCheck {
    std::string name;
    /// From the state: negativity and squared concurrence across A | BC.
    double negativity_total = 0.0;
    double concurrence_sq_total = 0.0;
    /// Quoted CREN ingredients.
    double quoted_total = 0.0;
    double quoted_ab_sq = 0.0;
    double quoted_ac_sq = 0.0;
    double quoted_residual = 0.0;
    /// Optimizer upper bounds on the pairwise CREN values.
    MeasureValue roof_ab;
    MeasureValue roof_ac;
    std::vector<CounterexampleRow> rows;
    /// Sum of the quoted pairwise squares, compared against concurrence_sq_total.
    double ckw_pairwise_sum = 0.0;
    bool ckw_violated = false;
    /// Every row satisfies |lhs - lemma3| <= 1e-12 * lhs.
    bool equality_holds = false;
};

std::vector<CounterexampleCheck> counterexample_checks(std::span<const double> nus, const RoofConfig& roof);

} // namespace qmono
