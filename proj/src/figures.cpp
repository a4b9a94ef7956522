#include "qmono/figures.hpp"

#include <cmath>

#include "qmono/states.hpp"

namespace qmono {

namespace {

constexpr double kMatchTolerance = 1e-10;

bool close(double a, double b) { return std::abs(a - b) <= kMatchTolerance * std::max(1.0, std::abs(a)); }

Discrepancy compare(std::string quantity, double state, double quoted, double closed_form) {
    return {std::move(quantity), state, quoted, closed_form, close(state, quoted), close(state, closed_form)};
}

} // namespace

bool FigureData::has_mismatch() const {
    for (const auto& d : diagnostics) {
        if (!d.quoted_matches || !d.closed_form_matches) return true;
    }
    return false;
}

FigureIngredients figure_paper_ingredients(std::string_view which) {
    if (which == "fig1") {
        const double r15 = std::sqrt(15.0);
        const double k = 4.0 / 25.0 * std::pow((16.0 * r15 + 1.0) / 125.0, 2);
        return {std::sqrt(48.0 / 625.0), 2.0 * (4.0 - r15) / 25.0, 2.0 * (2.0 * std::sqrt(5.0) - 2.0) / 25.0, k};
    }
    if (which == "fig2") return {0.8, 2.0 * std::sqrt(2.0) / 5.0, 0.4, 4.0 / 25.0};
    throw InputError("unknown figure '" + std::string(which) + "', expected fig1 or fig2");
}

FigureRow figure_row(const FigureIngredients& ing, double nu) {
    const double pair[] = {ing.ab, ing.ac};
    return {nu, std::pow(ing.total, nu), kappa_half_terms(ing.ab * ing.ab, ing.ac * ing.ac, ing.residual, nu),
            zhang2021(ing.ab, ing.ac, ing.residual, nu), sum_bound(pair, nu)};
}

FigureData figure_data(std::string_view which, bool paper_values, std::span<const double> nus) {
    FigureData out;
    out.which = std::string(which);
    out.paper_values = paper_values;
    const FigureIngredients quoted = figure_paper_ingredients(which);

    FigureIngredients derived;
    if (which == "fig1") {
        out.kind = MeasureKind::Concurrence;
        const auto p = example1_paper_parameters();
        const auto r = residual_ingredients(example1_state(p, 0.0), 0, MeasureKind::Concurrence, RoofConfig{});
        derived = {r.total, r.pairwise[0].value, r.pairwise[1].value, r.residual.value};

        const double c2_closed = -4.0 * (p[3] * p[3] - p[4] * p[4] + std::pow(p[4], 4) +
                                         p[3] * p[3] * (-1.0 + p[0] * p[0] + 2.0 * p[4] * p[4]));
        const double k_closed = 4.0 * p[4] * p[4] * std::pow(4.0 * p[1] * p[2] * p[3] + p[0] * p[0] * p[4], 2);
        out.diagnostics = {
            compare("C^2_A|BC", derived.total * derived.total, quoted.total * quoted.total, c2_closed),
            compare("C_AB", derived.ab, quoted.ab, 2.0 * std::abs(p[2] * p[3] - p[1] * p[4])),
            compare("C_AC", derived.ac, quoted.ac, 2.0 * std::abs(p[1] * p[3] - p[2] * p[4])),
            compare("kappa_ABC", derived.residual, quoted.residual, k_closed),
        };
    } else {
        out.kind = MeasureKind::Cren;
        const auto t = gsd_example2_parameters();
        const auto r = residual_ingredients(gsd_state(t, 0.0), 0, MeasureKind::Cren, RoofConfig{});
        derived = {r.total, r.pairwise[0].value, r.pairwise[1].value, r.residual.value};
        const auto closed = gsd_closed_forms(t);
        const double eps_closed = closed.a_bc * closed.a_bc - closed.ab * closed.ab - closed.ac * closed.ac;
        out.diagnostics = {
            compare("N_cA|BC", derived.total, quoted.total, closed.a_bc),
            compare("N_cAB", derived.ab, quoted.ab, closed.ab),
            compare("N_cAC", derived.ac, quoted.ac, closed.ac),
            compare("epsilon_ABC", derived.residual, quoted.residual, eps_closed),
        };
    }
    out.ingredients = paper_values ? quoted : derived;
    for (double nu : nus) out.rows.push_back(figure_row(out.ingredients, nu));
    return out;
}

std::vector<CounterexampleCheck> counterexample_checks(std::span<const double> nus, const RoofConfig& roof) {
    struct Quoted {
        std::string name;
        PureState state;
        double total, ab_sq, ac_sq, residual;
    };
    const std::vector<Quoted> cases = {
        {"ou", ou_state(), 2.0, 1.0, 1.0, 2.0},
        {"kim-sanders", kim_sanders_state(), 2.0, 8.0 / 9.0, 8.0 / 9.0, 20.0 / 9.0},
    };

    std::vector<CounterexampleCheck> out;
    for (const auto& c : cases) {
        CounterexampleCheck check;
        check.name = c.name;
        const Partition a_bc = Partition::one_vs_rest(0, 3);
        check.negativity_total = negativity(c.state, a_bc).value;
        check.concurrence_sq_total = std::pow(concurrence_pure(c.state, a_bc).value, 2);
        check.quoted_total = c.total;
        check.quoted_ab_sq = c.ab_sq;
        check.quoted_ac_sq = c.ac_sq;
        check.quoted_residual = c.residual;

        const DensityOperator rho = to_density(c.state);
        const Partition cut({0}, {1});
        check.roof_ab = cren(partial_trace(rho, {0, 1}), cut, roof);
        check.roof_ac = cren(partial_trace(rho, {0, 2}), cut, roof);

        check.equality_holds = true;
        for (double nu : nus) {
            const double lhs = std::pow(c.total, nu);
            const double rhs = counterexample_bound(c.ab_sq, c.ac_sq, c.residual, nu);
            check.rows.push_back({nu, lhs, rhs, lhs - rhs});
            if (std::abs(lhs - rhs) > 1e-12 * lhs) check.equality_holds = false;
        }
        check.ckw_pairwise_sum = c.ab_sq + c.ac_sq;
        check.ckw_violated = check.concurrence_sq_total < check.ckw_pairwise_sum;
        out.push_back(std::move(check));
    }
    return out;
}

} // namespace qmono
