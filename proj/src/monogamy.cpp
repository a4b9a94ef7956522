#include "qmono/monogamy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmono {

namespace {

void require_nu(double nu) {
    if (!(nu >= 2.0)) {
        std::ostringstream os;
        os << "monogamy bounds need nu >= 2, got " << nu;
        throw ValidationError(os.str());
    }
}

double clamp0(double x) { return std::max(0.0, x); }

bool is_nu_two(double nu) { return std::abs(nu - 2.0) < 1e-12; }

// Ingredients at one corner of the uncertainty box (or at the estimate).
struct Corner {
    std::vector<double> pairwise;
    double residual = 0.0;
};

double evaluate(BoundId id, const Corner& c, double nu) {
    const double ab = c.pairwise[0];
    switch (id) {
    case BoundId::SumC:
    case BoundId::SumN:
        return sum_bound(c.pairwise, nu);
    case BoundId::Prod2020C:
        return zhang2020(ab, c.pairwise[1], c.residual);
    case BoundId::Prod2021C:
    case BoundId::Prod2021N:
        return zhang2021(ab, c.pairwise[1], c.residual, nu);
    case BoundId::Lemma1C:
    case BoundId::Lemma3N:
        return kappa_half_terms(ab * ab, c.pairwise[1] * c.pairwise[1], c.residual, nu);
    case BoundId::Theorem1C:
    case BoundId::Theorem2N: {
        std::vector<double> rest_sq;
        for (std::size_t i = 1; i < c.pairwise.size(); ++i) rest_sq.push_back(c.pairwise[i] * c.pairwise[i]);
        return theorem_bound(ab * ab, rest_sq, c.residual, nu);
    }
    }
    return 0.0;
}

std::vector<BoundId> applicable_bounds(MeasureKind kind, std::size_t parties, double nu) {
    const bool c = kind == MeasureKind::Concurrence;
    if (parties == 3) {
        std::vector<BoundId> ids{c ? BoundId::SumC : BoundId::SumN};
        if (c && is_nu_two(nu)) ids.push_back(BoundId::Prod2020C);
        ids.push_back(c ? BoundId::Prod2021C : BoundId::Prod2021N);
        ids.push_back(c ? BoundId::Lemma1C : BoundId::Lemma3N);
        return ids;
    }
    return {c ? BoundId::SumC : BoundId::SumN, c ? BoundId::Theorem1C : BoundId::Theorem2N};
}

} // namespace

// ---- names -------------------------------------------------------------------

std::string_view to_string(BoundId id) {
    switch (id) {
    case BoundId::SumC: return "sum_C";
    case BoundId::Prod2020C: return "prod2020_C";
    case BoundId::Prod2021C: return "prod2021_C";
    case BoundId::Lemma1C: return "lemma1_C";
    case BoundId::Theorem1C: return "theorem1_C";
    case BoundId::SumN: return "sum_N";
    case BoundId::Prod2021N: return "prod2021_N";
    case BoundId::Lemma3N: return "lemma3_N";
    case BoundId::Theorem2N: return "theorem2_N";
    }
    return "unknown";
}

std::optional<BoundId> bound_from_string(std::string_view s) {
    for (BoundId id : {BoundId::SumC, BoundId::Prod2020C, BoundId::Prod2021C, BoundId::Lemma1C, BoundId::Theorem1C,
                       BoundId::SumN, BoundId::Prod2021N, BoundId::Lemma3N, BoundId::Theorem2N}) {
        if (to_string(id) == s) return id;
    }
    return std::nullopt;
}

MeasureKind kind_of(BoundId id) {
    switch (id) {
    case BoundId::SumN:
    case BoundId::Prod2021N:
    case BoundId::Lemma3N:
    case BoundId::Theorem2N:
        return MeasureKind::Cren;
    default:
        return MeasureKind::Concurrence;
    }
}

std::string_view to_string(MeasureKind k) { return k == MeasureKind::Concurrence ? "concurrence" : "cren"; }

std::optional<MeasureKind> measure_kind_from_string(std::string_view s) {
    if (s == "concurrence") return MeasureKind::Concurrence;
    if (s == "cren") return MeasureKind::Cren;
    return std::nullopt;
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::HoldsWithCertainty: return "holds_with_certainty";
    case Verdict::HoldsAtBestEstimate: return "holds_at_best_estimate";
    case Verdict::Indeterminate: return "indeterminate";
    case Verdict::Violated: return "violated";
    }
    return "unknown";
}

std::optional<Verdict> verdict_from_string(std::string_view s) {
    for (Verdict v : {Verdict::HoldsWithCertainty, Verdict::HoldsAtBestEstimate, Verdict::Indeterminate,
                      Verdict::Violated}) {
        if (to_string(v) == s) return v;
    }
    return std::nullopt;
}

// ---- evaluators ----------------------------------------------------------------

double kappa_half_terms(double ab_sq, double ac_sq, double residual, double nu) {
    require_nu(nu);
    const double k = clamp0(residual);
    return std::pow(4.0 * (ab_sq + k / 2.0) * (ac_sq + k / 2.0), nu / 4.0);
}

double zhang2021(double ab, double ac, double residual, double nu) {
    require_nu(nu);
    const double k = clamp0(residual);
    return std::pow(4.0 * ab * ab * ac * ac + k * k, nu / 4.0);
}

double zhang2020(double ab, double ac, double residual) {
    const double k = clamp0(residual);
    return 2.0 * std::sqrt(ab * ab * ac * ac + k * k / 4.0);
}

double sum_bound(std::span<const double> pairwise, double nu) {
    double s = 0.0;
    for (double v : pairwise) s += std::pow(v, nu);
    return s;
}

double geometric_mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double log_sum = 0.0;
    for (double v : values) {
        if (v <= 0.0) return 0.0;
        log_sum += std::log(v);
    }
    return std::exp(log_sum / static_cast<double>(values.size()));
}

AmGmChain amgm_chain(std::span<const double> pairwise_sq, double total_sq) {
    if (pairwise_sq.empty()) throw ValidationError("amgm_chain needs at least one pairwise value");
    const double n = static_cast<double>(pairwise_sq.size());
    double s = 0.0;
    for (double v : pairwise_sq) s += v;
    return {geometric_mean(pairwise_sq), s / n, total_sq / n};
}

double theorem_bound(double ab1_sq, std::span<const double> rest_sq, double residual, double nu) {
    require_nu(nu);
    if (rest_sq.empty()) throw ValidationError("theorem_bound needs at least three parties");
    const double k = clamp0(residual);
    // (N - 2) (prod rest)^{1/(N-2)}; a single factor enters as itself, bit for bit
    const double rest = rest_sq.size() == 1 ? rest_sq[0]
                                            : static_cast<double>(rest_sq.size()) * geometric_mean(rest_sq);
    return std::pow(4.0 * (ab1_sq + k / 2.0) * (rest + k / 2.0), nu / 4.0);
}

Interval theorem_bound(double ab1_sq, std::span<const double> rest_sq, Interval residual, double nu) {
    return {theorem_bound(ab1_sq, rest_sq, residual.lower, nu), theorem_bound(ab1_sq, rest_sq, residual.upper, nu)};
}

double counterexample_bound(double n_sq, double n2_sq, double residual, double nu) {
    return kappa_half_terms(n_sq, n2_sq, residual, nu);
}

// ---- audit -------------------------------------------------------------------

double Tolerance::at(double lhs) const { return std::max(relative * std::abs(lhs), absolute_floor); }

AuditIngredients AuditIngredients::from(const ResidualIngredients& r) {
    return {r.kind, r.total, r.pairwise, r.residual};
}

bool AuditReport::any_violated() const {
    for (const auto& row : rows) {
        for (const auto& b : row.bounds) {
            if (b.verdict == Verdict::Violated) return true;
        }
    }
    return false;
}

bool AuditReport::all_certain() const {
    for (const auto& row : rows) {
        for (const auto& b : row.bounds) {
            if (b.verdict != Verdict::HoldsWithCertainty) return false;
        }
    }
    return true;
}

const BoundEvaluation* AuditReport::find(double nu, BoundId id) const {
    for (const auto& row : rows) {
        if (std::abs(row.nu - nu) > 1e-12) continue;
        for (const auto& b : row.bounds) {
            if (b.id == id) return &b;
        }
    }
    return nullptr;
}

std::vector<double> nu_grid(double min, double max, double step) {
    if (!(min >= 2.0)) throw ValidationError("nu grid must start at or above 2");
    if (!(step > 0.0)) throw ValidationError("nu grid step must be positive");
    if (max < min) throw ValidationError("nu grid maximum is below its minimum");
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((max - min) / step + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(min + static_cast<double>(k) * step);
    return out;
}

AuditReport audit_ingredients(std::string label, int first, const AuditIngredients& ing, std::span<const double> nus,
                              const AuditOptions& options) {
    if (ing.pairwise.size() < 2) throw ValidationError("audit needs at least three parties");
    if (nus.empty()) throw ValidationError("audit needs at least one nu value");
    const std::size_t parties = ing.pairwise.size() + 1;

    Corner estimate, low, high;
    for (const auto& p : ing.pairwise) {
        estimate.pairwise.push_back(p.value);
        low.pairwise.push_back(p.range().lower);
        high.pairwise.push_back(p.range().upper);
    }
    estimate.residual = ing.residual.value;
    low.residual = ing.residual.range().lower;
    high.residual = ing.residual.range().upper;

    AuditReport report;
    report.label = std::move(label);
    report.kind = ing.kind;
    report.first = first;
    report.ingredients = ing;
    report.tolerance = options.tolerance;

    for (double nu : nus) {
        require_nu(nu);
        AuditRow row;
        row.nu = nu;
        row.lhs = std::pow(ing.total, nu);
        const double tol = options.tolerance.at(row.lhs);
        double best_rhs = -1.0;
        for (BoundId id : applicable_bounds(ing.kind, parties, nu)) {
            BoundEvaluation e;
            e.id = id;
            e.rhs = evaluate(id, estimate, nu);
            e.rhs_range = {evaluate(id, low, nu), evaluate(id, high, nu)};
            e.margin = row.lhs - e.rhs;
            e.worst_margin = row.lhs - e.rhs_range.upper;
            if (e.worst_margin >= -tol) {
                e.verdict = Verdict::HoldsWithCertainty;
            } else if (e.margin >= -tol) {
                e.verdict = Verdict::HoldsAtBestEstimate;
            } else if (row.lhs - e.rhs_range.lower >= -tol) {
                e.verdict = Verdict::Indeterminate;
            } else {
                e.verdict = Verdict::Violated;
            }
            if (e.rhs > best_rhs + tol) {
                best_rhs = e.rhs;
                row.tightest = id;
            }
            row.bounds.push_back(e);
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

AuditReport audit(const PureState& psi, std::string label, int first, MeasureKind kind, std::span<const double> nus,
                  const AuditOptions& options) {
    const ResidualIngredients r = residual_ingredients(psi, first, kind, options.roof);
    return audit_ingredients(std::move(label), first, AuditIngredients::from(r), nus, options);
}

} // namespace qmono
