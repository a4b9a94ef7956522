#include "qmono/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmono {

namespace {

void require_two_qubits(const DensityOperator& rho, const char* what) {
    if (rho.dims() != Dims({2, 2})) {
        throw ValidationError(std::string(what) + " needs a two-qubit state, got dims " + to_string(rho.dims()));
    }
}

// Eigenvalues of a two-qubit density operator below this are treated as
// outside its support.
constexpr double kSupportThreshold = 1e-14;

Matrix sigma_yy() {
    Matrix yy = Matrix::Zero(4, 4);
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    return yy;
}

bool is_two_qubit_cut(const Dims& dims, const Partition& p) {
    return dims == Dims({2, 2}) && p.covers(2);
}

PureState dominant_pure(const DensityOperator& rho) {
    const auto s = rho.spectrum();
    return PureState::normalized(rho.dims(), s.vectors.col(0));
}

// Position of register subsystem `sub` inside the sorted kept set.
int position_in(const IndexSet& kept, int sub) {
    return static_cast<int>(std::lower_bound(kept.begin(), kept.end(), sub) - kept.begin());
}

IndexSet sorted_union(int a, const IndexSet& others) {
    IndexSet out = others;
    out.push_back(a);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

MeasureValue concurrence_pure(const PureState& psi, const Partition& p) {
    p.require_covers(psi.dims().size());
    const DensityOperator rho_a = partial_trace(to_density(psi), p.side_a());
    const double purity = (rho_a.matrix() * rho_a.matrix()).trace().real();
    return {std::sqrt(std::max(0.0, 2.0 * (1.0 - purity))), Method::ClosedFormPure, std::nullopt, true};
}

Matrix spin_flip(const DensityOperator& rho) {
    require_two_qubits(rho, "spin_flip");
    const Matrix yy = sigma_yy();
    return yy * rho.matrix().conjugate() * yy;
}

RealVector wootters_roots(const DensityOperator& rho) {
    const Matrix product = rho.matrix() * spin_flip(rho);
    Eigen::ComplexEigenSolver<Matrix> es(product, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const Complex ev = es.eigenvalues()(i);
        if (ev.real() < -1e-8) {
            std::ostringstream os;
            os << "rho * rho~ has eigenvalue with negative real part " << ev.real();
            throw NumericalError(os.str());
        }
    }
    // With rho = V V^dagger on its support, the non-zero eigenvalues of
    // rho * rho~ are the squared singular values of tau = V^T (sy x sy) V.
    // Taking singular values directly avoids square roots of rounding noise.
    const auto spectrum = rho.spectrum();
    const auto rank = (spectrum.values.array() > kSupportThreshold).count();
    Matrix v(4, rank);
    for (Eigen::Index k = 0; k < rank; ++k) v.col(k) = std::sqrt(spectrum.values(k)) * spectrum.vectors.col(k);
    const Matrix tau = v.transpose() * sigma_yy() * v;
    RealVector roots = RealVector::Zero(4);
    if (rank > 0) roots.head(rank) = Eigen::JacobiSVD<Matrix>(tau).singularValues();
    return roots;
}

MeasureValue wootters_concurrence(const DensityOperator& rho) {
    const RealVector t = wootters_roots(rho);
    const double c = std::clamp(t(0) - t(1) - t(2) - t(3), 0.0, 1.0);
    return {c, Method::Wootters, std::nullopt, true};
}

double tilde_overlap(const DensityOperator& rho) {
    return (rho.matrix() * spin_flip(rho)).trace().real();
}

MeasureValue negativity(const DensityOperator& rho, const Partition& p) {
    p.require_covers(rho.dims().size());
    const double n = trace_norm(partial_transpose(rho, p.side_a())) - 1.0;
    return {std::max(0.0, n), Method::TraceNorm, std::nullopt, true};
}

MeasureValue negativity(const PureState& psi, const Partition& p) {
    return negativity(to_density(psi), p);
}

MeasureValue negativity_pure_schmidt(const PureState& psi, const Partition& p) {
    const RealVector t = schmidt(psi, p).coefficients;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        for (Eigen::Index j = i + 1; j < t.size(); ++j) sum += std::sqrt(t(i) * t(j));
    }
    return {2.0 * sum, Method::SchmidtFormula, std::nullopt, true};
}

MeasureValue concurrence_pure_schmidt(const PureState& psi, const Partition& p) {
    const RealVector t = schmidt(psi, p).coefficients;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        for (Eigen::Index j = i + 1; j < t.size(); ++j) sum += t(i) * t(j);
    }
    return {2.0 * std::sqrt(sum), Method::SchmidtFormula, std::nullopt, true};
}

MeasureValue cren(const PureState& psi, const Partition& p) {
    return negativity(psi, p);
}

MeasureValue cren(const DensityOperator& rho, const Partition& p, const RoofConfig& cfg,
                  std::optional<double> lower_hint) {
    p.require_covers(rho.dims().size());
    if (rho.is_pure()) return negativity(dominant_pure(rho), p);
    if (is_two_qubit_cut(rho.dims(), p)) return wootters_concurrence(rho);
    return roof_upper_bound(rho, p, RoofObjective::Negativity, cfg, lower_hint).value;
}

MeasureValue concurrence(const DensityOperator& rho, const Partition& p, const RoofConfig& cfg,
                         std::optional<double> lower_hint) {
    p.require_covers(rho.dims().size());
    if (rho.is_pure()) return concurrence_pure(dominant_pure(rho), p);
    if (is_two_qubit_cut(rho.dims(), p)) return wootters_concurrence(rho);
    return roof_upper_bound(rho, p, RoofObjective::Concurrence, cfg, lower_hint).value;
}

ResidualIngredients residual_ingredients(const PureState& psi, int first, MeasureKind kind, const RoofConfig& cfg) {
    const Dims& dims = psi.dims();
    const std::size_t n = dims.size();
    if (n < 3) throw ValidationError("residual entanglement needs at least three subsystems");
    if (first < 0 || static_cast<std::size_t>(first) >= n) {
        throw ValidationError("first subsystem " + std::to_string(first) + " out of range");
    }
    const bool all_qubits = std::all_of(dims.values().begin(), dims.values().end(), [](int d) { return d == 2; });
    if (kind == MeasureKind::Concurrence && !all_qubits) {
        throw ValidationError("concurrence residuals need a qubit register, got dims " + to_string(dims));
    }

    const DensityOperator rho = to_density(psi);
    const Partition a_rest = Partition::one_vs_rest(first, n);

    ResidualIngredients out;
    out.kind = kind;
    out.first = first;
    out.total = kind == MeasureKind::Concurrence ? concurrence_pure(psi, a_rest).value : negativity(psi, a_rest).value;

    IndexSet others;
    for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<int>(i) != first) others.push_back(static_cast<int>(i));
    }
    for (int b : others) {
        const IndexSet kept = sorted_union(first, {b});
        const DensityOperator pair = partial_trace(rho, kept);
        const Partition cut({position_in(kept, first)}, {position_in(kept, b)});
        out.pairwise.push_back(kind == MeasureKind::Concurrence ? wootters_concurrence(pair) : cren(pair, cut, cfg));
    }

    if (n == 3) {
        out.rest = out.pairwise[1];
    } else {
        const IndexSet tail(others.begin() + 1, others.end());
        const IndexSet kept = sorted_union(first, tail);
        const DensityOperator reduced = partial_trace(rho, kept);
        IndexSet tail_pos;
        for (int b : tail) tail_pos.push_back(position_in(kept, b));
        const Partition cut({position_in(kept, first)}, tail_pos);

        // Summation-form monogamy over the tail pairs bounds the reduced
        // measure from below (qubit registers only).
        std::optional<double> hint;
        if (all_qubits) {
            double s = 0.0;
            for (std::size_t i = 1; i < out.pairwise.size(); ++i) s += std::pow(out.pairwise[i].range().lower, 2);
            hint = std::sqrt(s);
        }
        out.rest = kind == MeasureKind::Concurrence ? concurrence(reduced, cut, cfg, hint)
                                                    : cren(reduced, cut, cfg, hint);
    }

    const double t2 = out.total * out.total;
    const MeasureValue& b1 = out.pairwise[0];
    out.residual.measure_kind = kind;
    out.residual.value = t2 - b1.value * b1.value - out.rest.value * out.rest.value;
    if (!b1.exact() || !out.rest.exact()) {
        const Interval i1 = b1.range();
        const Interval ir = out.rest.range();
        out.residual.uncertainty = Interval{t2 - i1.upper * i1.upper - ir.upper * ir.upper,
                                            t2 - i1.lower * i1.lower - ir.lower * ir.lower};
    }
    return out;
}

KappaResult residual_kappa(const PureState& psi) {
    if (psi.dims() != Dims({2, 2, 2})) {
        throw ValidationError("residual_kappa needs a three-qubit state, got dims " + to_string(psi.dims()));
    }
    const ResidualIngredients ing = residual_ingredients(psi, 0, MeasureKind::Concurrence, RoofConfig{});
    const RealVector t = wootters_roots(partial_trace(to_density(psi), {0, 1}));
    KappaResult out{ing.residual, 4.0 * t(0) * t(1)};
    if (std::abs(out.kappa.value - out.four_theta_product) > 1e-6) {
        std::ostringstream os;
        os << "residual concurrence " << out.kappa.value << " disagrees with 4*theta1*theta2 = "
           << out.four_theta_product;
        throw NumericalError(os.str());
    }
    return out;
}

ResidualEntanglement residual_epsilon(const PureState& psi, int first, const RoofConfig& cfg) {
    return residual_ingredients(psi, first, MeasureKind::Cren, cfg).residual;
}

} // namespace qmono
