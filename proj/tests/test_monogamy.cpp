#include <doctest.h>

#include <cmath>
#include <random>

#include "qmono/errors.hpp"
#include "qmono/monogamy.hpp"
#include "qmono/states.hpp"

using namespace qmono;

namespace {

std::vector<double> nus_for_tests() { return {2.0, 2.5, 3.0, 5.0, 10.0}; }

AuditIngredients make_ingredients(MeasureKind kind, double total, std::vector<double> pairwise, double residual) {
    AuditIngredients ing;
    ing.kind = kind;
    ing.total = total;
    for (double v : pairwise) ing.pairwise.push_back({v, Method::Wootters, std::nullopt, true});
    ing.residual.value = residual;
    ing.residual.measure_kind = kind;
    return ing;
}

} // namespace

TEST_CASE("names round-trip") {
    for (BoundId id : {BoundId::SumC, BoundId::Prod2020C, BoundId::Prod2021C, BoundId::Lemma1C, BoundId::Theorem1C,
                       BoundId::SumN, BoundId::Prod2021N, BoundId::Lemma3N, BoundId::Theorem2N}) {
        CHECK(bound_from_string(to_string(id)) == id);
    }
    CHECK(to_string(BoundId::Lemma1C) == "lemma1_C");
    CHECK(kind_of(BoundId::Theorem2N) == MeasureKind::Cren);
    CHECK(kind_of(BoundId::Prod2020C) == MeasureKind::Concurrence);
    CHECK(!bound_from_string("lemma2"));
    for (Verdict v : {Verdict::HoldsWithCertainty, Verdict::HoldsAtBestEstimate, Verdict::Indeterminate,
                      Verdict::Violated}) {
        CHECK(verdict_from_string(to_string(v)) == v);
    }
}

TEST_CASE("kappa_half_terms examples") {
    CHECK(kappa_half_terms(4.0 / 9.0, 4.0 / 9.0, 0.0, 2.0) == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
    for (double nu : nus_for_tests()) CHECK(kappa_half_terms(0.0, 0.0, 1.0, nu) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(kappa_half_terms(8.0 / 25.0, 4.0 / 25.0, 4.0 / 25.0, 2.0) - std::sqrt(0.384)) < 1e-12);
    CHECK(kappa_half_terms(0.1, 0.2, -1e-12, 2.0) == kappa_half_terms(0.1, 0.2, 0.0, 2.0));
    CHECK_THROWS_AS(kappa_half_terms(0.1, 0.1, 0.1, 1.5), ValidationError);
}

TEST_CASE("zhang2021 and zhang2020") {
    const double ab = 2.0 * std::sqrt(2.0) / 5.0, ac = 0.4;
    CHECK(std::abs(zhang2021(ab, ac, 4.0 / 25.0, 2.0) - 0.48) < 1e-12);
    CHECK(std::abs(zhang2021(0.3, 0.7, 0.0, 3.0) - std::pow(4.0 * 0.09 * 0.49, 0.75)) < 1e-14);
    const double n = std::sqrt(8.0 / 9.0);
    CHECK(std::abs(zhang2021(n, n, 20.0 / 9.0, 4.0) - 656.0 / 81.0) < 1e-12);
    CHECK_THROWS_AS(zhang2021(0.1, 0.1, 0.1, 1.0), ValidationError);

    CHECK(std::abs(zhang2020(0.3, 0.6, 0.0) - 0.36) < 1e-14);
    CHECK(std::abs(zhang2020(0.0, 0.0, 1.0) - 1.0) < 1e-14);
    CHECK(std::abs(zhang2020(ab, ac, 4.0 / 25.0) - 0.48) < 1e-12);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng), k = u(rng);
        CHECK(std::abs(zhang2020(a, b, k) - zhang2021(a, b, k, 2.0)) < 1e-12);
    }
}

TEST_CASE("sum bound") {
    CHECK(sum_bound(std::vector<double>{0.0, 0.0}, 3.0) == 0.0);
    CHECK(std::abs(sum_bound(std::vector<double>{2.0 / 3.0, 2.0 / 3.0}, 2.0) - 8.0 / 9.0) < 1e-15);
    CHECK(std::abs(sum_bound(std::vector<double>{2.0 * std::sqrt(2.0) / 5.0, 0.4}, 2.0) - 12.0 / 25.0) < 1e-15);
}

TEST_CASE("AM-GM chain") {
    const AmGmChain eq = amgm_chain(std::vector<double>{0.3, 0.3, 0.3}, 1.0);
    CHECK(std::abs(eq.geometric - eq.arithmetic) < 1e-15);
    const AmGmChain w = amgm_chain(std::vector<double>{4.0 / 9.0, 4.0 / 9.0}, 8.0 / 9.0);
    CHECK(std::abs(w.geometric - 4.0 / 9.0) < 1e-15);
    CHECK(std::abs(w.arithmetic - 4.0 / 9.0) < 1e-15);
    CHECK(std::abs(w.cap - 4.0 / 9.0) < 1e-15);
    const AmGmChain z = amgm_chain(std::vector<double>{0.0, 0.5}, 1.0);
    CHECK(z.geometric == 0.0);
    CHECK(z.arithmetic == 0.25);
    CHECK_THROWS_AS(amgm_chain(std::vector<double>{}, 1.0), ValidationError);
}

TEST_CASE("AM-GM chain on Haar states") {
    for (const auto& dims : {std::vector<int>{2, 2, 2}, std::vector<int>{2, 2, 2, 2}}) {
        for (std::uint64_t k = 0; k < 10000; ++k) {
            const PureState psi = haar_random_pure(Dims(dims), 70, k);
            const DensityOperator rho = to_density(psi);
            std::vector<double> sq;
            for (int b = 1; b < static_cast<int>(dims.size()); ++b) {
                sq.push_back(std::pow(wootters_concurrence(partial_trace(rho, {0, b})).value, 2));
            }
            const double total = std::pow(concurrence_pure(psi, Partition::one_vs_rest(0, dims.size())).value, 2);
            const AmGmChain c = amgm_chain(sq, total);
            REQUIRE(c.geometric <= c.arithmetic + 1e-9);
            REQUIRE(c.arithmetic <= c.cap + 1e-9);
        }
    }
}

TEST_CASE("theorem bound") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng), k = u(rng), nu = 2.0 + 8.0 * u(rng);
        const std::vector<double> rest{b};
        CHECK(theorem_bound(a, rest, k, nu) == kappa_half_terms(a, b, k, nu));
    }
    // zero pairwise factor: the geometric mean term vanishes
    CHECK(theorem_bound(0.2, std::vector<double>{0.3, 0.0}, 0.4, 2.0) ==
          doctest::Approx(std::sqrt(4.0 * (0.2 + 0.2) * 0.2)).epsilon(1e-14));
    // GHZ4 with B_1 = second qubit
    for (double nu : nus_for_tests()) {
        CHECK(theorem_bound(0.0, std::vector<double>{0.0, 0.0}, 1.0, nu) == doctest::Approx(1.0).epsilon(1e-14));
    }
    const Interval iv = theorem_bound(0.1, std::vector<double>{0.2, 0.3}, Interval{0.05, 0.2}, 3.0);
    CHECK(iv.lower == theorem_bound(0.1, std::vector<double>{0.2, 0.3}, 0.05, 3.0));
    CHECK(iv.upper == theorem_bound(0.1, std::vector<double>{0.2, 0.3}, 0.2, 3.0));
    CHECK(iv.lower <= iv.upper);
    CHECK_THROWS_AS(theorem_bound(0.1, std::vector<double>{}, 0.1, 2.0), ValidationError);
    CHECK_THROWS_AS(theorem_bound(0.1, std::vector<double>{0.1}, 0.1, 1.9), ValidationError);
}

TEST_CASE("counterexample bound") {
    for (double nu : {2.0, 3.0, 4.0, 10.0}) {
        CHECK(std::abs(counterexample_bound(1.0, 1.0, 2.0, nu) - std::pow(2.0, nu)) <= 1e-12 * std::pow(2.0, nu));
        CHECK(std::abs(counterexample_bound(8.0 / 9.0, 8.0 / 9.0, 20.0 / 9.0, nu) - std::pow(2.0, nu)) <=
              1e-12 * std::pow(2.0, nu));
        CHECK(std::abs(counterexample_bound(1.0, 1.0, 0.0, nu) - std::pow(2.0, nu / 2.0)) < 1e-12);
    }
}

TEST_CASE("dominance and monotonicity on random ingredients") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double a = u(rng), b = u(rng), k = u(rng), nu = 2.0 + 8.0 * u(rng);
        REQUIRE(kappa_half_terms(a * a, b * b, k, nu) >= zhang2021(a, b, k, nu));
        const double dk = 1e-3;
        REQUIRE(kappa_half_terms(a * a, b * b, k + dk, nu) >= kappa_half_terms(a * a, b * b, k, nu));
        REQUIRE(zhang2021(a, b, k + dk, nu) >= zhang2021(a, b, k, nu));
        REQUIRE(zhang2020(a, b, k + dk) >= zhang2020(a, b, k));
        const std::vector<double> rest{b * b, u(rng)};
        REQUIRE(theorem_bound(a * a, rest, k + dk, nu) >= theorem_bound(a * a, rest, k, nu));
    }
}

TEST_CASE("nu grid") {
    const auto g = nu_grid();
    CHECK(g.size() == 33);
    CHECK(g.front() == 2.0);
    CHECK(g.back() == 10.0);
    CHECK(nu_grid(2.0, 3.0, 0.5) == std::vector<double>{2.0, 2.5, 3.0});
    CHECK_THROWS_AS(nu_grid(1.0, 3.0, 0.5), ValidationError);
    CHECK_THROWS_AS(nu_grid(2.0, 3.0, 0.0), ValidationError);
    CHECK_THROWS_AS(nu_grid(4.0, 3.0, 0.5), ValidationError);
}

TEST_CASE("W state audit") {
    const auto nus = nu_grid();
    const AuditReport r = audit(w_state(3), "w3", 0, MeasureKind::Concurrence, nus);
    CHECK(r.all_certain());
    for (double nu : nus) {
        const auto* lemma = r.find(nu, BoundId::Lemma1C);
        REQUIRE(lemma);
        CHECK(std::abs(lemma->margin) <= 1e-9);
    }
    const auto* z = r.find(2.0, BoundId::Prod2020C);
    REQUIRE(z);
    CHECK(z->rhs <= 8.0 / 9.0 + 1e-12);
    CHECK(r.find(3.0, BoundId::Prod2020C) == nullptr);
}

TEST_CASE("GSD Example-2 audit") {
    const std::vector<double> nus{2.0};
    const AuditReport r = audit(gsd_state(gsd_example2_parameters(), 0.0), "gsd", 0, MeasureKind::Cren, nus);
    CHECK(r.all_certain());
    const AuditRow& row = r.rows[0];
    CHECK(std::abs(row.lhs - 0.64) < 1e-9);
    CHECK(std::abs(r.find(2.0, BoundId::Lemma3N)->rhs - std::sqrt(0.384)) < 1e-9);
    CHECK(std::abs(r.find(2.0, BoundId::Prod2021N)->rhs - 0.48) < 1e-9);
    CHECK(std::abs(r.find(2.0, BoundId::SumN)->rhs - 0.48) < 1e-9);
    REQUIRE(row.tightest);
    CHECK(*row.tightest == BoundId::Lemma3N);
}

TEST_CASE("Ou audit shows equality") {
    const std::vector<double> nus{2.0, 3.0, 4.0};
    RoofConfig roof;
    roof.restarts = 4;
    const AuditReport r = audit(ou_state(), "ou", 0, MeasureKind::Cren, nus, AuditOptions{Tolerance{}, roof});
    CHECK_FALSE(r.any_violated());
    for (double nu : nus) {
        const auto* b = r.find(nu, BoundId::Lemma3N);
        REQUIRE(b);
        CHECK(std::abs(b->margin) <= 1e-6 * std::pow(2.0, nu));
    }
}

TEST_CASE("verdict classification") {
    // a pairwise upper bound with a wide interval
    AuditIngredients ing = make_ingredients(MeasureKind::Cren, 1.0, {0.5, 0.5}, 0.5);
    ing.residual.uncertainty = Interval{0.3, 2.0};
    const std::vector<double> nus{2.0};
    const AuditReport r = audit_ingredients("synthetic", 0, ing, nus);
    // lemma: [4 (0.25 + k/2)^2]^{1/2} = 0.5 + k: 1.0 at the estimate, 0.8 and 2.5 at the corners
    const auto* lemma = r.find(2.0, BoundId::Lemma3N);
    CHECK(lemma->verdict == Verdict::HoldsAtBestEstimate);
    CHECK(lemma->rhs_range.lower == doctest::Approx(0.8));
    CHECK(lemma->rhs_range.upper == doctest::Approx(2.5));

    AuditIngredients bad = make_ingredients(MeasureKind::Concurrence, 0.5, {0.5, 0.5}, 0.0);
    const AuditReport v = audit_ingredients("bad", 0, bad, nus);
    CHECK(v.any_violated());
    CHECK(v.find(2.0, BoundId::SumC)->verdict == Verdict::Violated);

    AuditIngredients mid = make_ingredients(MeasureKind::Cren, 1.0, {0.5, 0.5}, 0.7);
    mid.residual.uncertainty = Interval{0.3, 2.0};
    CHECK(audit_ingredients("mid", 0, mid, nus).find(2.0, BoundId::Lemma3N)->verdict == Verdict::Indeterminate);

    CHECK_THROWS_AS(audit_ingredients("x", 0, make_ingredients(MeasureKind::Cren, 1, {0.5}, 0), nus),
                    ValidationError);
    CHECK_THROWS_AS(audit_ingredients("x", 0, ing, std::vector<double>{}), ValidationError);
    CHECK_THROWS_AS(audit_ingredients("x", 0, ing, std::vector<double>{1.0}), ValidationError);
}

TEST_CASE("tolerance") {
    Tolerance t;
    CHECK(t.at(1.0) == 1e-8);
    CHECK(t.at(0.0) == 1e-12);
    CHECK(t.at(-2.0) == 2e-8);
}

TEST_CASE("concurrence audits need qubits") {
    const std::vector<double> nus{2.0};
    CHECK_THROWS_AS(audit(ou_state(), "ou", 0, MeasureKind::Concurrence, nus), ValidationError);
}

TEST_CASE("soundness on Haar three-qubit states") {
    const auto nus = nus_for_tests();
    for (std::uint64_t k = 0; k < 2000; ++k) {
        const PureState psi = haar_random_pure(Dims({2, 2, 2}), 71, k);
        for (MeasureKind kind : {MeasureKind::Concurrence, MeasureKind::Cren}) {
            const AuditReport r = audit(psi, "haar", static_cast<int>(k % 3), kind, nus);
            REQUIRE(r.all_certain());
        }
    }
}

TEST_CASE("GHZ4 theorem bound in the audit") {
    const std::vector<double> nus{2.0, 5.0};
    const AuditReport r = audit(ghz_state(4), "ghz4", 0, MeasureKind::Concurrence, nus);
    CHECK_FALSE(r.any_violated());
    for (double nu : nus) {
        const auto* t = r.find(nu, BoundId::Theorem1C);
        REQUIRE(t);
        CHECK(t->rhs <= 1.0 + 1e-9);
    }
}
