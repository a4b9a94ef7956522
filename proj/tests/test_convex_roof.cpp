#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qmono/convex_roof.hpp"
#include "qmono/errors.hpp"
#include "qmono/measures.hpp"
#include "qmono/random.hpp"
#include "qmono/states.hpp"

using namespace qmono;

namespace {

const Partition kAB = Partition::parse("0:1");

Matrix weighted_eigenvectors(const DensityOperator& rho) {
    const auto s = rho.spectrum();
    int r = 0;
    while (r < s.values.size() && s.values(r) > 1e-12) ++r;
    Matrix w(rho.matrix().rows(), r);
    for (int k = 0; k < r; ++k) w.col(k) = std::sqrt(s.values(k)) * s.vectors.col(k);
    return w;
}

Matrix random_isometry(int m, int r, std::uint64_t seed) {
    auto rng = stream_engine(seed, 0);
    std::normal_distribution<double> g;
    Matrix z(m, r);
    for (Eigen::Index j = 0; j < r; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) z(i, j) = Complex(g(rng), g(rng));
    }
    Eigen::HouseholderQR<Matrix> qr(z);
    return Matrix(qr.householderQ()).leftCols(r);
}

} // namespace

TEST_CASE("decomposition points reconstruct the state") {
    for (std::uint64_t k = 0; k < 20; ++k) {
        const DensityOperator rho = random_mixed(Dims({2, 3}), 3, 60, k);
        const Matrix w = weighted_eigenvectors(rho);
        const DecompositionPoint d(w, random_isometry(9, 3, k));
        CHECK((d.reconstruct() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
        double total = 0.0;
        for (double p : d.probabilities()) total += p;
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(DecompositionPoint(Matrix::Zero(4, 2), Matrix::Zero(1, 2)), ValidationError);
    CHECK_THROWS_AS(DecompositionPoint(Matrix::Zero(4, 2), Matrix::Zero(3, 3)), ValidationError);
}

TEST_CASE("weighted pure measures are homogeneous") {
    const PureState psi = haar_random_pure(Dims({3, 3}), 61);
    const BipartiteLayout layout(psi.dims(), kAB);
    const Matrix m = layout.to_matrix(psi.amplitudes());
    const double n = negativity(psi, kAB).value;
    const double c = concurrence_pure(psi, kAB).value;
    CHECK(std::abs(weighted_pure_measure(m, RoofObjective::Negativity) - n) < 1e-12);
    CHECK(std::abs(weighted_pure_measure(m, RoofObjective::Concurrence) - c) < 1e-12);
    CHECK(std::abs(weighted_pure_measure(std::sqrt(0.3) * m, RoofObjective::Negativity) - 0.3 * n) < 1e-12);
    CHECK(std::abs(weighted_pure_measure(std::sqrt(0.3) * m, RoofObjective::Concurrence) - 0.3 * c) < 1e-12);
}

TEST_CASE("rank-one input is exact") {
    const PureState psi = haar_random_pure(Dims({2, 3}), 62);
    const RoofResult r = roof_upper_bound(to_density(psi), kAB, RoofObjective::Negativity, RoofConfig{});
    CHECK(r.rank == 1);
    CHECK(std::abs(r.value.value - negativity(psi, kAB).value) < 1e-12);
    REQUIRE(r.value.interval);
    CHECK(r.value.interval->width() == 0.0);
}

TEST_CASE("two-qubit states agree with Wootters") {
    RoofConfig cfg;
    cfg.restarts = 4;
    for (std::uint64_t k = 0; k < 20; ++k) {
        const int rank = 2 + static_cast<int>(k % 3);
        const DensityOperator rho = random_mixed(Dims({2, 2}), rank, 63, k);
        const double c = oracle::wootters(rho.matrix());
        const RoofResult r = roof_upper_bound(rho, kAB, RoofObjective::Negativity, cfg);
        CHECK(r.value.value >= c - 1e-9);
        CHECK(r.value.value <= c + 1e-3);
        CHECK(r.value.method == Method::ConvexRoofUpper);
        const RoofResult rc = roof_upper_bound(rho, kAB, RoofObjective::Concurrence, cfg);
        CHECK(rc.value.value >= c - 1e-9);
        CHECK(rc.value.value <= c + 1e-3);
    }
}

TEST_CASE("Ou reduced state reaches one") {
    const DensityOperator rho = partial_trace(to_density(ou_state()), {0, 1});
    const RoofResult r = roof_upper_bound(rho, kAB, RoofObjective::Negativity, RoofConfig{});
    CHECK(r.rank == 3);
    CHECK(r.ensemble_size == 9);
    CHECK(r.value.value <= 1.001);
    CHECK(r.value.value >= 1.0 - 1e-9);
}

TEST_CASE("restarts are deterministic and monotone") {
    const DensityOperator rho = random_mixed(Dims({2, 3}), 3, 64);
    RoofConfig cfg;
    cfg.restarts = 6;
    cfg.seed = 17;
    const RoofResult a = roof_upper_bound(rho, kAB, RoofObjective::Negativity, cfg);
    cfg.threads = 3;
    const RoofResult b = roof_upper_bound(rho, kAB, RoofObjective::Negativity, cfg);
    CHECK(a.restart_values == b.restart_values);
    CHECK(a.value.value == b.value.value);
    REQUIRE(a.best_so_far.size() == 6);
    for (std::size_t i = 1; i < a.best_so_far.size(); ++i) CHECK(a.best_so_far[i] <= a.best_so_far[i - 1]);
    CHECK(a.best_so_far.back() == a.value.value);
    CHECK(a.value.value >= negativity(rho, kAB).value - 1e-9);

    // the winning decomposition still reconstructs rho
    const DecompositionPoint d(weighted_eigenvectors(rho), a.best_isometry);
    CHECK((d.reconstruct() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("lower end of the interval") {
    const DensityOperator rho = random_mixed(Dims({2, 3}), 2, 65);
    RoofConfig cfg;
    cfg.restarts = 2;
    const RoofResult plain = roof_upper_bound(rho, kAB, RoofObjective::Negativity, cfg);
    REQUIRE(plain.value.interval);
    CHECK(plain.value.interval->lower == doctest::Approx(negativity(rho, kAB).value).epsilon(1e-12));
    const RoofResult hinted = roof_upper_bound(rho, kAB, RoofObjective::Concurrence, cfg, 10.0);
    CHECK(hinted.value.interval->lower == hinted.value.value);
}

TEST_CASE("configuration errors") {
    const DensityOperator rho = random_mixed(Dims({2, 2}), 2, 66);
    RoofConfig cfg;
    cfg.restarts = 0;
    CHECK_THROWS_AS(roof_upper_bound(rho, kAB, RoofObjective::Negativity, cfg), ValidationError);
    cfg.restarts = 1;
    cfg.ensemble_size = 1;
    CHECK_THROWS_AS(roof_upper_bound(rho, kAB, RoofObjective::Negativity, cfg), ValidationError);
    CHECK_THROWS_AS(roof_upper_bound(rho, Partition::parse("0:2"), RoofObjective::Negativity, RoofConfig{}),
                    ValidationError);
}
