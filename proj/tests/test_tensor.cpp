#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qmono/errors.hpp"
#include "qmono/states.hpp"
#include "qmono/tensor.hpp"

using namespace qmono;

namespace {

PureState basis(const std::vector<int>& dims, std::size_t index) {
    Dims d(dims);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(d.total()));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(d, v);
}

PureState bell() {
    Vector v = Vector::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return PureState(Dims({2, 2}), v);
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("dims digits are big-endian") {
    Dims d({2, 3, 2});
    CHECK(d.total() == 12);
    CHECK(d.digits(7) == std::vector<int>{1, 0, 1});
    CHECK(d.compose({1, 2, 1}) == 11);
    CHECK(d.total({0, 2}) == 4);
    CHECK_THROWS_AS(Dims({2, 1}), ValidationError);
    CHECK_THROWS_AS(Dims(std::vector<int>{}), ValidationError);
}

TEST_CASE("state validation") {
    Vector v = Vector::Zero(4);
    v(0) = 1.0;
    v(1) = 1e-3;
    CHECK_THROWS_AS(PureState(Dims({2, 2}), v), ValidationError);
    CHECK_NOTHROW(PureState::normalized(Dims({2, 2}), v));
    CHECK_THROWS_AS(PureState(Dims({2, 2}), Vector::Zero(3)), ValidationError);

    Matrix bad = Matrix::Identity(2, 2) * 0.5;
    bad(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityOperator(Dims({2}), bad), ValidationError);
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.1;
    neg(1, 1) = -0.1;
    CHECK_THROWS_AS(DensityOperator(Dims({2}), neg), ValidationError);
    Matrix noisy = Matrix::Zero(2, 2);
    noisy(0, 0) = 1.0 + 1e-13;
    noisy(1, 1) = -1e-13;
    DensityOperator ok(Dims({2}), noisy);
    CHECK(ok.spectrum().values(1) == 0.0);
}

TEST_CASE("partition parsing") {
    const Partition p = Partition::parse("0:12");
    CHECK(p.side_a() == IndexSet{0});
    CHECK(p.side_b() == IndexSet{1, 2});
    CHECK(p.covers(3));
    CHECK_FALSE(p.covers(4));
    CHECK(p.to_string() == "0:12");
    CHECK_THROWS_AS(Partition::parse("012"), InputError);
    CHECK_THROWS_AS(Partition::parse("0:1x"), InputError);
    CHECK_THROWS_AS(Partition::parse("0:01"), InputError);
    CHECK_THROWS_AS(Partition::parse(":12"), InputError);
}

TEST_CASE("to_density") {
    const DensityOperator r0 = to_density(basis({2}, 0));
    CHECK(std::abs(r0.matrix()(0, 0) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(r0.matrix()(1, 1)) < 1e-15);

    const Matrix b = to_density(bell()).matrix();
    for (int i : {0, 3}) {
        for (int j : {0, 3}) CHECK(std::abs(b(i, j) - Complex(0.5)) < 1e-15);
    }
    CHECK(std::abs(b(1, 1)) < 1e-15);

    const DensityOperator w = to_density(w_state(3));
    CHECK(std::abs(w.matrix().trace().real() - 1.0) < 1e-12);
    const RealVector ev = hermitian_eigenvalues(w.matrix());
    CHECK(std::abs(ev(0) - 1.0) < 1e-10);
    CHECK(ev.tail(7).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("partial trace examples") {
    const DensityOperator ra = partial_trace(to_density(bell()), {0});
    CHECK(max_abs(ra.matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-15);

    const DensityOperator wa = partial_trace(to_density(w_state(3)), {0});
    CHECK(std::abs(wa.matrix()(0, 0).real() - 2.0 / 3.0) < 1e-12);
    CHECK(std::abs(wa.matrix()(1, 1).real() - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(wa.matrix()(0, 1)) < 1e-12);

    const DensityOperator a = random_mixed(Dims({2}), 2, 1);
    const DensityOperator b = random_mixed(Dims({3}), 2, 2);
    const DensityOperator c = random_mixed(Dims({2}), 2, 3);
    const Matrix abc = oracle::kron(oracle::kron(a.matrix(), b.matrix()), c.matrix());
    const DensityOperator prod(Dims({2, 3, 2}), abc);
    CHECK(max_abs(partial_trace(prod, {0, 1}).matrix() - oracle::kron(a.matrix(), b.matrix())) < 1e-14);
    CHECK(max_abs(partial_trace(prod, {0, 2}).matrix() - oracle::kron(a.matrix(), c.matrix())) < 1e-14);

    CHECK_THROWS_AS(partial_trace(prod, {}), ValidationError);
    CHECK_THROWS_AS(partial_trace(prod, {3}), ValidationError);
}

TEST_CASE("partial trace matches the sandwich oracle") {
    const std::vector<int> dims{2, 3, 2};
    const std::vector<IndexSet> keeps{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    for (std::uint64_t k = 0; k < 20; ++k) {
        const DensityOperator rho = random_mixed(Dims(dims), 3, 77, k);
        for (const auto& keep : keeps) {
            const Matrix expect = oracle::partial_trace(rho.matrix(), dims, keep);
            CHECK(max_abs(partial_trace(rho, keep).matrix() - expect) < 1e-13);
        }
    }
}

TEST_CASE("partial trace preserves the trace") {
    for (std::uint64_t k = 0; k < 1000; ++k) {
        const int rank = 1 + static_cast<int>(k % 8);
        const DensityOperator rho = random_mixed(Dims({2, 2, 2}), rank, 5, k);
        const IndexSet keep = k % 3 == 0 ? IndexSet{0} : (k % 3 == 1 ? IndexSet{1, 2} : IndexSet{0, 2});
        const double before = rho.matrix().trace().real();
        const double after = partial_trace(rho, keep).matrix().trace().real();
        REQUIRE(std::abs(before - after) < 1e-12);
    }
}

TEST_CASE("partial transpose") {
    const Matrix pt = partial_transpose(to_density(bell()), {0});
    const RealVector ev = hermitian_eigenvalues(pt);
    CHECK(std::abs(ev(0) - 0.5) < 1e-12);
    CHECK(std::abs(ev(2) - 0.5) < 1e-12);
    CHECK(std::abs(ev(3) + 0.5) < 1e-12);
    CHECK(std::abs(trace_norm(pt) - 2.0) < 1e-12);

    const DensityOperator a = random_mixed(Dims({2}), 2, 11);
    const DensityOperator b = random_mixed(Dims({2}), 2, 12);
    const DensityOperator prod(Dims({2, 2}), oracle::kron(a.matrix(), b.matrix()));
    const Matrix ppt = partial_transpose(prod, {0});
    CHECK(max_abs(ppt - oracle::kron(a.matrix().transpose(), b.matrix())) < 1e-15);
    CHECK(hermitian_eigenvalues(ppt).minCoeff() > -1e-12);

    const std::vector<int> dims{3, 2, 2};
    for (std::uint64_t k = 0; k < 20; ++k) {
        const DensityOperator rho = random_mixed(Dims(dims), 4, 99, k);
        for (const IndexSet& s : std::vector<IndexSet>{{0}, {1}, {0, 2}, {1, 2}}) {
            const Matrix m = partial_transpose(rho, s);
            CHECK(max_abs(m - oracle::partial_transpose(rho.matrix(), dims, s)) < 1e-15);
            CHECK(max_abs(partial_transpose(m, rho.dims(), s) - rho.matrix()) == 0.0);
            CHECK(max_abs(m - m.adjoint()) < 1e-15);
            CHECK(std::abs(m.trace().real() - 1.0) < 1e-12);
        }
    }
    CHECK_THROWS_AS(partial_transpose(prod, {2}), ValidationError);
}

TEST_CASE("trace norm") {
    CHECK(std::abs(trace_norm(Matrix::Identity(5, 5)) - 5.0) < 1e-12);
    for (std::uint64_t k = 0; k < 50; ++k) {
        CHECK(std::abs(trace_norm(random_mixed(Dims({2, 3}), 1 + static_cast<int>(k % 6), 3, k).matrix()) - 1.0) <
              1e-12);
    }
    CHECK_THROWS_AS(trace_norm(Matrix::Zero(2, 3)), ValidationError);
}

TEST_CASE("schmidt decomposition") {
    const PureState prod = tensor(basis({2}, 1), basis({3}, 2));
    const auto sp = schmidt(prod, Partition::parse("0:1"));
    CHECK(sp.rank() == 1);
    CHECK(std::abs(sp.coefficients(0) - 1.0) < 1e-12);

    const auto sb = schmidt(bell(), Partition::parse("0:1"));
    CHECK(std::abs(sb.coefficients(0) - 0.5) < 1e-12);
    CHECK(std::abs(sb.coefficients(1) - 0.5) < 1e-12);

    const auto so = schmidt(ou_state(), Partition::parse("0:12"));
    CHECK(so.coefficients.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(so.coefficients(i) - 1.0 / 3.0) < 1e-12);

    CHECK_THROWS_AS(schmidt(ou_state(), Partition::parse("0:1")), ValidationError);
}

TEST_CASE("schmidt of Haar states sums to one and reconstructs") {
    const std::vector<std::pair<std::vector<int>, std::string>> cases{
        {{2, 2}, "0:1"}, {{2, 3, 2}, "1:02"}, {{3, 3}, "1:0"}, {{2, 2, 2, 2}, "02:13"}};
    for (const auto& [dims, cut] : cases) {
        const Partition p = Partition::parse(cut);
        for (std::uint64_t k = 0; k < 50; ++k) {
            const PureState psi = haar_random_pure(Dims(dims), 8, k);
            const auto s = schmidt(psi, p);
            CHECK(std::abs(s.coefficients.sum() - 1.0) < 1e-10);
            for (Eigen::Index i = 1; i < s.coefficients.size(); ++i) CHECK(s.coefficients(i) <= s.coefficients(i - 1));
            CHECK((reconstruct(s, psi.dims(), p) - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("hermitian eigenvalues") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0 / 3.0;
    d(1, 1) = 2.0 / 3.0;
    const RealVector ev = hermitian_eigenvalues(d);
    CHECK(std::abs(ev(0) - 2.0 / 3.0) < 1e-15);
    CHECK(std::abs(ev(1) - 1.0 / 3.0) < 1e-15);

    Matrix sy(2, 2);
    sy << 0.0, Complex(0, -1), Complex(0, 1), 0.0;
    const RealVector ey = hermitian_eigenvalues(sy);
    CHECK(std::abs(ey(0) - 1.0) < 1e-15);
    CHECK(std::abs(ey(1) + 1.0) < 1e-15);

    Matrix nh = Matrix::Zero(2, 2);
    nh(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eigenvalues(nh), ValidationError);

    for (std::uint64_t k = 0; k < 100; ++k) {
        const RealVector e = hermitian_eigenvalues(to_density(haar_random_pure(Dims({2, 3}), 4, k)).matrix());
        CHECK(std::abs(e(0) - 1.0) < 1e-10);
        CHECK(e.tail(5).cwiseAbs().maxCoeff() < 1e-10);
    }
}
