#include "qmono/states.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "qmono/random.hpp"

namespace qmono {

namespace {

void require_normalized_weights(const std::array<double, 5>& w, const char* what) {
    double s = 0.0;
    for (double x : w) s += x * x;
    if (std::abs(s - 1.0) > 1e-10) {
        std::ostringstream os;
        os << what << ": squared parameters sum to " << s << ", expected 1";
        throw ValidationError(os.str());
    }
}

Vector basis_superposition(const Dims& dims, const std::vector<std::pair<std::vector<int>, Complex>>& terms) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dims.total()));
    for (const auto& [digits, amp] : terms) v(static_cast<Eigen::Index>(dims.compose(digits))) += amp;
    return v;
}

} // namespace

PureState w_state(int n) {
    if (n < 2) throw ValidationError("w_state needs n >= 2");
    const Dims dims(std::vector<int>(static_cast<std::size_t>(n), 2));
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dims.total()));
    for (int k = 0; k < n; ++k) v(Eigen::Index{1} << k) = 1.0;
    return PureState::normalized(dims, std::move(v));
}

PureState ghz_state(int n) {
    if (n < 2) throw ValidationError("ghz_state needs n >= 2");
    const Dims dims(std::vector<int>(static_cast<std::size_t>(n), 2));
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dims.total()));
    v(0) = 1.0;
    v(v.size() - 1) = 1.0;
    return PureState::normalized(dims, std::move(v));
}

PureState example1_state(const std::array<double, 5>& p, double theta) {
    for (double x : p) {
        if (!(x > 0.0)) throw ValidationError("example1_state: every p_i must be positive");
    }
    if (theta < 0.0 || theta >= M_PI) throw ValidationError("example1_state: theta must lie in [0, pi)");
    require_normalized_weights(p, "example1_state");
    const Dims dims({2, 2, 2});
    Vector v = basis_superposition(dims, {{{0, 0, 0}, p[0] * std::polar(1.0, theta)},
                                          {{0, 0, 1}, p[1]},
                                          {{0, 1, 0}, p[2]},
                                          {{1, 0, 0}, p[3]},
                                          {{1, 1, 1}, p[4]}});
    return PureState::normalized(dims, std::move(v));
}

std::array<double, 5> example1_paper_parameters() {
    return {0.2, std::sqrt(15.0) / 5.0, 0.4, 0.4, 0.2};
}

PureState gsd_state(const std::array<double, 5>& t, double phi) {
    for (double x : t) {
        if (x < 0.0) throw ValidationError("gsd_state: weights must be non-negative");
    }
    require_normalized_weights(t, "gsd_state");
    const Dims dims({2, 2, 2});
    Vector v = basis_superposition(dims, {{{0, 0, 0}, t[0]},
                                          {{1, 0, 0}, t[1] * std::polar(1.0, phi)},
                                          {{1, 1, 0}, t[2]},
                                          {{1, 0, 1}, t[3]},
                                          {{1, 1, 1}, t[4]}});
    return PureState::normalized(dims, std::move(v));
}

std::array<double, 5> gsd_example2_parameters() {
    const double a = std::sqrt(0.2);
    return {a, 0.0, std::sqrt(0.4), a, a};
}

GsdClosedForms gsd_closed_forms(const std::array<double, 5>& t) {
    return {2.0 * t[0] * std::sqrt(t[2] * t[2] + t[3] * t[3] + t[4] * t[4]), 2.0 * t[0] * t[2], 2.0 * t[0] * t[3]};
}

PureState ou_state() {
    const Dims dims({3, 3, 3});
    Vector v = basis_superposition(dims, {{{0, 1, 2}, 1.0},
                                          {{0, 2, 1}, -1.0},
                                          {{1, 2, 0}, 1.0},
                                          {{1, 0, 2}, -1.0},
                                          {{2, 0, 1}, 1.0},
                                          {{2, 1, 0}, -1.0}});
    return PureState::normalized(dims, std::move(v));
}

PureState kim_sanders_state() {
    const Dims dims({3, 2, 2});
    const double r2 = std::sqrt(2.0);
    Vector v = basis_superposition(dims, {{{0, 1, 0}, r2}, {{1, 0, 1}, r2}, {{2, 0, 0}, 1.0}, {{2, 1, 1}, 1.0}});
    return PureState::normalized(dims, std::move(v));
}

PureState haar_random_pure(const Dims& dims, std::uint64_t seed, std::uint64_t draw) {
    auto rng = stream_engine(seed, draw);
    std::normal_distribution<double> gauss;
    Vector v(static_cast<Eigen::Index>(dims.total()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(gauss(rng), gauss(rng));
    return PureState::normalized(dims, std::move(v));
}

DensityOperator random_mixed(const Dims& dims, int rank, std::uint64_t seed, std::uint64_t draw) {
    if (rank < 1 || static_cast<std::size_t>(rank) > dims.total()) {
        throw ValidationError("random_mixed: rank must lie in [1, " + std::to_string(dims.total()) + "]");
    }
    if (rank == 1) return to_density(haar_random_pure(dims, seed, draw));
    std::vector<int> extended = dims.values();
    extended.push_back(rank);
    const PureState purification = haar_random_pure(Dims(extended), seed, draw);
    IndexSet keep(dims.size());
    std::iota(keep.begin(), keep.end(), 0);
    return partial_trace(to_density(purification), keep);
}

std::optional<PureState> builtin_state(const std::string& name) {
    if (name == "w3") return w_state(3);
    if (name == "ghz3") return ghz_state(3);
    if (name == "ghz4") return ghz_state(4);
    if (name == "example1") return example1_state(example1_paper_parameters(), 0.0);
    if (name == "gsd-example2") return gsd_state(gsd_example2_parameters(), 0.0);
    if (name == "ou") return ou_state();
    if (name == "kim-sanders") return kim_sanders_state();
    return std::nullopt;
}

std::vector<std::string> builtin_state_names() {
    return {"w3", "ghz3", "ghz4", "example1", "gsd-example2", "ou", "kim-sanders"};
}

} // namespace qmono
