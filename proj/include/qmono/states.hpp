#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmono/tensor.hpp"

namespace qmono {

/// (|10..0> + |01..0> + ... + |0..01>) / sqrt(n)
PureState w_state(int n);

/// (|0..0> + |1..1>) / sqrt(2)
PureState ghz_state(int n);

/// p1 e^{i theta}|000> + p2|001> + p3|010> + p4|100> + p5|111>
PureState example1_state(const std::array<double, 5>& p, double theta);

/// The Example-1 instance p1 = p5 = 1/5, p2 = sqrt(15)/5, p3 = p4 = 2/5, theta = 0.
std::array<double, 5> example1_paper_parameters();

/// Three-qubit generalized Schmidt form with weights t0..t4 and phase phi, laid
/// out so that the pair AB carries t2 and the pair AC carries t3:
///   t0|000> + t1 e^{i phi}|100> + t2|110> + t3|101> + t4|111>.
PureState gsd_state(const std::array<double, 5>& t, double phi);

/// t0 = t3 = t4 = sqrt(1/5), t2 = sqrt(2/5), t1 = 0.
std::array<double, 5> gsd_example2_parameters();

/// Closed forms for the generalized Schmidt family (CREN = negativity here).
struct GsdClosedForms {
    double a_bc;
    double ab;
    double ac;
};
GsdClosedForms gsd_closed_forms(const std::array<double, 5>& t);

/// Totally antisymmetric three-qutrit state (|012> - |021> + |120> - |102> + |201> - |210>) / sqrt(6).
PureState ou_state();

/// (sqrt2|010> + sqrt2|101> + |200> + |211>) / sqrt(6) on a 3 x 2 x 2 register.
PureState kim_sanders_state();

/// Haar-distributed pure state: normalized complex Gaussian vector, one
/// independent stream per (seed, draw).
PureState haar_random_pure(const Dims& dims, std::uint64_t seed, std::uint64_t draw = 0);

/// Reduced state of a Haar-random purification with `rank`-dimensional ancilla.
DensityOperator random_mixed(const Dims& dims, int rank, std::uint64_t seed, std::uint64_t draw = 0);

/// Builtin names: w3, ghz3, ghz4, example1, gsd-example2, ou, kim-sanders.
std::optional<PureState> builtin_state(const std::string& name);
std::vector<std::string> builtin_state_names();

} // namespace qmono
