#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qmono/errors.hpp"

namespace qmono {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Sorted, duplicate-free list of subsystem indices.
using IndexSet = std::vector<int>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPsdClip = 1e-10;

/// Subsystem dimensions of a multi-qudit register. Subsystem 0 is the most
/// significant digit of the composite (big-endian) index.
class Dims {
public:
    explicit Dims(std::vector<int> dims);

    std::size_t size() const noexcept { return dims_.size(); }
    int operator[](std::size_t i) const { return dims_[i]; }
    const std::vector<int>& values() const noexcept { return dims_; }
    std::size_t total() const noexcept { return total_; }

    /// Product of the dimensions of the listed subsystems.
    std::size_t total(const IndexSet& subsystems) const;

    /// Digit decomposition of a composite index.
    std::vector<int> digits(std::size_t index) const;
    std::size_t compose(const std::vector<int>& digits) const;

    Dims select(const IndexSet& subsystems) const;

    bool operator==(const Dims&) const = default;

private:
    std::vector<int> dims_;
    std::size_t total_ = 1;
};

std::string to_string(const Dims& dims);

class PureState {
public:
    /// Throws ValidationError unless the amplitudes are normalized within 1e-12.
    PureState(Dims dims, Vector amplitudes);

    /// Normalizes first; throws ValidationError on a zero vector.
    static PureState normalized(Dims dims, Vector amplitudes);

    const Dims& dims() const noexcept { return dims_; }
    const Vector& amplitudes() const noexcept { return amplitudes_; }

private:
    Dims dims_;
    Vector amplitudes_;
};

class DensityOperator {
public:
    /// Validates hermiticity, unit trace and positivity (eigenvalues >= -1e-10).
    DensityOperator(Dims dims, Matrix matrix);

    const Dims& dims() const noexcept { return dims_; }
    const Matrix& matrix() const noexcept { return matrix_; }

    /// Eigen-decomposition with eigenvalues in (-1e-10, 0) clipped to zero,
    /// eigenvalues descending.
    struct Spectrum {
        RealVector values;
        Matrix vectors;
    };
    Spectrum spectrum() const;

    bool is_pure(double tolerance = 1e-10) const;

private:
    Dims dims_;
    Matrix matrix_;
};

/// A bipartition of (some of) the register's subsystems into side A and side B.
class Partition {
public:
    Partition(IndexSet side_a, IndexSet side_b);

    /// Parses `i:jk...`, one digit per subsystem index, e.g. "0:12".
    static Partition parse(std::string_view text);

    /// Side A = {first}, side B = everything else.
    static Partition one_vs_rest(int first, std::size_t parties);

    const IndexSet& side_a() const noexcept { return a_; }
    const IndexSet& side_b() const noexcept { return b_; }

    bool covers(std::size_t parties) const noexcept;
    void require_within(std::size_t parties) const;
    void require_covers(std::size_t parties) const;

    std::string to_string() const;

private:
    IndexSet a_;
    IndexSet b_;
};

/// Maps each composite register index to (row, column) of the dA x dB matrix
/// obtained by grouping the subsystems of a partition that covers the register.
class BipartiteLayout {
public:
    BipartiteLayout(const Dims& dims, const Partition& partition);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Matrix to_matrix(const Vector& amplitudes) const;
    Vector from_matrix(const Matrix& m) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_of_;
    std::vector<std::size_t> col_of_;
};

struct SchmidtDecomposition {
    /// Squared Schmidt coefficients, descending, summing to one.
    RealVector coefficients;
    /// Columns are orthonormal vectors on side A (resp. side B), in the
    /// composite index order of the side's subsystems.
    Matrix left_basis;
    Matrix right_basis;

    std::size_t rank(double threshold = 1e-14) const;
};

DensityOperator to_density(const PureState& psi);

DensityOperator partial_trace(const DensityOperator& rho, const IndexSet& keep);

/// Transposes the indices of the subsystems in `subset`. The result is
/// Hermitian with unit trace but in general not positive.
Matrix partial_transpose(const DensityOperator& rho, const IndexSet& subset);
Matrix partial_transpose(const Matrix& m, const Dims& dims, const IndexSet& subset);

/// Sum of singular values.
double trace_norm(const Matrix& m);

SchmidtDecomposition schmidt(const PureState& psi, const Partition& p);

/// Rebuilds the register-ordered amplitude vector from a decomposition.
Vector reconstruct(const SchmidtDecomposition& s, const Dims& dims, const Partition& p);

/// Descending real spectrum; throws ValidationError if `m` deviates from
/// hermiticity by more than 1e-10.
RealVector hermitian_eigenvalues(const Matrix& m);

/// Kronecker product of two pure states (registers concatenated).
PureState tensor(const PureState& a, const PureState& b);

} // namespace qmono
