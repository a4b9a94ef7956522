#include "qmono/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qmono {

namespace {

void require_index_set(const IndexSet& set, std::size_t parties, const char* what) {
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (set[i] < 0 || static_cast<std::size_t>(set[i]) >= parties) {
            throw ValidationError(std::string(what) + ": subsystem index " + std::to_string(set[i]) +
                                  " out of range for " + std::to_string(parties) + " subsystems");
        }
        if (i > 0 && set[i] <= set[i - 1]) {
            throw ValidationError(std::string(what) + ": index set must be sorted and duplicate-free");
        }
    }
}

IndexSet normalize_set(IndexSet set) {
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
        throw ValidationError("index set contains duplicates");
    }
    return set;
}

} // namespace

// --- Dims -------------------------------------------------------------------

Dims::Dims(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw ValidationError("dims must be non-empty");
    }
    for (int d : dims_) {
        if (d < 2) {
            throw ValidationError("every subsystem dimension must be >= 2, got " + std::to_string(d));
        }
        total_ *= static_cast<std::size_t>(d);
    }
}

std::size_t Dims::total(const IndexSet& subsystems) const {
    std::size_t t = 1;
    for (int i : subsystems) t *= static_cast<std::size_t>(dims_.at(static_cast<std::size_t>(i)));
    return t;
}

std::vector<int> Dims::digits(std::size_t index) const {
    std::vector<int> out(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
        out[k] = static_cast<int>(index % static_cast<std::size_t>(dims_[k]));
        index /= static_cast<std::size_t>(dims_[k]);
    }
    return out;
}

std::size_t Dims::compose(const std::vector<int>& digits) const {
    std::size_t index = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        index = index * static_cast<std::size_t>(dims_[k]) + static_cast<std::size_t>(digits[k]);
    }
    return index;
}

Dims Dims::select(const IndexSet& subsystems) const {
    std::vector<int> out;
    out.reserve(subsystems.size());
    for (int i : subsystems) out.push_back(dims_.at(static_cast<std::size_t>(i)));
    return Dims(std::move(out));
}

std::string to_string(const Dims& dims) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
    os << ']';
    return os.str();
}

// --- PureState / DensityOperator -------------------------------------------

PureState::PureState(Dims dims, Vector amplitudes) : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != dims_.total()) {
        throw ValidationError("amplitude vector has length " + std::to_string(amplitudes_.size()) +
                              ", expected " + std::to_string(dims_.total()));
    }
    const double norm2 = amplitudes_.squaredNorm();
    if (std::abs(norm2 - 1.0) > kNormTolerance) {
        std::ostringstream os;
        os << "pure state is not normalized: sum |a|^2 = " << norm2;
        throw ValidationError(os.str());
    }
}

PureState PureState::normalized(Dims dims, Vector amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ValidationError("cannot normalize a zero or non-finite amplitude vector");
    }
    amplitudes /= n;
    return PureState(std::move(dims), std::move(amplitudes));
}

DensityOperator::DensityOperator(Dims dims, Matrix matrix) : dims_(std::move(dims)), matrix_(std::move(matrix)) {
    const auto n = static_cast<Eigen::Index>(dims_.total());
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw ValidationError("density matrix must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTolerance) {
        std::ostringstream os;
        os << "density matrix is not Hermitian (max deviation " << herm << ")";
        throw ValidationError(os.str());
    }
    const Complex tr = matrix_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTolerance) {
        std::ostringstream os;
        os << "density matrix trace is " << tr.real() << ", expected 1";
        throw ValidationError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdClip) {
        std::ostringstream os;
        os << "density matrix has negative eigenvalue " << es.eigenvalues().minCoeff();
        throw ValidationError(os.str());
    }
}

DensityOperator::Spectrum DensityOperator::spectrum() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_);
    const auto n = es.eigenvalues().size();
    Spectrum s{RealVector(n), Matrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        s.values(k) = std::max(0.0, es.eigenvalues()(n - 1 - k));
        s.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
    }
    return s;
}

bool DensityOperator::is_pure(double tolerance) const {
    return std::abs((matrix_ * matrix_).trace().real() - 1.0) <= tolerance;
}

// --- Partition ----------------------------------------------------------------

Partition::Partition(IndexSet side_a, IndexSet side_b)
    : a_(normalize_set(std::move(side_a))), b_(normalize_set(std::move(side_b))) {
    if (a_.empty() || b_.empty()) {
        throw ValidationError("both sides of a partition must be non-empty");
    }
    for (int i : a_) {
        if (i < 0) throw ValidationError("negative subsystem index in partition");
        if (std::binary_search(b_.begin(), b_.end(), i)) {
            throw ValidationError("partition sides overlap at subsystem " + std::to_string(i));
        }
    }
    for (int i : b_) {
        if (i < 0) throw ValidationError("negative subsystem index in partition");
    }
}

Partition Partition::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos || text.find(':', colon + 1) != std::string_view::npos) {
        throw InputError("partition must look like 'i:jk', got '" + std::string(text) + "'");
    }
    auto side = [&](std::string_view s) {
        IndexSet out;
        for (char c : s) {
            if (c < '0' || c > '9') {
                throw InputError("partition '" + std::string(text) + "' contains a non-digit character");
            }
            out.push_back(c - '0');
        }
        return out;
    };
    try {
        return Partition(side(text.substr(0, colon)), side(text.substr(colon + 1)));
    } catch (const ValidationError& e) {
        throw InputError("invalid partition '" + std::string(text) + "': " + e.what());
    }
}

Partition Partition::one_vs_rest(int first, std::size_t parties) {
    if (first < 0 || static_cast<std::size_t>(first) >= parties) {
        throw ValidationError("first subsystem " + std::to_string(first) + " out of range");
    }
    IndexSet rest;
    for (std::size_t i = 0; i < parties; ++i) {
        if (static_cast<int>(i) != first) rest.push_back(static_cast<int>(i));
    }
    return Partition({first}, std::move(rest));
}

bool Partition::covers(std::size_t parties) const noexcept {
    if (a_.size() + b_.size() != parties) return false;
    for (int i : a_) if (static_cast<std::size_t>(i) >= parties) return false;
    for (int i : b_) if (static_cast<std::size_t>(i) >= parties) return false;
    return true;
}

void Partition::require_within(std::size_t parties) const {
    require_index_set(a_, parties, "partition side A");
    require_index_set(b_, parties, "partition side B");
}

void Partition::require_covers(std::size_t parties) const {
    require_within(parties);
    if (!covers(parties)) {
        throw ValidationError("partition " + to_string() + " does not cover all " + std::to_string(parties) +
                              " subsystems");
    }
}

std::string Partition::to_string() const {
    std::string s;
    for (int i : a_) s += std::to_string(i);
    s += ':';
    for (int i : b_) s += std::to_string(i);
    return s;
}

// --- BipartiteLayout --------------------------------------------------------

BipartiteLayout::BipartiteLayout(const Dims& dims, const Partition& partition) {
    partition.require_covers(dims.size());
    const Dims da = dims.select(partition.side_a());
    const Dims db = dims.select(partition.side_b());
    rows_ = da.total();
    cols_ = db.total();
    row_of_.resize(dims.total());
    col_of_.resize(dims.total());
    std::vector<int> ra(partition.side_a().size());
    std::vector<int> rb(partition.side_b().size());
    for (std::size_t idx = 0; idx < dims.total(); ++idx) {
        const auto d = dims.digits(idx);
        for (std::size_t k = 0; k < ra.size(); ++k) ra[k] = d[static_cast<std::size_t>(partition.side_a()[k])];
        for (std::size_t k = 0; k < rb.size(); ++k) rb[k] = d[static_cast<std::size_t>(partition.side_b()[k])];
        row_of_[idx] = da.compose(ra);
        col_of_[idx] = db.compose(rb);
    }
}

Matrix BipartiteLayout::to_matrix(const Vector& amplitudes) const {
    Matrix m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (std::size_t idx = 0; idx < row_of_.size(); ++idx) {
        m(static_cast<Eigen::Index>(row_of_[idx]), static_cast<Eigen::Index>(col_of_[idx])) =
            amplitudes(static_cast<Eigen::Index>(idx));
    }
    return m;
}

Vector BipartiteLayout::from_matrix(const Matrix& m) const {
    Vector v(static_cast<Eigen::Index>(row_of_.size()));
    for (std::size_t idx = 0; idx < row_of_.size(); ++idx) {
        v(static_cast<Eigen::Index>(idx)) =
            m(static_cast<Eigen::Index>(row_of_[idx]), static_cast<Eigen::Index>(col_of_[idx]));
    }
    return v;
}

// --- operations ---------------------------------------------------------------

std::size_t SchmidtDecomposition::rank(double threshold) const {
    return static_cast<std::size_t>((coefficients.array() > threshold).count());
}

DensityOperator to_density(const PureState& psi) {
    Matrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
    // exact hermiticity; the outer product is only Hermitian up to rounding
    rho = (0.5 * (rho + rho.adjoint())).eval();
    return DensityOperator(psi.dims(), std::move(rho));
}

DensityOperator partial_trace(const DensityOperator& rho, const IndexSet& keep) {
    const Dims& dims = rho.dims();
    if (keep.empty()) throw ValidationError("partial_trace: keep set must be non-empty");
    require_index_set(keep, dims.size(), "partial_trace");

    IndexSet traced;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (!std::binary_search(keep.begin(), keep.end(), static_cast<int>(i))) traced.push_back(static_cast<int>(i));
    }
    const Dims kept_dims = dims.select(keep);
    if (traced.empty()) return DensityOperator(kept_dims, rho.matrix());
    const Dims traced_dims = dims.select(traced);

    const auto nk = static_cast<Eigen::Index>(kept_dims.total());
    Matrix out = Matrix::Zero(nk, nk);
    std::vector<int> full_row(dims.size());
    std::vector<int> full_col(dims.size());
    for (Eigen::Index r = 0; r < nk; ++r) {
        const auto rd = kept_dims.digits(static_cast<std::size_t>(r));
        for (Eigen::Index c = 0; c < nk; ++c) {
            const auto cd = kept_dims.digits(static_cast<std::size_t>(c));
            for (std::size_t k = 0; k < keep.size(); ++k) {
                full_row[static_cast<std::size_t>(keep[k])] = rd[k];
                full_col[static_cast<std::size_t>(keep[k])] = cd[k];
            }
            Complex acc{0.0, 0.0};
            for (std::size_t t = 0; t < traced_dims.total(); ++t) {
                const auto td = traced_dims.digits(t);
                for (std::size_t k = 0; k < traced.size(); ++k) {
                    full_row[static_cast<std::size_t>(traced[k])] = td[k];
                    full_col[static_cast<std::size_t>(traced[k])] = td[k];
                }
                acc += rho.matrix()(static_cast<Eigen::Index>(dims.compose(full_row)),
                                    static_cast<Eigen::Index>(dims.compose(full_col)));
            }
            out(r, c) = acc;
        }
    }
    out = (0.5 * (out + out.adjoint())).eval();
    return DensityOperator(kept_dims, std::move(out));
}

Matrix partial_transpose(const Matrix& m, const Dims& dims, const IndexSet& subset) {
    require_index_set(subset, dims.size(), "partial_transpose");
    const auto n = static_cast<Eigen::Index>(dims.total());
    if (m.rows() != n || m.cols() != n) throw ValidationError("partial_transpose: matrix size does not match dims");
    Matrix out(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto rd = dims.digits(static_cast<std::size_t>(r));
        for (Eigen::Index c = 0; c < n; ++c) {
            auto nr = rd;
            auto nc = dims.digits(static_cast<std::size_t>(c));
            for (int s : subset) std::swap(nr[static_cast<std::size_t>(s)], nc[static_cast<std::size_t>(s)]);
            out(static_cast<Eigen::Index>(dims.compose(nr)), static_cast<Eigen::Index>(dims.compose(nc))) = m(r, c);
        }
    }
    return out;
}

Matrix partial_transpose(const DensityOperator& rho, const IndexSet& subset) {
    return partial_transpose(rho.matrix(), rho.dims(), subset);
}

double trace_norm(const Matrix& m) {
    if (m.rows() != m.cols()) throw ValidationError("trace_norm: matrix must be square");
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().sum();
}

SchmidtDecomposition schmidt(const PureState& psi, const Partition& p) {
    const BipartiteLayout layout(psi.dims(), p);
    const Matrix m = layout.to_matrix(psi.amplitudes());
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtDecomposition out;
    out.coefficients = svd.singularValues().array().square().matrix();
    out.left_basis = svd.matrixU();
    out.right_basis = svd.matrixV().conjugate();
    return out;
}

Vector reconstruct(const SchmidtDecomposition& s, const Dims& dims, const Partition& p) {
    const BipartiteLayout layout(dims, p);
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(layout.rows()), static_cast<Eigen::Index>(layout.cols()));
    for (Eigen::Index k = 0; k < s.coefficients.size(); ++k) {
        m += std::sqrt(s.coefficients(k)) * s.left_basis.col(k) * s.right_basis.col(k).transpose();
    }
    return layout.from_matrix(m);
}

RealVector hermitian_eigenvalues(const Matrix& m) {
    if (m.rows() != m.cols()) throw ValidationError("hermitian_eigenvalues: matrix must be square");
    const double herm = m.size() ? (m - m.adjoint()).cwiseAbs().maxCoeff() : 0.0;
    if (herm > 1e-10) {
        std::ostringstream os;
        os << "hermitian_eigenvalues: matrix is not Hermitian (max deviation " << herm << ")";
        throw ValidationError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().reverse();
}

PureState tensor(const PureState& a, const PureState& b) {
    std::vector<int> dims = a.dims().values();
    dims.insert(dims.end(), b.dims().values().begin(), b.dims().values().end());
    const auto na = a.amplitudes().size();
    const auto nb = b.amplitudes().size();
    Vector v(na * nb);
    for (Eigen::Index i = 0; i < na; ++i) v.segment(i * nb, nb) = a.amplitudes()(i) * b.amplitudes();
    return PureState::normalized(Dims(std::move(dims)), std::move(v));
}

} // namespace qmono
