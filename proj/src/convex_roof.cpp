#include "qmono/convex_roof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "qmono/measures.hpp"
#include "qmono/random.hpp"

namespace qmono {

namespace {

constexpr double kReconstructionTolerance = 1e-8;
constexpr double kRankThreshold = 1e-12;

double re_inner(const Matrix& a, const Matrix& b) {
    return (a.array().conjugate() * b.array()).real().sum();
}

// Polar factor of Y, i.e. the closest isometry.
Matrix polar(const Matrix& y) {
    Eigen::JacobiSVD<Matrix> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

// Projection onto the tangent space of the Stiefel manifold at U.
Matrix project(const Matrix& u, const Matrix& z) {
    const Matrix uz = u.adjoint() * z;
    return z - u * (0.5 * (uz + uz.adjoint()));
}

Matrix random_isometry(int m, int r, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Matrix z(m, r);
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = Complex(gauss(rng), gauss(rng));
    }
    return polar(z);
}

// Value of p * measure(psi) for a member matrix and its Euclidean gradient
// G, in the sense d(value) = Re Tr(G^dagger dM).
double member_value(const Matrix& m, RoofObjective objective, Matrix* grad) {
    if (objective == RoofObjective::Negativity) {
        Eigen::JacobiSVD<Matrix> svd(m, grad ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0);
        const RealVector& s = svd.singularValues();
        const double nuclear = s.sum();
        const double frob2 = s.squaredNorm();
        if (grad) {
            Matrix uv = Matrix::Zero(m.rows(), m.cols());
            for (Eigen::Index k = 0; k < s.size(); ++k) {
                if (s(k) > 1e-15) uv += svd.matrixU().col(k) * svd.matrixV().col(k).adjoint();
            }
            *grad = 2.0 * nuclear * uv - 2.0 * m;
        }
        return std::max(0.0, nuclear * nuclear - frob2);
    }
    const Matrix gram = m * m.adjoint();
    const double p = gram.trace().real();
    const double q = std::max(0.0, p * p - gram.squaredNorm());
    const double value = std::sqrt(2.0 * q);
    if (grad) {
        if (value > 1e-14) {
            *grad = (4.0 * p * m - 4.0 * gram * m) / value;
        } else {
            *grad = Matrix::Zero(m.rows(), m.cols());
        }
    }
    return value;
}

class RoofProblem {
public:
    RoofProblem(const DensityOperator& rho, const Partition& p, RoofObjective objective)
        : rho_(rho.matrix()), layout_(rho.dims(), p), objective_(objective) {
        const auto spectrum = rho.spectrum();
        rank_ = static_cast<int>((spectrum.values.array() > kRankThreshold).count());
        weighted_ = Matrix(rho_.rows(), rank_);
        for (int k = 0; k < rank_; ++k) weighted_.col(k) = std::sqrt(spectrum.values(k)) * spectrum.vectors.col(k);
    }

    int rank() const { return rank_; }
    const Matrix& weighted() const { return weighted_; }

    // Objective at isometry U; fills the Euclidean gradient when requested.
    double evaluate(const Matrix& u, Matrix* grad) const {
        const Matrix members = u * weighted_.transpose();
        Matrix member_grads;
        if (grad) member_grads.resize(members.rows(), members.cols());
        double total = 0.0;
        Matrix g;
        for (Eigen::Index j = 0; j < members.rows(); ++j) {
            const Matrix m = layout_.to_matrix(members.row(j).transpose());
            total += member_value(m, objective_, grad ? &g : nullptr);
            if (grad) member_grads.row(j) = layout_.from_matrix(g).transpose();
        }
        if (grad) *grad = member_grads * weighted_.conjugate();
        return total;
    }

    void check_reconstruction(const Matrix& u) const {
        const Matrix rebuilt = DecompositionPoint(weighted_, u).reconstruct();
        const double err = (rebuilt - rho_).cwiseAbs().maxCoeff();
        if (!(err <= kReconstructionTolerance)) {
            std::ostringstream os;
            os << "convex roof: decomposition no longer reconstructs the state (error " << err << ")";
            throw NumericalError(os.str());
        }
    }

private:
    Matrix rho_;
    BipartiteLayout layout_;
    RoofObjective objective_;
    int rank_ = 0;
    Matrix weighted_;
};

struct RestartOutcome {
    double value = std::numeric_limits<double>::infinity();
    bool converged = false;
    Matrix isometry;
};

// Riemannian conjugate gradient (Polak-Ribiere+) on the Stiefel manifold with
// polar retraction and Armijo backtracking.
RestartOutcome descend(const RoofProblem& problem, Matrix u, const RoofConfig& cfg) {
    problem.check_reconstruction(u);
    Matrix euclid;
    double f = problem.evaluate(u, &euclid);
    Matrix g = project(u, euclid);
    Matrix d = -g;
    double step = 1.0;
    int quiet = 0;
    RestartOutcome out;

    for (int it = 0; it < cfg.max_iterations; ++it) {
        const double gnorm2 = re_inner(g, g);
        if (gnorm2 < 1e-24) {
            out.converged = true;
            break;
        }
        double slope = re_inner(g, d);
        if (slope >= 0.0) {
            d = -g;
            slope = -gnorm2;
        }

        double t = std::min(1e3, step * 2.0);
        Matrix u_next;
        double f_next = f;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            u_next = polar(Matrix(u + t * d));
            f_next = problem.evaluate(u_next, nullptr);
            if (f_next <= f + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // no descent along a steepest-descent direction: numerically stationary
            if (slope == -gnorm2) {
                out.converged = true;
                break;
            }
            d = -g;
            continue;
        }

        problem.check_reconstruction(u_next);
        Matrix euclid_next;
        f_next = problem.evaluate(u_next, &euclid_next);
        const Matrix g_next = project(u_next, euclid_next);
        const Matrix g_moved = project(u_next, g);
        const double beta = std::max(0.0, re_inner(g_next, g_next - g_moved) / gnorm2);
        d = -g_next + beta * project(u_next, d);

        const double change = f - f_next;
        u = std::move(u_next);
        g = g_next;
        f = f_next;
        step = t;
        quiet = change < cfg.tolerance ? quiet + 1 : 0;
        if (quiet >= 3) {
            out.converged = true;
            break;
        }
    }
    out.value = f;
    out.isometry = std::move(u);
    return out;
}

} // namespace

// --- DecompositionPoint -----------------------------------------------------

DecompositionPoint::DecompositionPoint(Matrix weighted_eigenvectors, Matrix isometry)
    : weighted_(std::move(weighted_eigenvectors)), isometry_(std::move(isometry)) {
    if (isometry_.cols() != weighted_.cols()) {
        throw ValidationError("decomposition isometry must have one column per eigenvector");
    }
    if (isometry_.rows() < isometry_.cols()) {
        throw ValidationError("ensemble size must be at least the rank");
    }
}

Matrix DecompositionPoint::unnormalized_members() const { return isometry_ * weighted_.transpose(); }

std::vector<double> DecompositionPoint::probabilities() const {
    const Matrix members = unnormalized_members();
    std::vector<double> p(static_cast<std::size_t>(members.rows()));
    for (Eigen::Index j = 0; j < members.rows(); ++j) p[static_cast<std::size_t>(j)] = members.row(j).squaredNorm();
    return p;
}

Matrix DecompositionPoint::reconstruct() const {
    const Matrix members = unnormalized_members();
    // sum_j |psi~_j><psi~_j| with psi~_j the transposed rows
    return members.transpose() * members.conjugate();
}

// --- public API ---------------------------------------------------------------

double weighted_pure_measure(const Matrix& member, RoofObjective objective) {
    return member_value(member, objective, nullptr);
}

RoofResult roof_upper_bound(const DensityOperator& rho, const Partition& p, RoofObjective objective,
                            const RoofConfig& cfg, std::optional<double> lower_hint) {
    p.require_covers(rho.dims().size());
    if (cfg.restarts < 1) throw ValidationError("convex roof: restarts must be >= 1");
    if (cfg.max_iterations < 0) throw ValidationError("convex roof: max_iterations must be >= 0");

    const RoofProblem problem(rho, p, objective);
    const int r = problem.rank();
    const int m = cfg.ensemble_size.value_or(r * r);
    if (m < r) {
        throw ValidationError("convex roof: ensemble size " + std::to_string(m) + " is below the rank " +
                              std::to_string(r));
    }

    RoofResult result;
    result.rank = r;
    result.ensemble_size = m;

    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
    if (r == 1) {
        // A single pure state: nothing to optimize.
        Matrix u = Matrix::Identity(1, 1);
        problem.check_reconstruction(u);
        outcomes.assign(1, RestartOutcome{problem.evaluate(u, nullptr), true, u});
        result.ensemble_size = 1;
    } else {
        auto run = [&](int k) {
            auto rng = stream_engine(cfg.seed, static_cast<std::uint64_t>(k));
            outcomes[static_cast<std::size_t>(k)] = descend(problem, random_isometry(m, r, rng), cfg);
        };
        const int threads = std::clamp(cfg.threads, 1, cfg.restarts);
        if (threads == 1) {
            for (int k = 0; k < cfg.restarts; ++k) run(k);
        } else {
            std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
            {
                std::vector<std::jthread> pool;
                for (int t = 0; t < threads; ++t) {
                    pool.emplace_back([&, t] {
                        try {
                            for (int k = t; k < cfg.restarts; k += threads) run(k);
                        } catch (...) {
                            errors[static_cast<std::size_t>(t)] = std::current_exception();
                        }
                    });
                }
            }
            for (const auto& e : errors) {
                if (e) std::rethrow_exception(e);
            }
        }
    }

    // Deterministic reduction: minimum, ties to the lowest restart index.
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        result.restart_values.push_back(outcomes[k].value);
        if (outcomes[k].value < best) {
            best = outcomes[k].value;
            result.best_restart = static_cast<int>(k);
        }
        result.best_so_far.push_back(best);
    }
    const RestartOutcome& winner = outcomes[static_cast<std::size_t>(result.best_restart)];
    result.best_isometry = winner.isometry;

    double lower = std::max(0.0, lower_hint.value_or(0.0));
    if (objective == RoofObjective::Negativity) {
        const double n = negativity(rho, p).value;
        if (best < n - 1e-9) {
            std::ostringstream os;
            os << "convex roof: value " << best << " fell below the negativity " << n;
            throw NumericalError(os.str());
        }
        lower = std::max(lower, n);
    }
    lower = std::min(lower, best);

    if (r == 1) {
        result.value = MeasureValue{best, Method::ConvexRoofUpper, Interval{best, best}, true};
    } else {
        result.value = MeasureValue{best, Method::ConvexRoofUpper, Interval{lower, best}, winner.converged};
    }
    return result;
}

} // namespace qmono
