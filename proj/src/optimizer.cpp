#include "signalscope/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace signalscope {

namespace {

constexpr std::uint64_t kRestartStride = 0x9E3779B97F4A7C15ULL;
constexpr double kArmijo = 1e-4;
constexpr double kMinLineStep = 1e-14;
constexpr double kStallGradTol = 1e-6;

void check_config(const SearchConfig& config) {
    if (config.restarts < 1) {
        throw std::invalid_argument("search needs at least one restart");
    }
    if (config.max_iterations < 1) {
        throw std::invalid_argument("search needs at least one iteration");
    }
    if (!(config.tolerance > 0.0)) {
        throw std::invalid_argument("search tolerance must be positive");
    }
}

std::mt19937_64 restart_rng(const SearchConfig& config, int restart) {
    return std::mt19937_64(config.seed +
                           kRestartStride * static_cast<std::uint64_t>(restart + 1));
}

// Gradient ascent with Barzilai-Borwein trial steps cut back until the
// Armijo condition holds. Converged when the gradient is tiny or the
// objective stops improving beyond the configured tolerance.
template <typename ValueFn, typename ValueGradFn>
bool ascend(const ValueFn& value_of, const ValueGradFn& value_and_gradient,
            Eigen::VectorXd& params, double& value, const SearchConfig& config,
            double grad_tol) {
    Eigen::VectorXd gradient;
    value = value_and_gradient(params, gradient);
    Eigen::VectorXd prev_params;
    Eigen::VectorXd prev_gradient;
    bool have_history = false;
    int stalled_steps = 0;
    for (int iter = 0; iter < config.max_iterations; ++iter) {
        const double grad_max = gradient.lpNorm<Eigen::Infinity>();
        if (grad_max <= grad_tol) {
            return true;
        }
        double step = 1.0;
        if (have_history) {
            const Eigen::VectorXd dp = params - prev_params;
            const Eigen::VectorXd dg = gradient - prev_gradient;
            const double curvature = std::abs(dp.dot(dg));
            if (curvature > 1e-300) {
                step = std::clamp(dp.squaredNorm() / curvature, 1e-12, 1e3);
            }
        }
        const double slope = gradient.squaredNorm();
        bool moved = false;
        while (step >= kMinLineStep) {
            const Eigen::VectorXd trial = params + step * gradient;
            if (value_of(trial) >= value + kArmijo * step * slope) {
                prev_params = std::move(params);
                prev_gradient = gradient;
                have_history = true;
                params = trial;
                const double previous = value;
                value = value_and_gradient(params, gradient);
                stalled_steps =
                    value - previous <= config.tolerance ? stalled_steps + 1 : 0;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            return grad_max <= kStallGradTol;
        }
        if (stalled_steps >= 3) {
            return true;  // objective no longer improves beyond tolerance
        }
    }
    return false;
}

Vector embedded(const PureState& state, Eigen::Index dim) {
    if (state.dim() > dim) {
        throw std::invalid_argument("search dimension smaller than the states");
    }
    Vector padded = Vector::Zero(dim);
    padded.head(state.dim()) = state.amplitudes();
    return padded;
}

Vector decode_complex(const Eigen::VectorXd& params, Eigen::Index offset,
                      Eigen::Index dim) {
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        v(i) = Complex(params(offset + 2 * i), params(offset + 2 * i + 1));
    }
    return v;
}

void encode_complex(const Vector& v, Eigen::Index offset, Eigen::VectorXd& params) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        params(offset + 2 * i) = v(i).real();
        params(offset + 2 * i + 1) = v(i).imag();
    }
}

// Unit vector deterministically orthogonal to o1 (used when the second
// parameter vector collapses onto the first).
Vector orthogonal_fallback(const Vector& o1) {
    for (Eigen::Index j = 0; j < o1.size(); ++j) {
        Vector candidate = Vector::Zero(o1.size());
        candidate(j) = 1.0;
        candidate -= o1 * o1.dot(candidate);
        const double norm = candidate.norm();
        if (norm > 0.5) {
            return candidate / norm;
        }
    }
    throw std::runtime_error("no orthogonal direction found");
}

// The searched pair: o1 free on the unit sphere, o2 = c o1 + sqrt(1-c^2) u
// with u a free unit vector orthogonal to o1, so inner(o1, o2) = c exactly.
std::pair<Vector, Vector> decode_pair(const Eigen::VectorXd& params,
                                      Eigen::Index dim, double c) {
    Vector v = decode_complex(params, 0, dim);
    double norm = v.norm();
    Vector o1 = norm > 1e-12 ? Vector(v / norm) : Vector(Vector::Unit(dim, 0));

    Vector w = decode_complex(params, 2 * dim, dim);
    w -= o1 * o1.dot(w);
    norm = w.norm();
    Vector u = norm > 1e-10 ? Vector(w / norm) : orthogonal_fallback(o1);

    Vector o2 = c * o1 + std::sqrt(std::max(0.0, 1.0 - c * c)) * u;
    return {std::move(o1), std::move(o2)};
}

}  // namespace

GramSearchResult gram_constrained_max(const StatePair& targets,
                                      double forced_overlap,
                                      const SearchConfig& config) {
    check_config(config);
    if (!(forced_overlap >= 0.0 && forced_overlap <= 1.0)) {
        throw std::invalid_argument("forced overlap must lie in [0, 1]");
    }
    const Eigen::Index dim = targets.psi.dim();
    const Vector t1 = targets.psi.amplitudes();
    const Vector t2 = targets.phi.amplitudes();

    const auto objective = [&](const Eigen::VectorXd& params) {
        const auto [o1, o2] = decode_pair(params, dim, forced_overlap);
        return 0.5 * (t1.dot(o1).real() + t2.dot(o2).real());
    };
    const auto objective_with_gradient = [&](const Eigen::VectorXd& params,
                                             Eigen::VectorXd& gradient) {
        const double h = 1e-6;
        gradient.resize(params.size());
        Eigen::VectorXd probe = params;
        for (Eigen::Index i = 0; i < params.size(); ++i) {
            probe(i) = params(i) + h;
            const double above = objective(probe);
            probe(i) = params(i) - h;
            const double below = objective(probe);
            probe(i) = params(i);
            gradient(i) = (above - below) / (2.0 * h);
        }
        return objective(params);
    };

    Eigen::VectorXd best_params;
    double best_value = -std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < config.restarts; ++restart) {
        Eigen::VectorXd params(4 * dim);
        if (restart == 0) {
            // Warm start at the targets themselves.
            encode_complex(t1, 0, params);
            encode_complex(t2, 2 * dim, params);
        } else {
            std::mt19937_64 rng = restart_rng(config, restart);
            std::normal_distribution<double> normal(0.0, 1.0);
            for (Eigen::Index i = 0; i < params.size(); ++i) {
                params(i) = normal(rng);
            }
        }

        double value = 0.0;
        // Finite-difference gradients limit the useful gradient tolerance.
        ascend(objective, objective_with_gradient, params, value, config,
               std::max(config.tolerance, 1e-8));
        if (value > best_value) {
            best_value = value;
            best_params = params;
        }
    }

    const auto [o1, o2] = decode_pair(best_params, dim, forced_overlap);
    StatePair outputs(PureState(o1, targets.psi.dims()),
                      PureState(o2, targets.psi.dims()));
    return GramSearchResult{best_value, std::move(outputs)};
}

namespace detail {

UnitaryObjective::UnitaryObjective(Matrix coupling)
    : coupling_(std::move(coupling)), dim_(coupling_.rows()) {
    if (coupling_.rows() != coupling_.cols()) {
        throw std::invalid_argument("coupling matrix must be square");
    }
}

Matrix UnitaryObjective::hermitian_from(const Eigen::VectorXd& params) const {
    Matrix h(dim_, dim_);
    for (Eigen::Index j = 0; j < dim_; ++j) {
        h(j, j) = params(j);
    }
    Eigen::Index idx = dim_;
    for (Eigen::Index j = 0; j < dim_; ++j) {
        for (Eigen::Index k = j + 1; k < dim_; ++k) {
            const Complex value(params(idx), params(idx + 1));
            idx += 2;
            h(j, k) = value;
            h(k, j) = std::conj(value);
        }
    }
    return h;
}

Matrix UnitaryObjective::unitary_from(const Eigen::VectorXd& params) const {
    const Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_from(params));
    Vector phases(dim_);
    for (Eigen::Index a = 0; a < dim_; ++a) {
        phases(a) = std::exp(Complex(0.0, es.eigenvalues()(a)));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double UnitaryObjective::value(const Eigen::VectorXd& params) const {
    return (unitary_from(params) * coupling_).trace().real();
}

double UnitaryObjective::value_and_gradient(const Eigen::VectorXd& params,
                                            Eigen::VectorXd& gradient) const {
    const Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_from(params));
    const Matrix& q = es.eigenvectors();
    const Eigen::VectorXd& lambda = es.eigenvalues();

    Vector phases(dim_);
    for (Eigen::Index a = 0; a < dim_; ++a) {
        phases(a) = std::exp(Complex(0.0, lambda(a)));
    }
    const double value =
        ((q * phases.asDiagonal() * q.adjoint() * coupling_).trace()).real();

    // d exp(iH) in the eigenbasis is an elementwise product with
    // phi(a,b) = i e^{i(la+lb)/2} sinc((la-lb)/2); fold it with the coupling.
    const Matrix b = q.adjoint() * coupling_ * q;
    Matrix c(dim_, dim_);
    for (Eigen::Index a = 0; a < dim_; ++a) {
        for (Eigen::Index bb = 0; bb < dim_; ++bb) {
            const double delta = lambda(a) - lambda(bb);
            const double mean = 0.5 * (lambda(a) + lambda(bb));
            const double sinc =
                std::abs(delta) < 1e-12 ? 1.0 : std::sin(0.5 * delta) / (0.5 * delta);
            const Complex phi = Complex(0.0, 1.0) * std::exp(Complex(0.0, mean)) * sinc;
            c(a, bb) = phi * b(bb, a);
        }
    }
    const Matrix m = q.conjugate() * c * q.transpose();

    gradient.resize(param_count());
    for (Eigen::Index j = 0; j < dim_; ++j) {
        gradient(j) = m(j, j).real();
    }
    Eigen::Index idx = dim_;
    for (Eigen::Index j = 0; j < dim_; ++j) {
        for (Eigen::Index k = j + 1; k < dim_; ++k) {
            gradient(idx++) = (m(j, k) + m(k, j)).real();
            gradient(idx++) = -(m(j, k) - m(k, j)).imag();
        }
    }
    return value;
}

}  // namespace detail

UnitarySearchResult unitary_search_detailed(const StatePair& inputs,
                                            const StatePair& targets,
                                            Eigen::Index dim,
                                            const SearchConfig& config) {
    check_config(config);
    const Vector i1 = embedded(inputs.psi, dim);
    const Vector i2 = embedded(inputs.phi, dim);
    const Vector t1 = embedded(targets.psi, dim);
    const Vector t2 = embedded(targets.phi, dim);
    const detail::UnitaryObjective objective(
        0.5 * (i1 * t1.adjoint() + i2 * t2.adjoint()));

    const auto value_of = [&](const Eigen::VectorXd& params) {
        return objective.value(params);
    };
    const auto value_and_gradient = [&](const Eigen::VectorXd& params,
                                        Eigen::VectorXd& gradient) {
        return objective.value_and_gradient(params, gradient);
    };

    const double grad_tol = std::max(config.tolerance, 1e-12);
    Eigen::VectorXd best_params;
    double best_value = -std::numeric_limits<double>::infinity();
    int converged_restarts = 0;

    for (int restart = 0; restart < config.restarts; ++restart) {
        std::mt19937_64 rng = restart_rng(config, restart);
        std::normal_distribution<double> normal(0.0, 0.5);
        Eigen::VectorXd params(objective.param_count());
        for (Eigen::Index i = 0; i < params.size(); ++i) {
            params(i) = normal(rng);
        }

        double value = 0.0;
        if (ascend(value_of, value_and_gradient, params, value, config, grad_tol)) {
            ++converged_restarts;
        }
        if (value > best_value) {
            best_value = value;
            best_params = params;
        }
    }

    if (converged_restarts == 0) {
        throw SearchFailure("unitary search did not converge in any restart",
                            best_value);
    }
    return UnitarySearchResult{best_value, objective.unitary_from(best_params),
                               converged_restarts};
}

double unitary_search(const StatePair& inputs, const StatePair& targets,
                      Eigen::Index dim, const SearchConfig& config) {
    return unitary_search_detailed(inputs, targets, dim, config).fidelity;
}

}  // namespace signalscope
