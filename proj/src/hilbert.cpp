#include "signalscope/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace signalscope {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kEigenFloor = -1e-12;
constexpr double kEntropyEigenFloor = -1e-9;
constexpr double kSchmidtCutoff = 1e-12;

Eigen::Index checked_product(const Dims& dims) {
    if (dims.empty()) {
        throw std::invalid_argument("subsystem dimension list is empty");
    }
    Eigen::Index product = 1;
    for (Eigen::Index d : dims) {
        if (d < 1) {
            throw std::invalid_argument("subsystem dimension must be positive");
        }
        product *= d;
    }
    return product;
}

// Strides of a mixed-radix index: stride[k] multiplies the digit of subsystem k.
std::vector<Eigen::Index> strides_of(const Dims& dims) {
    std::vector<Eigen::Index> strides(dims.size());
    Eigen::Index acc = 1;
    for (std::size_t k = dims.size(); k-- > 0;) {
        strides[k] = acc;
        acc *= dims[k];
    }
    return strides;
}

std::vector<int> checked_subsystems(const std::vector<int>& subsystems,
                                    std::size_t count, const char* what) {
    if (subsystems.empty()) {
        throw std::invalid_argument(std::string(what) + ": no subsystems given");
    }
    std::vector<int> sorted = subsystems;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument(std::string(what) + ": duplicate subsystem index");
    }
    if (sorted.front() < 0 || sorted.back() >= static_cast<int>(count)) {
        throw std::invalid_argument(std::string(what) + ": subsystem index out of range");
    }
    return sorted;
}

}  // namespace

PureState::PureState(Vector amplitudes, Dims dims)
    : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
    if (checked_product(dims_) != amplitudes_.size()) {
        throw std::invalid_argument("amplitude count does not match subsystem dimensions");
    }
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > kNormTol) {
        throw std::invalid_argument("state vector is not normalized: norm = " +
                                    std::to_string(norm));
    }
}

PureState PureState::basis(Eigen::Index dim, Eigen::Index index) {
    if (dim < 1) {
        throw std::invalid_argument("basis: dimension must be positive");
    }
    if (index < 0 || index >= dim) {
        throw std::invalid_argument("basis: index out of range");
    }
    Vector amplitudes = Vector::Zero(dim);
    amplitudes(index) = 1.0;
    return PureState(std::move(amplitudes), Dims{dim});
}

PureState PureState::regrouped(Dims dims) const {
    if (checked_product(dims) != amplitudes_.size()) {
        throw std::invalid_argument("regrouped: total dimension must be preserved");
    }
    return PureState(amplitudes_, std::move(dims));
}

DensityMatrix::DensityMatrix(Matrix entries, Dims dims)
    : entries_(std::move(entries)), dims_(std::move(dims)) {
    if (entries_.rows() != entries_.cols()) {
        throw std::invalid_argument("density matrix must be square");
    }
    if (checked_product(dims_) != entries_.rows()) {
        throw std::invalid_argument("matrix size does not match subsystem dimensions");
    }
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    if (std::abs(entries_.trace().real() - 1.0) > kTraceTol ||
        std::abs(entries_.trace().imag()) > kTraceTol) {
        throw std::invalid_argument("density matrix trace is not one");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < kEigenFloor) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

PureState AppliedState::normalized() const {
    if (norm <= 0.0) {
        throw std::runtime_error("cannot normalize a zero state");
    }
    return PureState(amplitudes / norm, dims);
}

PureState tensor(const PureState& u, const PureState& v) {
    Vector amplitudes(u.dim() * v.dim());
    for (Eigen::Index i = 0; i < u.dim(); ++i) {
        amplitudes.segment(i * v.dim(), v.dim()) = u.amplitudes()(i) * v.amplitudes();
    }
    Dims dims = u.dims();
    dims.insert(dims.end(), v.dims().begin(), v.dims().end());
    return PureState(std::move(amplitudes), std::move(dims));
}

Complex inner(const PureState& u, const PureState& v) {
    if (u.dim() != v.dim()) {
        throw std::invalid_argument("inner: dimension mismatch");
    }
    return u.amplitudes().dot(v.amplitudes());
}

DensityMatrix density_from_pure(const std::vector<PureState>& states,
                                const Eigen::VectorXd& weights) {
    if (states.empty()) {
        throw std::invalid_argument("density_from_pure: no states given");
    }
    if (weights.size() != static_cast<Eigen::Index>(states.size())) {
        throw std::invalid_argument("density_from_pure: one weight per state required");
    }
    for (const PureState& state : states) {
        if (state.dims() != states.front().dims()) {
            throw std::invalid_argument("density_from_pure: mixed subsystem structures");
        }
    }
    if (weights.minCoeff() < 0.0) {
        throw std::invalid_argument("density_from_pure: negative weight");
    }
    if (std::abs(weights.sum() - 1.0) > kTraceTol) {
        throw std::invalid_argument("density_from_pure: weights must sum to one");
    }
    Matrix rho = Matrix::Zero(states.front().dim(), states.front().dim());
    for (std::size_t k = 0; k < states.size(); ++k) {
        rho.noalias() +=
            weights(static_cast<Eigen::Index>(k)) *
            (states[k].amplitudes() * states[k].amplitudes().adjoint());
    }
    return DensityMatrix(std::move(rho), states.front().dims());
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    const Dims& dims = rho.dims();
    const std::vector<int> kept = checked_subsystems(keep, dims.size(), "partial_trace");
    if (kept.size() == dims.size()) {
        return rho;
    }

    Dims kept_dims;
    kept_dims.reserve(kept.size());
    for (int k : kept) {
        kept_dims.push_back(dims[static_cast<std::size_t>(k)]);
    }
    const std::vector<Eigen::Index> strides = strides_of(dims);
    const std::vector<Eigen::Index> kept_strides = strides_of(kept_dims);

    // Reduced index and traced-out key of a full index, in one pass.
    const auto split = [&](Eigen::Index full) {
        Eigen::Index reduced = 0;
        Eigen::Index traced = 0;
        std::size_t pos = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            const Eigen::Index digit = (full / strides[k]) % dims[k];
            if (pos < kept.size() && static_cast<int>(k) == kept[pos]) {
                reduced += digit * kept_strides[pos];
                ++pos;
            } else {
                traced = traced * dims[k] + digit;
            }
        }
        return std::pair<Eigen::Index, Eigen::Index>(reduced, traced);
    };

    const Eigen::Index reduced_dim = checked_product(kept_dims);
    Matrix reduced = Matrix::Zero(reduced_dim, reduced_dim);
    for (Eigen::Index i = 0; i < rho.dim(); ++i) {
        const auto [ri, ti] = split(i);
        for (Eigen::Index j = 0; j < rho.dim(); ++j) {
            const auto [rj, tj] = split(j);
            if (ti == tj) {
                reduced(ri, rj) += rho.entries()(i, j);
            }
        }
    }
    return DensityMatrix(std::move(reduced), std::move(kept_dims));
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.entries(), Eigen::EigenvaluesOnly);
    double entropy = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const double lambda = solver.eigenvalues()(k);
        if (lambda < kEntropyEigenFloor) {
            throw std::domain_error("entropy of a matrix with negative eigenvalue " +
                                    std::to_string(lambda));
        }
        if (lambda > 0.0) {
            entropy -= lambda * std::log2(lambda);
        }
    }
    return std::max(entropy, 0.0);
}

double binary_entropy(double p) {
    if (std::isnan(p) || p < -kNormTol || p > 1.0 + kNormTol) {
        throw std::domain_error("binary_entropy: probability outside [0, 1]");
    }
    p = std::clamp(p, 0.0, 1.0);
    double entropy = 0.0;
    if (p > 0.0) {
        entropy -= p * std::log2(p);
    }
    if (p < 1.0) {
        entropy -= (1.0 - p) * std::log2(1.0 - p);
    }
    return entropy;
}

SchmidtForm schmidt_decompose(const PureState& state, int cut) {
    const Dims& dims = state.dims();
    if (cut < 1 || cut >= static_cast<int>(dims.size())) {
        throw std::invalid_argument("schmidt_decompose: cut must split off both sides");
    }
    Dims left_dims(dims.begin(), dims.begin() + cut);
    Dims right_dims(dims.begin() + cut, dims.end());
    const Eigen::Index rows = checked_product(left_dims);
    const Eigen::Index cols = checked_product(right_dims);

    // amp(i*cols + j) = X(i, j): the state as a left-by-right matrix.
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        reshaped(state.amplitudes().data(), rows, cols);
    Eigen::JacobiSVD<Matrix> svd(reshaped, Eigen::ComputeThinU | Eigen::ComputeThinV);

    struct Term {
        double coefficient;
        Vector left;
        Vector right;
    };
    std::vector<Term> terms;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
        const double sigma = svd.singularValues()(k);
        if (sigma <= kSchmidtCutoff) {
            continue;
        }
        Vector left = svd.matrixU().col(k);
        // X = U S V^dagger, so the right factor carries conjugated V columns.
        Vector right = svd.matrixV().col(k).conjugate();
        // Fix the global phase: leading significant left component real positive.
        for (Eigen::Index i = 0; i < left.size(); ++i) {
            if (std::abs(left(i)) > kSchmidtCutoff) {
                const Complex phase = left(i) / std::abs(left(i));
                left /= phase;
                right *= phase;
                break;
            }
        }
        terms.push_back(Term{sigma, std::move(left), std::move(right)});
    }

    // Deterministic order: coefficient descending, ties by left-vector entries.
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        if (std::abs(a.coefficient - b.coefficient) > kSchmidtCutoff) {
            return a.coefficient > b.coefficient;
        }
        for (Eigen::Index i = 0; i < a.left.size(); ++i) {
            if (a.left(i).real() != b.left(i).real()) {
                return a.left(i).real() < b.left(i).real();
            }
            if (a.left(i).imag() != b.left(i).imag()) {
                return a.left(i).imag() < b.left(i).imag();
            }
        }
        return false;
    });

    SchmidtForm form;
    form.coefficients.resize(static_cast<Eigen::Index>(terms.size()));
    for (std::size_t k = 0; k < terms.size(); ++k) {
        form.coefficients(static_cast<Eigen::Index>(k)) = terms[k].coefficient;
        form.left_basis.push_back(std::move(terms[k].left));
        form.right_basis.push_back(std::move(terms[k].right));
    }
    form.left_dims = std::move(left_dims);
    form.right_dims = std::move(right_dims);
    return form;
}

AppliedState apply_on_subsystem(const Matrix& op, const PureState& state,
                                const std::vector<int>& targets) {
    const Dims& dims = state.dims();
    const std::vector<int> sorted = checked_subsystems(targets, dims.size(),
                                                       "apply_on_subsystem");
    Eigen::Index target_dim = 1;
    for (int t : sorted) {
        target_dim *= dims[static_cast<std::size_t>(t)];
    }
    if (op.rows() != op.cols() || op.rows() != target_dim) {
        throw std::invalid_argument(
            "apply_on_subsystem: operator size does not match target subsystems");
    }

    const std::vector<Eigen::Index> strides = strides_of(dims);
    Dims target_dims;
    for (int t : sorted) {
        target_dims.push_back(dims[static_cast<std::size_t>(t)]);
    }
    const std::vector<Eigen::Index> target_strides = strides_of(target_dims);

    // Full index g = base + key embedded on the target subsystems.
    const auto target_key = [&](Eigen::Index full) {
        Eigen::Index key = 0;
        for (std::size_t k = 0; k < sorted.size(); ++k) {
            const std::size_t t = static_cast<std::size_t>(sorted[k]);
            key += ((full / strides[t]) % dims[t]) * target_strides[k];
        }
        return key;
    };
    const auto embed = [&](Eigen::Index key) {
        Eigen::Index offset = 0;
        for (std::size_t k = 0; k < sorted.size(); ++k) {
            const std::size_t t = static_cast<std::size_t>(sorted[k]);
            offset += ((key / target_strides[k]) % target_dims[k]) * strides[t];
        }
        return offset;
    };

    Vector out = Vector::Zero(state.dim());
    for (Eigen::Index g = 0; g < state.dim(); ++g) {
        const Eigen::Index row = target_key(g);
        const Eigen::Index base = g - embed(row);
        Complex value = 0.0;
        for (Eigen::Index col = 0; col < target_dim; ++col) {
            value += op(row, col) * state.amplitudes()(base + embed(col));
        }
        out(g) = value;
    }
    const double norm = out.norm();
    return AppliedState{std::move(out), dims, norm};
}

}  // namespace signalscope
