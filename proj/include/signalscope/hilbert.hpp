#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace signalscope {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Dims = std::vector<Eigen::Index>;

// Unit-norm complex amplitude vector over a labeled composite Hilbert space.
// Subsystem 0 is the most significant index: for dims {d0, d1} the amplitude
// of |i>|j> sits at i*d1 + j, matching the Kronecker product convention.
class PureState {
public:
    PureState(Vector amplitudes, Dims dims);

    // Computational basis vector |index> of a single dim-dimensional register.
    static PureState basis(Eigen::Index dim, Eigen::Index index);

    const Vector& amplitudes() const { return amplitudes_; }
    const Dims& dims() const { return dims_; }
    Eigen::Index dim() const { return amplitudes_.size(); }

    // Same amplitudes with a different subsystem grouping (product must match).
    PureState regrouped(Dims dims) const;

private:
    Vector amplitudes_;
    Dims dims_;
};

// Positive semidefinite unit-trace complex matrix with subsystem labels.
// Hermiticity, trace and eigenvalue floor are validated on construction.
class DensityMatrix {
public:
    DensityMatrix(Matrix entries, Dims dims);

    const Matrix& entries() const { return entries_; }
    const Dims& dims() const { return dims_; }
    Eigen::Index dim() const { return entries_.rows(); }

private:
    Matrix entries_;
    Dims dims_;
};

// Result of schmidt_decompose: state = sum_k coefficients[k] |left_k>|right_k>.
// Coefficients are nonincreasing, nonnegative, and sum to one in squares.
struct SchmidtForm {
    Eigen::VectorXd coefficients;
    std::vector<Vector> left_basis;
    std::vector<Vector> right_basis;
    Dims left_dims;
    Dims right_dims;
};

// Unnormalized image of a state under a (possibly non-unitary) subsystem
// operator, together with its norm. The caller decides whether to normalize;
// non-unitary machines may change norms and the protocol must see that.
struct AppliedState {
    Vector amplitudes;
    Dims dims;
    double norm;

    PureState normalized() const;
};

PureState tensor(const PureState& u, const PureState& v);

// <u|v>, conjugate-linear in the first argument.
Complex inner(const PureState& u, const PureState& v);

DensityMatrix density_from_pure(const std::vector<PureState>& states,
                                const Eigen::VectorXd& weights);

// Reduced state on the kept subsystems (ascending original order).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// -sum_k lambda_k log2 lambda_k over the eigenvalues, in bits. 0 log 0 := 0.
double von_neumann_entropy(const DensityMatrix& rho);

// H(p) = -p log2 p - (1-p) log2 (1-p), in bits.
double binary_entropy(double p);

// Schmidt decomposition across the cut after the first `cut` subsystems.
SchmidtForm schmidt_decompose(const PureState& state, int cut);

// (I (x) op (x) I)|state> with op acting on the listed subsystems.
AppliedState apply_on_subsystem(const Matrix& op, const PureState& state,
                                const std::vector<int>& targets);

}  // namespace signalscope
