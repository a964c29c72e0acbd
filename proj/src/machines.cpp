#include "signalscope/machines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace signalscope {

namespace {

constexpr double kPhaseTol = 1e-12;
constexpr double kAngleSlack = 1e-12;

// Half-angle of a symmetric pair with the given overlap: overlap = cos 2t.
double half_angle(double overlap) {
    return 0.5 * std::acos(std::clamp(overlap, -1.0, 1.0));
}

PureState normalized_state(const Vector& amplitudes, const Dims& dims) {
    const double norm = amplitudes.norm();
    if (norm <= 0.0) {
        throw std::invalid_argument("cannot normalize a zero vector");
    }
    return PureState(amplitudes / norm, dims);
}

}  // namespace

std::string to_string(MachineKind kind) {
    return kind == MachineKind::Clone ? "clone" : "delete";
}

StatePair::StatePair(PureState psi_in, PureState phi_in)
    : psi(std::move(psi_in)), phi(std::move(phi_in)), overlap(0.0) {
    if (psi.dims() != phi.dims()) {
        throw std::invalid_argument("state pair members must share subsystem structure");
    }
    const Complex value = inner(psi, phi);
    if (std::abs(value.imag()) > kPhaseTol || value.real() < -kPhaseTol) {
        throw std::invalid_argument(
            "state pair overlap must be real nonnegative under the phase convention");
    }
    overlap = std::clamp(value.real(), 0.0, 1.0);
}

StatePair qubit_pair_from_overlap(double s) {
    if (!(s >= 0.0 && s <= 1.0)) {
        throw std::invalid_argument("overlap must lie in [0, 1]");
    }
    const double theta = half_angle(s);
    Vector psi(2), phi(2);
    psi << std::cos(theta), std::sin(theta);
    phi << std::cos(theta), -std::sin(theta);
    return StatePair(PureState(psi, Dims{2}), PureState(phi, Dims{2}));
}

ConeGeometry cone_geometry(const StatePair& pair, MachineKind kind,
                           const PureState& blank) {
    if (pair.overlap <= 0.0 || pair.overlap >= 1.0) {
        throw std::invalid_argument(
            "degenerate geometry: overlap must lie strictly inside (0, 1)");
    }
    if (blank.dim() != pair.psi.dim()) {
        throw std::invalid_argument("blank register must match the anchor dimension");
    }

    StatePair doubled(tensor(pair.psi, pair.psi), tensor(pair.phi, pair.phi));
    StatePair blanked(tensor(pair.psi, blank), tensor(pair.phi, blank));
    StatePair inputs = kind == MachineKind::Clone ? blanked : doubled;
    StatePair targets = kind == MachineKind::Clone ? doubled : blanked;

    PureState e_plus =
        normalized_state(targets.psi.amplitudes() + targets.phi.amplitudes(),
                         targets.psi.dims());
    PureState e_minus =
        normalized_state(targets.psi.amplitudes() - targets.phi.amplitudes(),
                         targets.psi.dims());

    const double theta_in = half_angle(inputs.overlap);
    return ConeGeometry{kind,
                        std::move(inputs),
                        std::move(targets),
                        std::move(e_plus),
                        std::move(e_minus),
                        theta_in,
                        theta_in,  // overlap preservation pins the output cone
                        half_angle(targets.overlap)};
}

StatePair symmetric_pair_at(const ConeGeometry& geom, double theta) {
    constexpr double kQuarterPi = 0.78539816339744830961;
    if (!(theta >= -kAngleSlack && theta <= kQuarterPi + kAngleSlack)) {
        throw std::invalid_argument("half-angle must lie in [0, pi/4]");
    }
    const Vector axial = std::cos(theta) * geom.e_plus.amplitudes();
    const Vector planar = std::sin(theta) * geom.e_minus.amplitudes();
    return StatePair(PureState(axial + planar, geom.e_plus.dims()),
                     PureState(axial - planar, geom.e_plus.dims()));
}

FidelityOptimum optimal_fidelity(const ConeGeometry& geom) {
    return FidelityOptimum{std::cos(geom.theta_target - geom.theta_q),
                           symmetric_pair_at(geom, geom.theta_q)};
}

double optimal_fidelity_for_overlap(double s, MachineKind kind) {
    if (!(s >= 0.0 && s <= 1.0)) {
        throw std::invalid_argument("overlap must lie in [0, 1]");
    }
    if (s == 0.0 || s == 1.0) {
        return 1.0;  // orthogonal or identical anchors copy and delete exactly
    }
    const double theta_narrow = half_angle(s);
    const double theta_wide = half_angle(s * s);
    return kind == MachineKind::Clone ? std::cos(theta_wide - theta_narrow)
                                      : std::cos(theta_narrow - theta_wide);
}

LinearMachine super_machine(const ConeGeometry& geom, double theta_prime) {
    const double lo = std::min(geom.theta_q, geom.theta_target);
    const double hi = std::max(geom.theta_q, geom.theta_target);
    if (!(theta_prime >= lo - kAngleSlack && theta_prime <= hi + kAngleSlack)) {
        throw std::invalid_argument(
            "theta_prime outside the interval between theta_q and theta_target");
    }

    StatePair outputs = symmetric_pair_at(geom, theta_prime);

    Matrix basis_in(geom.inputs.psi.dim(), 2);
    basis_in.col(0) = geom.inputs.psi.amplitudes();
    basis_in.col(1) = geom.inputs.phi.amplitudes();
    Matrix basis_out(outputs.psi.dim(), 2);
    basis_out.col(0) = outputs.psi.amplitudes();
    basis_out.col(1) = outputs.phi.amplitudes();

    // L = B_out G^-1 B_in^dagger maps anchor k to output k and is zero on the
    // orthogonal complement of the anchor span.
    const Matrix gram = basis_in.adjoint() * basis_in;
    Matrix op = basis_out * gram.inverse() * basis_in.adjoint();

    const double fidelity =
        0.5 * (inner(geom.targets.psi, outputs.psi).real() +
               inner(geom.targets.phi, outputs.phi).real());

    return LinearMachine{std::move(op), geom.kind,     geom.inputs,
                         std::move(outputs), theta_prime, fidelity,
                         geom};
}

LinearMachine machine_by_fidelity_excess(const ConeGeometry& geom, double epsilon) {
    if (epsilon < 0.0) {
        throw std::invalid_argument("fidelity excess must be nonnegative");
    }
    if (epsilon == 0.0) {
        return super_machine(geom, geom.theta_q);
    }
    const double optimal = std::cos(geom.theta_target - geom.theta_q);
    const double gap = (1.0 - optimal) - epsilon;
    if (gap < -kAngleSlack) {
        throw std::invalid_argument("requested fidelity exceeds 1");
    }
    // cos(theta_target - theta') = optimal + epsilon, solved via
    // 1 - cos x = 2 sin^2(x/2) to keep precision when the gap is tiny.
    const double x = 2.0 * std::asin(std::sqrt(std::max(gap, 0.0) / 2.0));
    const double theta_prime = geom.kind == MachineKind::Clone
                                   ? geom.theta_target - x
                                   : geom.theta_target + x;
    const double lo = std::min(geom.theta_q, geom.theta_target);
    const double hi = std::max(geom.theta_q, geom.theta_target);
    return super_machine(geom, std::clamp(theta_prime, lo, hi));
}

}  // namespace signalscope
