#pragma once

#include <string>

#include "signalscope/hilbert.hpp"

namespace signalscope {

enum class MachineKind { Clone, Delete };

std::string to_string(MachineKind kind);

// Two unit states with a real nonnegative mutual overlap. The canonical
// phase convention makes "modulus of the overlap" and "overlap" coincide.
struct StatePair {
    StatePair(PureState psi_in, PureState phi_in);

    PureState psi;
    PureState phi;
    double overlap;
};

// Copying geometry: anchors the machine consumes, anchors an ideal machine
// would emit, the orthonormal plane spanned by the ideal targets, and the
// three half-angles. A symmetric pair at half-angle theta has overlap
// cos 2*theta, theta in [0, pi/4], so a wider cone means a smaller overlap.
struct ConeGeometry {
    MachineKind kind;
    StatePair inputs;
    StatePair targets;
    PureState e_plus;     // normalized bisector of the two targets
    PureState e_minus;    // completes the target plane, points toward targets.psi
    double theta_in;      // half-angle of the input pair
    double theta_q;       // output half-angle forced on overlap-preserving machines
    double theta_target;  // half-angle of the ideal target pair
};

// Linear (not necessarily unitary) operator on the two-register space,
// pinned down by its action on the two anchor inputs; the orthogonal
// complement of the anchor span is annihilated.
struct LinearMachine {
    Matrix op;
    MachineKind kind;
    StatePair anchor_inputs;
    StatePair anchor_outputs;
    double theta_prime;  // half-angle of the anchor outputs
    double fidelity;     // mean target fidelity (Re<t1|o1> + Re<t2|o2>)/2
    ConeGeometry geometry;
};

struct FidelityOptimum {
    double fidelity;
    StatePair outputs;
};

// Canonical qubit pair cos(t)|0> +- sin(t)|1> with overlap cos 2t = s.
StatePair qubit_pair_from_overlap(double s);

// Builds the full geometry for one machine kind. Degenerate overlaps
// s in {0, 1} are refused: no bisector plane exists there.
ConeGeometry cone_geometry(const StatePair& pair, MachineKind kind,
                           const PureState& blank);

// (cos t e_plus + sin t e_minus, cos t e_plus - sin t e_minus), overlap cos 2t.
StatePair symmetric_pair_at(const ConeGeometry& geom, double theta);

// Best mean fidelity over symmetric coaxial output pairs whose overlap is
// pinned to the input overlap: F = cos(theta_target - theta_q), attained at
// the quantum cone. Cross-checked against the unconstrained unitary search.
FidelityOptimum optimal_fidelity(const ConeGeometry& geom);

// Same optimum straight from the overlap; returns 1 at the degenerate
// endpoints where no geometry (and no better machine) exists.
double optimal_fidelity_for_overlap(double s, MachineKind kind);

// Machine emitting the symmetric pair at theta_prime. Admissible range is
// the closed interval between theta_q and theta_target; the theta_q end is
// quantum-attainable, everything strictly beyond it is super-quantum.
LinearMachine super_machine(const ConeGeometry& geom, double theta_prime);

// Solves cos(theta_target - theta') = F_optimal + epsilon and delegates to
// super_machine. epsilon = 0 reproduces the quantum-optimal machine exactly.
LinearMachine machine_by_fidelity_excess(const ConeGeometry& geom, double epsilon);

}  // namespace signalscope
