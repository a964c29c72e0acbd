#pragma once

#include <array>
#include <vector>

#include "signalscope/hilbert.hpp"
#include "signalscope/machines.hpp"

namespace signalscope {

// Bipartite A-B state (|0>_A b1 + |1>_A b2)/sqrt(2) whose B branches are the
// machine's anchor inputs. Any overlap change in B shows up as an A-side
// entropy change, which is what the protocol detects.
struct ProbeState {
    PureState state;  // dims {2, d_B}
    MachineKind kind;
    StatePair anchor_pair;
    PureState blank;
};

struct SignalingReport {
    double entropy_before;  // bits
    double entropy_after;   // bits
    double delta;           // entropy_after - entropy_before
    double threshold;       // bits
    bool signaling;         // |delta| > threshold
    double machine_fidelity;
    double optimal_fidelity;
    double overlap_before;  // overlap of the machine's anchor inputs
    double overlap_after;   // overlap of the machine's anchor outputs
};

// One sweep cell. Cells whose requested fidelity excess is unreachable are
// kept (feasible = false) with NaN in the machine-dependent fields so the
// output table stays rectangular.
struct SweepRecord {
    double s;
    double epsilon;
    double theta_prime;
    double fidelity;
    double optimal_fidelity;
    double entropy_before;
    double entropy_after;
    double delta;
    bool signaling;
    bool feasible;
};

// Machine fidelities compatible with an entropy reading. Readings no
// admissible machine can produce are flagged and pinned to the nearest
// boundary. Intervals are sorted ascending.
struct PowerBound {
    double s;
    double measured_entropy;  // bits
    double uncertainty;       // bits
    std::array<double, 2> fidelity_interval;
    std::array<double, 2> theta_interval;
    bool out_of_model;
};

struct ExperimentPlan {
    double schmidt_a2;                  // larger squared Schmidt coefficient
    double target_entropy;              // bits
    double filter_success_probability;  // one-sided filtering from a Bell pair
};

ProbeState build_probe(const StatePair& pair, MachineKind kind,
                       const PureState& blank);

// Applies the machine to the B part and compares A-side entropies. Errors if
// the machine anchors do not match the probe branches, if the evolved norm
// drifts from 1, or if the A and B entropies of a pure state disagree.
SignalingReport run_protocol(const ProbeState& probe, const LinearMachine& machine,
                             double threshold);

// One record per (s, epsilon), epsilon varying fastest.
std::vector<SweepRecord> sweep(MachineKind kind, const std::vector<double>& s_grid,
                               const std::vector<double>& epsilon_grid,
                               double threshold);

// Inverts the monotone half-angle -> entropy map over the admissible interval
// to find every machine fidelity consistent with measured_entropy +- uncertainty.
PowerBound bound_from_entropy(const StatePair& pair, MachineKind kind,
                              double measured_entropy, double uncertainty);

// Schmidt parameter of the probe, its A-side entropy, and the optimal success
// probability of filtering a Bell pair down to those Schmidt coefficients.
ExperimentPlan plan_experiment(const StatePair& pair, MachineKind kind);

}  // namespace signalscope
