#include "signalscope/signaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace signalscope {

namespace {

constexpr double kAnchorTol = 1e-10;
constexpr double kNormDriftTol = 1e-8;
constexpr double kPurityTol = 1e-10;
constexpr double kThetaBisectTol = 1e-10;
constexpr double kFeasibilitySlack = 1e-12;

double half_angle(double overlap) {
    return 0.5 * std::acos(std::clamp(overlap, -1.0, 1.0));
}

// A-side entropy of a probe whose branches overlap by cos 2*theta.
double entropy_at(double theta) {
    return binary_entropy(0.5 * (1.0 + std::cos(2.0 * theta)));
}

// B branches the probe superposes for the given kind.
std::pair<PureState, PureState> probe_branches(const StatePair& pair,
                                               MachineKind kind,
                                               const PureState& blank) {
    if (kind == MachineKind::Clone) {
        return {tensor(pair.psi, blank), tensor(pair.phi, blank)};
    }
    return {tensor(pair.psi, pair.psi), tensor(pair.phi, pair.phi)};
}

double reduced_entropy(const PureState& state, int side) {
    const DensityMatrix rho =
        density_from_pure({state}, Eigen::VectorXd::Ones(1));
    return von_neumann_entropy(partial_trace(rho, {side}));
}

// Both reduced entropies of a pure bipartite state; they must agree.
double checked_entropy(const PureState& state) {
    const double a_side = reduced_entropy(state, 0);
    const double b_side = reduced_entropy(state, 1);
    if (std::abs(a_side - b_side) > kPurityTol) {
        throw std::runtime_error("A and B entropies of a pure state disagree");
    }
    return a_side;
}

// Finds theta in [lo, hi] with entropy_at(theta) = target; entropy_at is
// strictly increasing there.
double invert_entropy(double target, double lo, double hi) {
    if (target <= entropy_at(lo)) {
        return lo;
    }
    if (target >= entropy_at(hi)) {
        return hi;
    }
    while (hi - lo > kThetaBisectTol) {
        const double mid = 0.5 * (lo + hi);
        (entropy_at(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ProbeState build_probe(const StatePair& pair, MachineKind kind,
                       const PureState& blank) {
    if (blank.dim() != pair.psi.dim()) {
        throw std::invalid_argument("blank register must match the anchor dimension");
    }
    const auto [b1, b2] = probe_branches(pair, kind, blank);
    const Eigen::Index branch_dim = b1.dim();
    Vector amplitudes(2 * branch_dim);
    amplitudes.head(branch_dim) = b1.amplitudes() / std::sqrt(2.0);
    amplitudes.tail(branch_dim) = b2.amplitudes() / std::sqrt(2.0);
    return ProbeState{PureState(std::move(amplitudes), Dims{2, branch_dim}),
                      kind, pair, blank};
}

SignalingReport run_protocol(const ProbeState& probe, const LinearMachine& machine,
                             double threshold) {
    if (threshold < 0.0) {
        throw std::invalid_argument("threshold must be nonnegative");
    }
    if (probe.kind != machine.kind) {
        throw std::invalid_argument("machine kind does not match the probe");
    }
    const auto [b1, b2] = probe_branches(probe.anchor_pair, probe.kind, probe.blank);
    if ((b1.amplitudes() - machine.anchor_inputs.psi.amplitudes()).norm() > kAnchorTol ||
        (b2.amplitudes() - machine.anchor_inputs.phi.amplitudes()).norm() > kAnchorTol) {
        throw std::invalid_argument("machine anchors do not match the probe branches");
    }

    const double entropy_before = checked_entropy(probe.state);

    const AppliedState applied = apply_on_subsystem(machine.op, probe.state, {1});
    if (std::abs(applied.norm - 1.0) > kNormDriftTol) {
        throw std::runtime_error("evolved probe norm drifted from 1 by more than 1e-8");
    }
    const double entropy_after = checked_entropy(applied.normalized());

    const double delta = entropy_after - entropy_before;
    return SignalingReport{entropy_before,
                           entropy_after,
                           delta,
                           threshold,
                           std::abs(delta) > threshold,
                           machine.fidelity,
                           std::cos(machine.geometry.theta_target -
                                    machine.geometry.theta_q),
                           machine.anchor_inputs.overlap,
                           machine.anchor_outputs.overlap};
}

std::vector<SweepRecord> sweep(MachineKind kind, const std::vector<double>& s_grid,
                               const std::vector<double>& epsilon_grid,
                               double threshold) {
    if (s_grid.empty() || epsilon_grid.empty()) {
        throw std::invalid_argument("sweep grids must be nonempty");
    }
    for (double s : s_grid) {
        if (!(s >= 0.0 && s <= 1.0)) {
            throw std::invalid_argument("overlap grid value outside [0, 1]");
        }
    }
    for (double epsilon : epsilon_grid) {
        if (!(epsilon >= 0.0)) {
            throw std::invalid_argument("fidelity excess grid value negative");
        }
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    const PureState blank = PureState::basis(2, 0);
    std::vector<SweepRecord> records;
    records.reserve(s_grid.size() * epsilon_grid.size());

    for (double s : s_grid) {
        const double optimal = optimal_fidelity_for_overlap(s, kind);
        const bool degenerate = s == 0.0 || s == 1.0;
        const double forced = kind == MachineKind::Clone ? s : s * s;
        const StatePair pair = qubit_pair_from_overlap(s);

        for (double epsilon : epsilon_grid) {
            SweepRecord record{s, epsilon, nan, nan, optimal,
                               entropy_at(half_angle(forced)), nan, nan,
                               false, false};
            if (epsilon > (1.0 - optimal) + kFeasibilitySlack) {
                records.push_back(record);  // unreachable fidelity, keep the row
                continue;
            }
            record.feasible = true;
            if (degenerate) {
                // No geometry exists, but the unique admissible machine is the
                // exact one: fidelity 1 and no entropy change.
                record.theta_prime = half_angle(forced);
                record.fidelity = 1.0;
                record.entropy_after = record.entropy_before;
                record.delta = 0.0;
                records.push_back(record);
                continue;
            }
            const ConeGeometry geom = cone_geometry(pair, kind, blank);
            const LinearMachine machine = machine_by_fidelity_excess(geom, epsilon);
            const SignalingReport report =
                run_protocol(build_probe(pair, kind, blank), machine, threshold);
            record.theta_prime = machine.theta_prime;
            record.fidelity = machine.fidelity;
            record.entropy_before = report.entropy_before;
            record.entropy_after = report.entropy_after;
            record.delta = report.delta;
            record.signaling = report.signaling;
            records.push_back(record);
        }
    }
    return records;
}

PowerBound bound_from_entropy(const StatePair& pair, MachineKind kind,
                              double measured_entropy, double uncertainty) {
    if (!(uncertainty >= 0.0)) {
        throw std::invalid_argument("uncertainty must be nonnegative");
    }
    if (std::isnan(measured_entropy)) {
        throw std::invalid_argument("measured entropy is not a number");
    }

    const double s = pair.overlap;
    const double theta_target =
        half_angle(kind == MachineKind::Clone ? s * s : s);
    const double theta_q = half_angle(kind == MachineKind::Clone ? s : s * s);
    const double lo = std::min(theta_q, theta_target);
    const double hi = std::max(theta_q, theta_target);

    const double window_lo = measured_entropy - uncertainty;
    const double window_hi = measured_entropy + uncertainty;

    double theta_a;
    double theta_b;
    bool out_of_model = false;
    if (window_hi < entropy_at(lo)) {
        theta_a = theta_b = lo;
        out_of_model = true;
    } else if (window_lo > entropy_at(hi)) {
        theta_a = theta_b = hi;
        out_of_model = true;
    } else {
        theta_a = invert_entropy(window_lo, lo, hi);
        theta_b = invert_entropy(window_hi, lo, hi);
    }

    std::array<double, 2> fidelity_interval{std::cos(theta_a - theta_target),
                                            std::cos(theta_b - theta_target)};
    if (fidelity_interval[0] > fidelity_interval[1]) {
        std::swap(fidelity_interval[0], fidelity_interval[1]);
    }
    return PowerBound{s, measured_entropy, uncertainty, fidelity_interval,
                      {theta_a, theta_b}, out_of_model};
}

ExperimentPlan plan_experiment(const StatePair& pair, MachineKind kind) {
    const double s = pair.overlap;
    const double a2 =
        0.5 * (1.0 + (kind == MachineKind::Clone ? s : s * s));
    const double a = std::sqrt(a2);
    const double b = std::sqrt(1.0 - a2);

    // One-sided filter diag(1, b/a) takes a Bell pair to Schmidt weights
    // (a, b); its squared image norm is the success probability 1/(2 a^2).
    Vector bell(4);
    bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
    Matrix filter = Matrix::Zero(2, 2);
    filter(0, 0) = 1.0;
    filter(1, 1) = a > 0.0 ? b / a : 0.0;
    const AppliedState filtered =
        apply_on_subsystem(filter, PureState(bell, Dims{2, 2}), {1});

    return ExperimentPlan{a2, binary_entropy(a2), filtered.norm * filtered.norm};
}

}  // namespace signalscope
