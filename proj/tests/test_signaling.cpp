#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "signalscope/signaling.hpp"

using namespace signalscope;

namespace {

const PureState kBlank = PureState::basis(2, 0);

struct Setup {
    StatePair pair;
    ConeGeometry geom;
    ProbeState probe;
};

Setup setup(double s, MachineKind kind) {
    StatePair pair = qubit_pair_from_overlap(s);
    ConeGeometry geom = cone_geometry(pair, kind, kBlank);
    ProbeState probe = build_probe(pair, kind, kBlank);
    return Setup{std::move(pair), std::move(geom), std::move(probe)};
}

}  // namespace

TEST_CASE("build_probe prepares equal flag-anchor branches") {
    const Setup sys = setup(0.5, MachineKind::Clone);
    CHECK(sys.probe.state.dims() == Dims{2, 4});

    const PureState flag0 = PureState::basis(2, 0);
    const PureState flag1 = PureState::basis(2, 1);
    const Complex head =
        inner(tensor(flag0, sys.geom.inputs.psi), sys.probe.state.regrouped(Dims{2, 4}));
    const Complex tail = inner(tensor(flag1, sys.geom.inputs.phi),
                               sys.probe.state.regrouped(Dims{2, 4}));
    CHECK(head.real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(tail.real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("an optimal machine changes no flag entropy") {
    for (MachineKind kind : {MachineKind::Clone, MachineKind::Delete}) {
        const Setup sys = setup(0.5, kind);
        const LinearMachine machine = machine_by_fidelity_excess(sys.geom, 0.0);
        const SignalingReport report = run_protocol(sys.probe, machine, 1e-9);

        CHECK(std::abs(report.delta) < 1e-10);
        CHECK_FALSE(report.signaling);
        const double s = sys.pair.overlap;
        const double branch_overlap = kind == MachineKind::Clone ? s : s * s;
        CHECK(report.entropy_before ==
              doctest::Approx(binary_entropy(0.5 * (1.0 + branch_overlap)))
                  .epsilon(1e-12));
        CHECK(report.machine_fidelity ==
              doctest::Approx(report.optimal_fidelity).epsilon(1e-13));
    }
}

TEST_CASE("a perfect copier moves the flag entropy by the frozen amount") {
    const Setup sys = setup(0.5, MachineKind::Clone);
    const LinearMachine machine = super_machine(sys.geom, sys.geom.theta_target);
    const SignalingReport report = run_protocol(sys.probe, machine, 1e-9);

    CHECK(report.entropy_before == doctest::Approx(binary_entropy(0.75)).epsilon(1e-13));
    CHECK(report.entropy_after == doctest::Approx(binary_entropy(0.625)).epsilon(1e-13));
    CHECK(report.delta == doctest::Approx(0.14315587846583222).epsilon(1e-13));
    CHECK(report.signaling);
    CHECK(report.overlap_before == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(report.overlap_after == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(report.machine_fidelity == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("copying raises and deleting lowers the flag entropy") {
    for (double epsilon : {1e-4, 1e-3, 4e-3}) {
        const Setup clone = setup(0.5, MachineKind::Clone);
        const SignalingReport up = run_protocol(
            clone.probe, machine_by_fidelity_excess(clone.geom, epsilon), 1e-9);
        CHECK(up.delta > 1e-6);

        const Setup del = setup(0.5, MachineKind::Delete);
        const SignalingReport down =
            run_protocol(del.probe, machine_by_fidelity_excess(del.geom, epsilon), 1e-9);
        CHECK(down.delta < -1e-6);
    }
}

TEST_CASE("the entropy change grows with the excess") {
    const Setup sys = setup(0.5, MachineKind::Clone);
    double previous = 0.0;
    for (double epsilon : {1e-4, 1e-3, 4e-3, 8e-3}) {
        const SignalingReport report = run_protocol(
            sys.probe, machine_by_fidelity_excess(sys.geom, epsilon), 1e-9);
        CHECK(report.delta > previous);
        previous = report.delta;
    }
}

TEST_CASE("overlap_after tracks the machine cone") {
    const Setup sys = setup(0.6, MachineKind::Clone);
    const LinearMachine machine = machine_by_fidelity_excess(sys.geom, 2e-3);
    const SignalingReport report = run_protocol(sys.probe, machine, 1e-9);
    CHECK(report.overlap_after ==
          doctest::Approx(std::cos(2.0 * machine.theta_prime)).epsilon(1e-12));
    CHECK(report.entropy_after ==
          doctest::Approx(binary_entropy(0.5 * (1.0 + report.overlap_after)))
              .epsilon(1e-12));
}

TEST_CASE("run_protocol rejects mismatched machines and bad thresholds") {
    const Setup sys = setup(0.5, MachineKind::Clone);
    const LinearMachine machine = machine_by_fidelity_excess(sys.geom, 0.0);

    CHECK_THROWS_AS(run_protocol(sys.probe, machine, -1e-3), std::invalid_argument);

    const Setup other = setup(0.7, MachineKind::Clone);
    CHECK_THROWS_AS(run_protocol(other.probe, machine, 1e-9), std::invalid_argument);

    const Setup wrong_kind = setup(0.5, MachineKind::Delete);
    CHECK_THROWS_AS(run_protocol(wrong_kind.probe, machine, 1e-9), std::invalid_argument);
}

TEST_CASE("sweep orders cells with the excess varying fastest") {
    const std::vector<SweepRecord> records =
        sweep(MachineKind::Clone, {0.4, 0.5}, {0.0, 1e-3}, 1e-9);
    REQUIRE(records.size() == 4);
    CHECK(records[0].s == 0.4);
    CHECK(records[0].epsilon == 0.0);
    CHECK(records[1].s == 0.4);
    CHECK(records[1].epsilon == 1e-3);
    CHECK(records[2].s == 0.5);
    CHECK(records[3].epsilon == 1e-3);
    for (const SweepRecord& record : records) {
        CHECK(record.feasible);
        CHECK(record.entropy_before ==
              doctest::Approx(binary_entropy(0.5 * (1.0 + record.s))).epsilon(1e-12));
    }
}

TEST_CASE("sweep flags unreachable excesses instead of failing") {
    const std::vector<SweepRecord> records =
        sweep(MachineKind::Clone, {0.9}, {0.0, 0.005}, 1e-9);
    REQUIRE(records.size() == 2);
    CHECK(records[0].feasible);
    CHECK_FALSE(records[1].feasible);
    CHECK(std::isnan(records[1].theta_prime));
    CHECK(std::isnan(records[1].fidelity));
    CHECK(std::isnan(records[1].delta));
    CHECK_FALSE(records[1].signaling);
    CHECK(records[1].optimal_fidelity ==
          doctest::Approx(optimal_fidelity_for_overlap(0.9, MachineKind::Clone)));
    CHECK(records[1].s == 0.9);
    CHECK(records[1].epsilon == 0.005);
}

TEST_CASE("sweep handles the degenerate overlaps explicitly") {
    for (double s : {0.0, 1.0}) {
        const std::vector<SweepRecord> records =
            sweep(MachineKind::Delete, {s}, {0.0, 1e-3}, 1e-9);
        REQUIRE(records.size() == 2);
        CHECK(records[0].feasible);
        CHECK(records[0].fidelity == 1.0);
        CHECK(records[0].delta == 0.0);
        CHECK_FALSE(records[0].signaling);
        CHECK_FALSE(records[1].feasible);  // nothing exceeds a perfect machine
    }
}

TEST_CASE("sweep validates its grids") {
    CHECK_THROWS_AS(sweep(MachineKind::Clone, {}, {0.0}, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(sweep(MachineKind::Clone, {0.5}, {}, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(sweep(MachineKind::Clone, {1.5}, {0.0}, 1e-9),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep(MachineKind::Clone, {0.5}, {-1e-3}, 1e-9),
                    std::invalid_argument);
}

TEST_CASE("bound_from_entropy inverts the frozen entropy readings") {
    const StatePair pair = qubit_pair_from_overlap(0.5);
    const double base = binary_entropy(0.75);

    const PowerBound low =
        bound_from_entropy(pair, MachineKind::Clone, base + 0.04, 0.0);
    CHECK_FALSE(low.out_of_model);
    CHECK(low.theta_interval[0] == doctest::Approx(0.5542100109144859).epsilon(1e-9));
    CHECK(low.theta_interval[1] == doctest::Approx(0.5542100109144859).epsilon(1e-9));
    CHECK(low.fidelity_interval[0] ==
          doctest::Approx(0.9945084793425374).epsilon(1e-9));

    const PowerBound high =
        bound_from_entropy(pair, MachineKind::Clone, base + 0.06, 0.0);
    CHECK(high.theta_interval[0] == doctest::Approx(0.5708661708964244).epsilon(1e-9));
    CHECK(high.fidelity_interval[0] ==
          doctest::Approx(0.9961136174204884).epsilon(1e-9));
}

TEST_CASE("bound_from_entropy round-trips a measured machine") {
    for (MachineKind kind : {MachineKind::Clone, MachineKind::Delete}) {
        const Setup sys = setup(0.45, kind);
        for (double epsilon : {0.0, 1e-3, 3e-3}) {
            const LinearMachine machine = machine_by_fidelity_excess(sys.geom, epsilon);
            const SignalingReport report = run_protocol(sys.probe, machine, 1e-9);
            const PowerBound bound =
                bound_from_entropy(sys.pair, kind, report.entropy_after, 1e-6);
            CHECK_FALSE(bound.out_of_model);
            CHECK(bound.fidelity_interval[0] <= machine.fidelity + 1e-8);
            CHECK(bound.fidelity_interval[1] >= machine.fidelity - 1e-8);
            CHECK(bound.theta_interval[0] <= bound.theta_interval[1]);
            CHECK(bound.fidelity_interval[0] <= bound.fidelity_interval[1]);
        }
    }
}

TEST_CASE("uncertainty widens the inferred intervals") {
    const StatePair pair = qubit_pair_from_overlap(0.5);
    const double reading = binary_entropy(0.75) + 0.05;
    const PowerBound tight = bound_from_entropy(pair, MachineKind::Clone, reading, 1e-4);
    const PowerBound loose = bound_from_entropy(pair, MachineKind::Clone, reading, 1e-2);
    CHECK(loose.fidelity_interval[0] <= tight.fidelity_interval[0]);
    CHECK(loose.fidelity_interval[1] >= tight.fidelity_interval[1]);
}

TEST_CASE("readings outside the reachable window are pinned and flagged") {
    const StatePair pair = qubit_pair_from_overlap(0.5);
    const double floor = binary_entropy(0.75);  // quantum machines sit here
    const double ceiling = binary_entropy(0.625);

    const PowerBound below =
        bound_from_entropy(pair, MachineKind::Clone, floor - 0.01, 1e-4);
    CHECK(below.out_of_model);
    CHECK(below.fidelity_interval[0] ==
          doctest::Approx(optimal_fidelity_for_overlap(0.5, MachineKind::Clone))
              .epsilon(1e-10));

    const PowerBound above =
        bound_from_entropy(pair, MachineKind::Clone, ceiling + 0.01, 1e-4);
    CHECK(above.out_of_model);
    CHECK(above.fidelity_interval[1] == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(
        bound_from_entropy(pair, MachineKind::Clone, std::nan(""), 1e-4),
        std::invalid_argument);
    CHECK_THROWS_AS(bound_from_entropy(pair, MachineKind::Clone, floor, -1.0),
                    std::invalid_argument);
}

TEST_CASE("plan_experiment reports the frozen preparation numbers") {
    const ExperimentPlan plan =
        plan_experiment(qubit_pair_from_overlap(0.6), MachineKind::Clone);
    CHECK(plan.schmidt_a2 == doctest::Approx(0.8).epsilon(1e-13));
    CHECK(plan.target_entropy == doctest::Approx(0.7219280948873623).epsilon(1e-13));
    CHECK(plan.filter_success_probability == doctest::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("plan_experiment squares the overlap for deleting machines") {
    const ExperimentPlan plan =
        plan_experiment(qubit_pair_from_overlap(0.6), MachineKind::Delete);
    CHECK(plan.schmidt_a2 == doctest::Approx(0.68).epsilon(1e-13));
    CHECK(plan.target_entropy ==
          doctest::Approx(binary_entropy(plan.schmidt_a2)).epsilon(1e-13));
    // One-sided filtering of a shared maximally entangled pair succeeds with
    // probability (1 + b^2/a^2) / 2 = 1 / (2 a^2).
    CHECK(plan.filter_success_probability ==
          doctest::Approx(0.5 / plan.schmidt_a2).epsilon(1e-12));
}
