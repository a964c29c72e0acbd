#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "signalscope/hilbert.hpp"

using namespace signalscope;

namespace {

const double kSqrtHalf = 1.0 / std::sqrt(2.0);

PureState random_state(Dims dims, std::mt19937_64& rng) {
    Eigen::Index total = 1;
    for (Eigen::Index d : dims) total *= d;
    std::normal_distribution<double> gauss;
    Vector v(total);
    for (Eigen::Index i = 0; i < total; ++i) v[i] = Complex(gauss(rng), gauss(rng));
    v /= v.norm();
    return PureState(std::move(v), std::move(dims));
}

PureState bell_pair() {
    Vector v = Vector::Zero(4);
    v[0] = kSqrtHalf;
    v[3] = kSqrtHalf;
    return PureState(std::move(v), Dims{2, 2});
}

}  // namespace

TEST_CASE("tensor concatenates structure and indexes with the left factor slow") {
    const PureState prod = tensor(PureState::basis(2, 0), PureState::basis(3, 2));
    CHECK(prod.dims() == Dims{2, 3});
    CHECK(prod.amplitudes()[0 * 3 + 2].real() == doctest::Approx(1.0));
    CHECK(prod.amplitudes().norm() == doctest::Approx(1.0));

    const PureState flipped = tensor(PureState::basis(3, 2), PureState::basis(2, 0));
    CHECK(flipped.dims() == Dims{3, 2});
    CHECK(flipped.amplitudes()[2 * 2 + 0].real() == doctest::Approx(1.0));
}

TEST_CASE("inner conjugates its first argument") {
    Vector u(2);
    u << Complex(0.0, 1.0) * kSqrtHalf, Complex(kSqrtHalf, 0.0);
    const PureState a(u, Dims{2});
    const PureState b = PureState::basis(2, 0);

    const Complex ab = inner(a, b);
    CHECK(ab.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ab.imag() == doctest::Approx(-kSqrtHalf));
    CHECK(std::abs(inner(b, a) - std::conj(ab)) < 1e-15);
}

TEST_CASE("inner compares total dimensions only, not groupings") {
    const PureState grouped = bell_pair();
    const PureState flat(grouped.amplitudes(), Dims{4});
    CHECK(std::abs(inner(grouped, flat) - Complex(1.0, 0.0)) < 1e-15);
    CHECK_THROWS_AS(inner(grouped, PureState::basis(2, 0)), std::invalid_argument);
}

TEST_CASE("state construction rejects malformed input") {
    Vector v(2);
    v << 1.0, 1.0;  // norm sqrt(2)
    CHECK_THROWS_AS(PureState(v, Dims{2}), std::invalid_argument);
    CHECK_THROWS_AS(PureState(Vector::Unit(4, 0), Dims{2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(PureState(Vector::Unit(1, 0), Dims{}), std::invalid_argument);
    CHECK_THROWS_AS(PureState::basis(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(PureState::basis(0, 0), std::invalid_argument);
}

TEST_CASE("regrouped keeps amplitudes and guards the total dimension") {
    const PureState grouped = bell_pair();
    const PureState flat = grouped.regrouped(Dims{4});
    CHECK(flat.dims() == Dims{4});
    CHECK((flat.amplitudes() - grouped.amplitudes()).norm() < 1e-15);
    CHECK_THROWS_AS(grouped.regrouped(Dims{2, 3}), std::invalid_argument);
}

TEST_CASE("density_from_pure forms the weighted mixture") {
    const std::vector<PureState> states{PureState::basis(2, 0), PureState::basis(2, 1)};
    Eigen::VectorXd weights(2);
    weights << 0.8, 0.2;
    const DensityMatrix rho = density_from_pure(states, weights);
    CHECK(rho.entries()(0, 0).real() == doctest::Approx(0.8));
    CHECK(rho.entries()(1, 1).real() == doctest::Approx(0.2));
    CHECK(std::abs(rho.entries()(0, 1)) < 1e-15);

    Eigen::VectorXd negative(2);
    negative << 1.2, -0.2;
    CHECK_THROWS_AS(density_from_pure(states, negative), std::invalid_argument);
    Eigen::VectorXd short_list(1);
    short_list << 1.0;
    CHECK_THROWS_AS(density_from_pure(states, short_list), std::invalid_argument);
    Eigen::VectorXd off_sum(2);
    off_sum << 0.8, 0.1;
    CHECK_THROWS_AS(density_from_pure(states, off_sum), std::invalid_argument);
}

TEST_CASE("density matrix constructor validates its input") {
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 1) = Complex(0.5, 0.0);
    bad(0, 0) = 1.0;
    CHECK_THROWS_AS(DensityMatrix(bad, Dims{2}), std::invalid_argument);  // not Hermitian

    Matrix traceless = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix(traceless, Dims{2}), std::invalid_argument);
}

TEST_CASE("partial_trace of a product state gives the pure marginal") {
    Vector plus(2);
    plus << kSqrtHalf, kSqrtHalf;
    const PureState state = tensor(PureState::basis(2, 0), PureState(plus, Dims{2}));
    const DensityMatrix rho = density_from_pure({state}, Eigen::VectorXd::Ones(1));

    const DensityMatrix left = partial_trace(rho, {0});
    CHECK(left.dims() == Dims{2});
    CHECK(left.entries()(0, 0).real() == doctest::Approx(1.0));
    CHECK(von_neumann_entropy(left) < 1e-12);

    const DensityMatrix right = partial_trace(rho, {1});
    CHECK(right.entries()(0, 1).real() == doctest::Approx(0.5));
}

TEST_CASE("partial_trace of a maximally entangled pair is maximally mixed") {
    const DensityMatrix rho = density_from_pure({bell_pair()}, Eigen::VectorXd::Ones(1));
    const DensityMatrix marginal = partial_trace(rho, {1});
    CHECK(marginal.entries()(0, 0).real() == doctest::Approx(0.5));
    CHECK(std::abs(marginal.entries()(0, 1)) < 1e-15);
    CHECK(von_neumann_entropy(marginal) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("partial_trace keep list is order-insensitive and validated") {
    const DensityMatrix rho = density_from_pure({bell_pair()}, Eigen::VectorXd::Ones(1));
    const DensityMatrix both = partial_trace(rho, {1, 0});
    CHECK((both.entries() - rho.entries()).norm() < 1e-15);

    CHECK_THROWS_AS(partial_trace(rho, {}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, {2}), std::invalid_argument);
}

TEST_CASE("entropies match the frozen reference values") {
    CHECK(binary_entropy(0.25) == doctest::Approx(0.8112781244591328).epsilon(1e-15));
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(-1e-13) == 0.0);  // tolerated rounding, clamped
    CHECK_THROWS_AS(binary_entropy(1.5), std::domain_error);
    CHECK_THROWS_AS(binary_entropy(-1e-6), std::domain_error);

    const std::vector<PureState> states{PureState::basis(2, 0), PureState::basis(2, 1)};
    Eigen::VectorXd weights(2);
    weights << 0.8, 0.2;
    const double mixed = von_neumann_entropy(density_from_pure(states, weights));
    CHECK(mixed == doctest::Approx(0.7219280948873623).epsilon(1e-14));
    CHECK(mixed == doctest::Approx(binary_entropy(0.8)).epsilon(1e-14));
}

TEST_CASE("schmidt_decompose splits a maximally entangled pair evenly") {
    const SchmidtForm form = schmidt_decompose(bell_pair(), 1);
    REQUIRE(form.coefficients.size() == 2);
    CHECK(form.coefficients[0] == doctest::Approx(kSqrtHalf));
    CHECK(form.coefficients[1] == doctest::Approx(kSqrtHalf));
    CHECK(form.left_dims == Dims{2});
    CHECK(form.right_dims == Dims{2});
    CHECK(std::abs(form.left_basis[0].dot(form.left_basis[1])) < 1e-12);
    CHECK(std::abs(form.right_basis[0].dot(form.right_basis[1])) < 1e-12);
}

TEST_CASE("schmidt_decompose drops null directions for product states") {
    const PureState prod = tensor(PureState::basis(2, 1), PureState::basis(3, 0));
    const SchmidtForm form = schmidt_decompose(prod, 1);
    REQUIRE(form.coefficients.size() == 1);
    CHECK(form.coefficients[0] == doctest::Approx(1.0));
}

TEST_CASE("schmidt_decompose reconstructs the state it was given") {
    std::mt19937_64 rng(17);
    const PureState state = random_state(Dims{2, 2, 3}, rng);
    const SchmidtForm form = schmidt_decompose(state, 2);
    CHECK(form.left_dims == Dims{2, 2});
    CHECK(form.right_dims == Dims{3});

    Vector rebuilt = Vector::Zero(state.dim());
    for (std::size_t k = 0; k < form.coefficients.size(); ++k) {
        for (Eigen::Index i = 0; i < form.left_basis[k].size(); ++i) {
            rebuilt.segment(i * 3, 3) +=
                form.coefficients[k] * form.left_basis[k][i] * form.right_basis[k];
        }
    }
    CHECK((rebuilt - state.amplitudes()).norm() < 1e-12);

    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < form.coefficients.size(); ++k) {
        CHECK(form.coefficients[k] >= form.coefficients[k + 1]);
    }
    for (double c : form.coefficients) sum += c * c;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(schmidt_decompose(state, 0), std::invalid_argument);
    CHECK_THROWS_AS(schmidt_decompose(state, 3), std::invalid_argument);
}

TEST_CASE("apply_on_subsystem acts on the addressed register only") {
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    const PureState zz = tensor(PureState::basis(2, 0), PureState::basis(2, 0));
    const AppliedState flipped = apply_on_subsystem(x, zz, {1});
    CHECK(flipped.norm == doctest::Approx(1.0));
    CHECK(flipped.amplitudes[1].real() == doctest::Approx(1.0));  // |0,1>
}

TEST_CASE("apply_on_subsystem spans non-adjacent registers") {
    Matrix x(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    Matrix xz = Matrix::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) xz(a * 2 + b, c * 2 + d) = x(a, c) * z(b, d);

    const PureState in = tensor(tensor(PureState::basis(2, 0), PureState::basis(2, 0)),
                                PureState::basis(2, 1));
    const AppliedState out = apply_on_subsystem(xz, in, {0, 2});
    // x flips register 0, z negates register 2's |1>: expect -|1,0,1>.
    CHECK(out.amplitudes[5].real() == doctest::Approx(-1.0));
    CHECK(out.norm == doctest::Approx(1.0));
}

TEST_CASE("apply_on_subsystem reports the norm of non-unitary images") {
    Matrix project0 = Matrix::Zero(2, 2);
    project0(0, 0) = 1.0;
    Vector plus(2);
    plus << kSqrtHalf, kSqrtHalf;
    const AppliedState cut = apply_on_subsystem(project0, PureState(plus, Dims{2}), {0});
    CHECK(cut.norm == doctest::Approx(kSqrtHalf));
    const PureState unit = cut.normalized();
    CHECK(unit.amplitudes()[0].real() == doctest::Approx(1.0));

    Matrix zero = Matrix::Zero(2, 2);
    CHECK_THROWS_AS(apply_on_subsystem(zero, PureState(plus, Dims{2}), {0}).normalized(),
                    std::runtime_error);
}

TEST_CASE("apply_on_subsystem validates operator shape and targets") {
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    const PureState state = bell_pair();
    CHECK_THROWS_AS(apply_on_subsystem(Matrix::Identity(3, 3), state, {0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_on_subsystem(x, state, {2}), std::invalid_argument);
    CHECK_THROWS_AS(apply_on_subsystem(x, state, {0, 0}), std::invalid_argument);
}

TEST_CASE("both marginals of a pure state carry the same entropy") {
    std::mt19937_64 rng(99);
    const std::vector<std::pair<Dims, int>> splits{
        {Dims{2, 2}, 1}, {Dims{2, 3}, 1}, {Dims{3, 4}, 1}, {Dims{2, 2, 2}, 2}};
    for (const auto& [dims, cut] : splits) {
        for (int trial = 0; trial < 5; ++trial) {
            const PureState state = random_state(dims, rng);
            const DensityMatrix rho = density_from_pure({state}, Eigen::VectorXd::Ones(1));
            std::vector<int> left, right;
            for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
                (i < cut ? left : right).push_back(i);
            }
            const double sa = von_neumann_entropy(partial_trace(rho, left));
            const double sb = von_neumann_entropy(partial_trace(rho, right));
            CHECK(std::abs(sa - sb) < 1e-10);
        }
    }
}
