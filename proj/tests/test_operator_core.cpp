#include <numbers>

#include "support.hpp"

#include "qpr/quasirep.hpp"

using namespace qpr;
using namespace qpr::test;
using std::numbers::pi;

TEST_CASE("bloch_to_density at the poles, the centre and +x") {
    CHECK(max_abs(bloch_to_density(BlochVector(0, 0, 1)).matrix() - density_oracle(Vec3(0, 0, 1))) < 1e-15);
    const auto mixed = bloch_to_density(BlochVector(0, 0, 0));
    CHECK(max_abs(mixed.matrix() - 0.5 * CMatrix::Identity(2, 2)) < 1e-15);
    const auto plus_x = bloch_to_density(BlochVector(1, 0, 0));
    CHECK(plus_x(0, 1).real() == doctest::Approx(0.5));
    CHECK(plus_x(1, 0).real() == doctest::Approx(0.5));
    CHECK(plus_x(0, 0).real() == doctest::Approx(0.5));
}

TEST_CASE("bloch_to_density rejects vectors outside the ball") {
    CHECK_THROWS_AS(bloch_to_density(BlochVector(0.8, 0.8, 0)), InvalidStateError);
    CHECK_NOTHROW(bloch_to_density(BlochVector(0, 0, 1 + 1e-12)));
}

TEST_CASE("density_to_bloch examples") {
    const auto r0 = density_to_bloch(HermitianOp(0.5 * CMatrix::Identity(2, 2)));
    CHECK(r0.norm() < 1e-15);
    CMatrix up = CMatrix::Zero(2, 2);
    up(0, 0) = 1;
    CHECK((density_to_bloch(HermitianOp(up)).vec() - Vec3(0, 0, 1)).norm() < 1e-15);
    const double h = std::numbers::sqrt2 / 2;
    CMatrix m = 0.5 * (CMatrix::Identity(2, 2) + h * (pauli_x() + pauli_z()));
    CHECK((density_to_bloch(HermitianOp(m)).vec() - Vec3(h, 0, h)).norm() < 1e-15);
    CHECK_THROWS_AS(density_to_bloch(HermitianOp::identity(3)), DimensionError);
}

TEST_CASE("overlap examples") {
    const auto up = bloch_to_density(BlochVector(0, 0, 1));
    CHECK(overlap(up, bloch_to_density(BlochVector(0, 0, -1))) == doctest::Approx(0.0));
    CHECK(overlap(up, up) == doctest::Approx(1.0));
    CHECK(overlap(up, bloch_to_density(BlochVector(1, 0, 0))) == doctest::Approx(0.5));
    CHECK_THROWS_AS(overlap(up, HermitianOp::identity(3)), DimensionError);
}

TEST_CASE("basis_from_bloch builds antipodal orthogonal projectors") {
    const double s = 1 / std::sqrt(3.0);
    const auto b = basis_from_bloch(BlochVector(s, s, s));
    CHECK(overlap(b.plus(), b.minus()) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(max_abs((b.plus() + b.minus()).matrix() - CMatrix::Identity(2, 2)) < 1e-15);
    CHECK(max_abs(b.plus().matrix() * b.plus().matrix() - b.plus().matrix()) < 1e-15);
    const auto z = basis_from_bloch(BlochVector(0, 0, 1));
    CHECK(std::abs(z.plus()(0, 0) - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(z.minus()(1, 1) - Complex(1, 0)) < 1e-15);
    CHECK_THROWS_AS(basis_from_bloch(BlochVector(0.5, 0, 0)), InvalidStateError);
}

TEST_CASE("QuditBasis validation") {
    std::vector<CVector> good(2, CVector::Zero(2));
    good[0](0) = 1;
    good[1](1) = 1;
    CHECK_NOTHROW(QuditBasis::from_vectors(good));
    std::vector<CVector> bad = good;
    bad[1](0) = 1;
    CHECK_THROWS_AS(QuditBasis::from_vectors(bad), InvalidBasisError);
}

TEST_CASE("HermitianOp rejects non-Hermitian input") {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1;
    CHECK_THROWS_AS(HermitianOp{m}, InvalidArgumentError);
    CHECK_THROWS_AS(HermitianOp(CMatrix::Zero(2, 3)), InvalidArgumentError);
}

TEST_CASE("rotation_unitary named examples") {
    CHECK(equal_up_to_phase(rotation_unitary(BlochVector(0, 0, 1), 0), CMatrix::Identity(2, 2)));
    CMatrix minus_i_y = Complex(0, -1) * pauli_y();
    CHECK(max_abs(rotation_unitary(BlochVector(0, 1, 0), pi) - minus_i_y) < 1e-15);

    CMatrix gamma = CMatrix::Zero(2, 2);
    gamma(0, 0) = std::polar(1.0, 2 * pi / 3);
    gamma(1, 1) = std::polar(1.0, -2 * pi / 3);
    // Gamma rotates by +2pi/3 about z, which is -4pi/3 in this convention.
    CHECK(equal_up_to_phase(rotation_unitary(BlochVector(0, 0, 1), -4 * pi / 3), gamma));
    CHECK(equal_up_to_phase(rotation_unitary(BlochVector(0, 0, 1), 2 * pi / 3), gamma));
    CHECK(equal_up_to_phase(rotation_unitary(BlochVector(0, 0, 1), 4 * pi / 3), gamma.adjoint()));
    CHECK_THROWS_AS(rotation_unitary(BlochVector(0, 0, 0), 1.0), InvalidArgumentError);
}

TEST_CASE("property: rotation_unitary acts on Bloch vectors as the Rodrigues rotation") {
    auto rng = rng_for(11);
    std::uniform_real_distribution<double> angle(-2 * pi, 2 * pi);
    for (int t = 0; t < 200; ++t) {
        const Vec3 n = unit_vector(rng);
        const Vec3 r = ball_vector(rng);
        const double a = angle(rng);
        const CMatrix u = rotation_unitary(BlochVector(n), a);
        CHECK(is_unitary(u));
        const auto rotated = density_to_bloch(bloch_to_density(BlochVector(r)).conjugated(u));
        CHECK((rotated.vec() - rodrigues(n, a, r)).norm() < 1e-12);
    }
}

TEST_CASE("property: rotation composition adds angles") {
    auto rng = rng_for(12);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int t = 0; t < 100; ++t) {
        const BlochVector n(unit_vector(rng));
        const double a = angle(rng), b = angle(rng);
        CHECK(equal_up_to_phase(rotation_unitary(n, a) * rotation_unitary(n, b), rotation_unitary(n, a + b)));
    }
}

TEST_CASE("property: round trip, purity and overlap on random states") {
    auto rng = rng_for(13);
    for (int t = 0; t < 500; ++t) {
        const Vec3 r = ball_vector(rng);
        const Vec3 s = ball_vector(rng);
        const auto rho = bloch_to_density(BlochVector(r));
        const auto omega = bloch_to_density(BlochVector(s));
        CHECK(max_abs(rho.matrix() - density_oracle(r)) < 1e-15);
        CHECK((density_to_bloch(rho).vec() - r).norm() <= 1e-12);
        CHECK(std::abs(trace_product(rho, rho) - 0.5 * (1 + r.squaredNorm())) <= 1e-12);
        CHECK(std::abs(overlap(rho, omega) - 0.5 * (1 + r.dot(s))) <= 1e-12);
        CHECK(std::abs(rho.trace() - 1.0) <= 1e-15);
    }
}

TEST_CASE("property: exact round trip and overlap over the rationals") {
    auto rng = rng_for(14);
    std::uniform_int_distribution<int> num(-50, 50);
    for (int t = 0; t < 200; ++t) {
        ExactBloch r{{Rational(num(rng), 101), Rational(num(rng), 97), Rational(num(rng), 89)}};
        ExactBloch s{{Rational(num(rng), 83), Rational(num(rng), 79), Rational(num(rng), 73)}};
        CHECK(density_to_bloch(bloch_to_density(r)) == r);
        const Rational dot = r.r[0] * s.r[0] + r.r[1] * s.r[1] + r.r[2] * s.r[2];
        CHECK(overlap(bloch_to_density(r), bloch_to_density(s)) == (1 + dot) / 2);
        CHECK(bloch_to_density(r).trace() == 1);
    }
}

TEST_CASE("hermitian_operator_basis spans the Hermitian operators") {
    for (int d : {2, 3, 4}) {
        const auto basis = hermitian_operator_basis(d);
        REQUIRE(static_cast<int>(basis.size()) == d * d);
        Eigen::MatrixXd m(d * d, d * d);
        for (int k = 0; k < d * d; ++k) m.col(k) = real_vectorize(basis[k]);
        CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(m).rank() == d * d);
    }
}
