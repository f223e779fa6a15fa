#include <algorithm>
#include <numbers>

#include "support.hpp"

#include "qpr/qubit_families.hpp"

using namespace qpr;
using namespace qpr::test;

namespace {

const FamilySpec kStabilizer{FamilyKind::Stabilizer, 0, 0, {}};

/// Table I: sign of basis j at (eps, a) is eps * t_j(a).
int table_sign(const std::string& label, int j) {
    static const int t[3][4] = {{1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
    const int eps = label[0] == '+' ? 1 : -1;
    return eps * t[j][label[1] - '0'];
}

std::vector<std::string> expected_support(int j, int gamma) {
    std::vector<std::string> out;
    for (const char* l : {"+0", "+1", "+2", "+3", "-0", "-1", "-2", "-3"})
        if (table_sign(l, j) == gamma) out.emplace_back(l);
    return out;
}

QuasiRep stabilizer_rep() { return build_family_frame(kStabilizer); }

}  // namespace

TEST_CASE("OnticSpace rejects duplicates and unknown labels") {
    CHECK_THROWS_AS(OnticSpace({"a", "b", "a"}), InvalidArgumentError);
    OnticSpace s({"a", "b"});
    CHECK(s.index_of("b") == 1);
    CHECK_THROWS_AS(s.index_of("c"), UnknownPointError);
}

TEST_CASE("mu on the stabilizer representation") {
    const auto rep = stabilizer_rep();
    const auto x_plus = bloch_to_density(BlochVector(1, 0, 0));
    const auto supp = expected_support(0, 1);
    for (std::size_t i = 0; i < rep.size(); ++i) {
        const auto& l = rep.space().label(i);
        const bool in = std::find(supp.begin(), supp.end(), l) != supp.end();
        CHECK(mu(rep, x_plus, l) == doctest::Approx(in ? 0.25 : 0.0));
    }
    const auto mixed = HermitianOp(0.5 * CMatrix::Identity(2, 2));
    for (std::size_t i = 0; i < rep.size(); ++i) CHECK(mu(rep, mixed, i) == doctest::Approx(0.125));
}

TEST_CASE("xi on the stabilizer representation") {
    const auto rep = stabilizer_rep();
    for (std::size_t i = 0; i < rep.size(); ++i) {
        CHECK(xi(rep, HermitianOp::identity(2), i) == doctest::Approx(1.0));
        CHECK(xi(rep, HermitianOp::zero(2), i) == doctest::Approx(0.0));
    }
    const auto x_plus = bloch_to_density(BlochVector(1, 0, 0));
    for (const auto& l : expected_support(0, 1)) CHECK(xi(rep, x_plus, l) == doctest::Approx(1.0));
    for (const auto& l : expected_support(0, -1)) CHECK(xi(rep, x_plus, l) == doctest::Approx(0.0));
}

TEST_CASE("born_residual examples") {
    const auto rep = stabilizer_rep();
    const auto x_plus = bloch_to_density(BlochVector(1, 0, 0));
    const auto y_plus = bloch_to_density(BlochVector(0, 1, 0));
    CHECK(born_residual(rep, x_plus, x_plus) <= 1e-15);
    CHECK(overlap(x_plus, y_plus) == doctest::Approx(0.5));
    CHECK(born_residual(rep, x_plus, y_plus) <= 1e-15);
}

TEST_CASE("check_dual_frame accepts built frames and rejects a broken one") {
    const double theta = std::asin(std::sqrt(2.0 / 3.0));
    CHECK(check_dual_frame(build_family_frame({FamilyKind::D3, theta, 0, {}})).ok);
    CHECK(check_dual_frame(build_family_frame({FamilyKind::Cuboid, 0.6, 0.9, {}})).ok);
    CHECK(build_family_frame({FamilyKind::Cuboid, 0.6, 0.9, {}}).size() == 6);

    const auto rep = stabilizer_rep();
    auto g = rep.g_ops();
    g[3] = HermitianOp::zero(2);
    const QuasiRep broken(rep.space(), rep.f_ops(), g);
    CHECK_FALSE(check_dual_frame(broken).ok);
}

TEST_CASE("support sets follow Table I") {
    const auto rep = stabilizer_rep();
    const Vec3 axes[3] = {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
    for (int j = 0; j < 3; ++j) {
        for (int gamma : {1, -1}) {
            const auto rho = bloch_to_density(BlochVector(Vec3(gamma * axes[j])));
            auto got = support_labels(rep, support(rep, rho));
            auto want = expected_support(j, gamma);
            std::sort(got.begin(), got.end());
            std::sort(want.begin(), want.end());
            CHECK(got == want);
        }
    }
    CHECK(support(rep, HermitianOp(0.5 * CMatrix::Identity(2, 2))).size() == 8);
}

TEST_CASE("q_function values") {
    const auto q = q_function(stabilizer_rep());
    for (double v : q.values) CHECK(v == doctest::Approx(0.25));
    for (double theta : {0.3, 0.8, 1.1}) {
        const double s2 = std::sin(theta) * std::sin(theta);
        const auto qd = q_function(build_family_frame({FamilyKind::D3, theta, 0, {}}));
        for (const char* l : {"+0", "-0"}) CHECK(qd.at(l) == doctest::Approx(1 - 9.0 / 8.0 * s2));
        for (const char* l : {"+1", "+2", "+3", "-1", "-2", "-3"}) CHECK(qd.at(l) == doctest::Approx(3.0 / 8.0 * s2));
        CHECK(qd.total() == doctest::Approx(2.0));
    }
}

TEST_CASE("is_nonnegative_basis") {
    const auto rep = stabilizer_rep();
    CHECK(is_nonnegative_basis(rep, QubitBasis(BlochVector(0, 0, 1))));
    const double s = 1 / std::sqrt(3.0);
    CHECK_FALSE(is_nonnegative_basis(rep, QubitBasis(BlochVector(s, s, s))));
    for (const auto& b : family_bases({FamilyKind::Cuboid, 0.5, 1.1, {}}))
        CHECK(is_nonnegative_basis(build_family_frame({FamilyKind::Cuboid, 0.5, 1.1, {}}), b));
}

TEST_CASE("lemma_structure_report") {
    CHECK(lemma_structure_report(stabilizer_rep(), family_bases(kStabilizer)).all_passed());
    const FamilySpec cub{FamilyKind::Cuboid, 0.7, 0.3, {}};
    CHECK(lemma_structure_report(build_family_frame(cub), family_bases(cub)).all_passed());
    auto bases = family_bases(kStabilizer);
    const double s = 1 / std::sqrt(3.0);
    bases.emplace_back(BlochVector(s, s, s));
    const auto report = lemma_structure_report(stabilizer_rep(), bases);
    CHECK_FALSE(report.preconditions_ok);
    CHECK_FALSE(report.failures.empty());
}

TEST_CASE("property: convex-linearity and normalization of mu") {
    auto rng = rng_for(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto rep = build_family_frame({FamilyKind::C2, 0.9, 1.3, {}});
    for (int t = 0; t < 200; ++t) {
        const auto rho = bloch_to_density(BlochVector(ball_vector(rng)));
        const auto omega = bloch_to_density(BlochVector(ball_vector(rng)));
        const double a = u(rng);
        const auto mix = a * rho + (1 - a) * omega;
        double total = 0;
        for (std::size_t i = 0; i < rep.size(); ++i) {
            CHECK(std::abs(mu(rep, mix, i) - (a * mu(rep, rho, i) + (1 - a) * mu(rep, omega, i))) <= 1e-12);
            total += mu(rep, rho, i);
        }
        CHECK(std::abs(total - 1) <= 1e-12);
    }
}

TEST_CASE("property: born rule and POVM completeness on every family") {
    auto rng = rng_for(32);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const FamilySpec& spec : std::vector<FamilySpec>{{FamilyKind::Single, 0, 0, {}},
                                                          {FamilyKind::Pair, 0.4, 0, {}},
                                                          {FamilyKind::D3, 1.0, 0, {}},
                                                          {FamilyKind::D3, 1.0, 0, 0.2},
                                                          {FamilyKind::C2, 1.2, 1.0, {}},
                                                          {FamilyKind::Cuboid, 1.0, 0.2, {}},
                                                          kStabilizer}) {
        const auto rep = build_family_frame(spec);
        REQUIRE(check_dual_frame(rep).ok);
        CHECK(frame_rank(rep) == 4);
        for (int t = 0; t < 100; ++t) {
            const auto rho = bloch_to_density(BlochVector(ball_vector(rng)));
            const double a = u(rng);
            const double b = std::min(a, 1 - a) * u(rng);
            const HermitianOp e(a * CMatrix::Identity(2, 2) + sigma_dot(b * unit_vector(rng)));
            CHECK(born_residual(rep, rho, e) <= 1e-10);
            const auto xi_e = indicator(rep, e);
            const auto xi_rest = indicator(rep, HermitianOp::identity(2) - e);
            for (std::size_t i = 0; i < rep.size(); ++i) CHECK(std::abs(xi_e[i] + xi_rest[i] - 1) <= 1e-12);
        }
    }
}

TEST_CASE("property: disjoint supports iff orthogonal, across families") {
    for (const FamilySpec& spec : std::vector<FamilySpec>{{FamilyKind::D3, 0.7, 0, {}},
                                                          {FamilyKind::C2, 1.1, 1.4, {}},
                                                          {FamilyKind::Cuboid, 0.8, 0.6, {}},
                                                          kStabilizer}) {
        const auto rep = build_family_frame(spec);
        std::vector<HermitianOp> states;
        for (const auto& b : family_bases(spec)) {
            states.push_back(b.plus());
            states.push_back(b.minus());
        }
        for (std::size_t i = 0; i < states.size(); ++i) {
            for (std::size_t k = i + 1; k < states.size(); ++k) {
                const auto si = support(rep, states[i]);
                const auto sk = support(rep, states[k]);
                std::vector<std::size_t> common;
                std::set_intersection(si.begin(), si.end(), sk.begin(), sk.end(), std::back_inserter(common));
                CHECK(common.empty() == (std::abs(overlap(states[i], states[k])) <= 1e-9));
            }
        }
    }
}
