#include <algorithm>
#include <numbers>

#include "support.hpp"

#include "qpr/certifier.hpp"
#include "qpr/qudit_tools.hpp"

using namespace qpr;
using namespace qpr::test;

namespace {

BasisFamily xyz() { return BasisFamily::from_qubit(family_bases({FamilyKind::Stabilizer, 0, 0, {}})); }

BasisFamily coplanar() {
    const double h = std::numbers::sqrt2 / 2;
    return BasisFamily::from_qubit(
        {QubitBasis(BlochVector(1, 0, 0)), QubitBasis(BlochVector(0, 0, 1)), QubitBasis(BlochVector(h, 0, h))});
}

/// Haar-random unitary by QR of a complex Gaussian matrix.
CMatrix random_unitary(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix z(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) z(i, k) = Complex(n(rng), n(rng));
    Eigen::HouseholderQR<CMatrix> qr(z);
    return qr.householderQ() * CMatrix::Identity(d, d);
}

HermitianOp random_pure(int d, std::mt19937_64& rng) {
    return HermitianOp::projector(random_unitary(d, rng).col(0));
}

}  // namespace

TEST_CASE("disparate examples") {
    CHECK(is_disparate(xyz()));
    CHECK_FALSE(is_disparate(coplanar()));
    const auto m = mutually_unbiased_bases(3);
    REQUIRE(m.size() == 4);
    CHECK(is_disparate(BasisFamily(3, {m[0], m[1], m[2]})));
    // N > d + 1 is never disparate.
    auto four = family_bases({FamilyKind::Cuboid, 0.4, 0.7, {}});
    CHECK_FALSE(is_disparate(BasisFamily::from_qubit(four)));
}

TEST_CASE("mutually unbiased bases") {
    for (int d : {2, 3, 5}) {
        const auto m = mutually_unbiased_bases(d);
        REQUIRE(static_cast<int>(m.size()) == d + 1);
        for (std::size_t a = 0; a < m.size(); ++a)
            for (std::size_t b = a + 1; b < m.size(); ++b)
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k) CHECK(overlap(m[a][j], m[b][k]) == doctest::Approx(1.0 / d));
    }
    CHECK_THROWS_AS(mutually_unbiased_bases(4), InvalidArgumentError);
}

TEST_CASE("mutual non-orthogonality") {
    CHECK(mutually_nonorthogonal(xyz()));
    auto bases = family_bases({FamilyKind::Stabilizer, 0, 0, {}});
    bases.emplace_back(BlochVector(std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2, 0));
    // The new basis has (1,1,0)/sqrt2 against x at overlap (1 + 1/sqrt2)/2: still non-orthogonal.
    CHECK(mutually_nonorthogonal(BasisFamily::from_qubit(bases)));
    const auto m = mutually_unbiased_bases(3);
    CHECK(mutually_nonorthogonal(BasisFamily(3, m)));
}

TEST_CASE("hull decomposition examples") {
    const auto xz = BasisFamily::from_qubit({QubitBasis(BlochVector(1, 0, 0)), QubitBasis(BlochVector(0, 0, 1))});
    const auto z_plus = bloch_to_density(BlochVector(0, 0, 1));
    const auto d1 = hull_decompose(xz, z_plus);
    CHECK(d1.epsilon == doctest::Approx(1.0));
    CHECK(d1.p[1][0] == doctest::Approx(1.0));
    CHECK(decomposition_residual(xz, z_plus, d1) <= 1e-9);

    const double s = 1 / std::sqrt(3.0);
    const auto magic = bloch_to_density(BlochVector(s, s, s));
    const auto d2 = hull_decompose(xyz(), magic);
    CHECK(d2.epsilon == doctest::Approx(s));
    CHECK(d2.zero_in_every_basis);
    CHECK(decomposition_residual(xyz(), magic, d2) <= 1e-9);

    CHECK_THROWS_AS(hull_decompose(xz, bloch_to_density(BlochVector(0, 1, 0))), SpanError);
}

TEST_CASE("theorem 3 examples") {
    const auto a = check_theorem3(xyz());
    CHECK(a.precondition_ok);
    CHECK(a.disparate);
    CHECK(a.consistent);
    const auto b = check_theorem3(coplanar());
    CHECK_FALSE(b.disparate);
    REQUIRE(b.nonnegative.has_value());
    CHECK_FALSE(*b.nonnegative);
    CHECK(b.consistent);
    const auto m = mutually_unbiased_bases(3);
    const auto c = check_theorem3(BasisFamily(3, {m[0], m[1], m[2]}));
    CHECK(c.disparate);
    CHECK_FALSE(c.nonnegative.has_value());
    // |0> is shared by two bases, so elements of different bases are orthogonal.
    const double h = std::numbers::sqrt2 / 2;
    std::vector<CVector> e(3, CVector::Zero(3));
    for (int k = 0; k < 3; ++k) e[k](k) = 1;
    const QuditBasis comp = QuditBasis::from_vectors(e);
    const QuditBasis shared = QuditBasis::from_vectors({e[0], h * (e[1] + e[2]), h * (e[1] - e[2])});
    const auto r = check_theorem3(BasisFamily(3, {comp, shared, m[1]}));
    CHECK_FALSE(r.precondition_ok);
    CHECK_FALSE(r.note.empty());
}

TEST_CASE("theorem 4 on the cuboid and on disparate quadruples") {
    for (auto [theta, phi] : {std::pair{0.7, 0.4}, std::pair{0.9553, 0.7854}, std::pair{1.3, 0.2}}) {
        const auto t4 = theorem4_search(BasisFamily::from_qubit(family_bases({FamilyKind::Cuboid, theta, phi, {}})));
        CHECK(t4.applicable);
        CHECK(t4.epsilon == doctest::Approx(1.0 / 3));
        CHECK(t4.expected == doctest::Approx(1.0 / 3));
        CHECK(t4.epsilon_matches);
        REQUIRE(t4.coefficients.size() == 3);
        for (double c : t4.coefficients) CHECK(c == doctest::Approx(1.0 / 3));
    }
    auto rng = rng_for(61);
    BasisFamily r3(3, {random_qudit_basis(3, rng), random_qudit_basis(3, rng), random_qudit_basis(3, rng),
                       random_qudit_basis(3, rng)});
    REQUIRE(is_disparate(r3));
    CHECK_FALSE(theorem4_search(r3).applicable);
    CHECK_FALSE(theorem4_search(BasisFamily(3, mutually_unbiased_bases(3))).applicable);
}

TEST_CASE("theorem 5 bound") {
    CHECK(theorem5_bound(4, 2) == doctest::Approx(1.0 / 3));
    CHECK(theorem5_bound(4, 3) == doctest::Approx(1.0 / 4));
    CHECK(theorem5_bound(5, 2) == doctest::Approx(0.5));
    CHECK(theorem5_bound(6, 3) == doctest::Approx(0.5));
    const auto cub = BasisFamily::from_qubit(family_bases({FamilyKind::Cuboid, 0.6, 0.5, {}}));
    const auto dec = hull_decompose(cub.without(3), cub.bases.back()[0]);
    const auto r = check_theorem5_bound(cub, dec);
    CHECK(r.applicable);
    CHECK(r.given_epsilon == doctest::Approx(1.0 / 3));
    CHECK(r.given_within_bound);
    CHECK(r.maximal_within_bound);
    const auto m = mutually_unbiased_bases(3);
    const BasisFamily mub(3, m);
    CHECK_THROWS_AS(hull_decompose(mub.without(3), m[3][0]), SpanError);
    CHECK_FALSE(check_theorem5_bound(mub, HullDecomposition{}).applicable);
}

TEST_CASE("pattern bound") {
    const auto p2 = pattern_bound(2);
    CHECK(p2.bound == 16);
    CHECK(p2.refined == 14);
    CHECK(pattern_bound(3).bound == 512);
    const auto stab = build_family_frame({FamilyKind::Stabilizer, 0, 0, {}});
    CHECK(pattern_bound(2, &stab).observed == 6u);
    const auto cub = build_family_frame({FamilyKind::Cuboid, 0.7, 0.4, {}});
    const auto pc = pattern_bound(2, &cub);
    CHECK(pc.observed == 8u);
    CHECK(pc.points.size() == 4);
    CHECK_THROWS_AS(pattern_bound(3, &stab), DimensionError);
    CHECK_THROWS_AS(pattern_bound(1), InvalidArgumentError);
}

TEST_CASE("property: disparateness is invariant under relabeling and common unitaries") {
    auto rng = rng_for(62);
    for (int d : {2, 3}) {
        for (int t = 0; t < 20; ++t) {
            std::vector<QuditBasis> bases;
            const int n = (t % 2 == 0) ? 3 : d + 1;
            for (int a = 0; a < n; ++a) bases.push_back(random_qudit_basis(d, rng));
            if (d == 2 && t % 4 == 1) {
                const double h = std::numbers::sqrt2 / 2;
                bases = coplanar().bases;
                bases.push_back(QuditBasis::from_qubit(QubitBasis(BlochVector(-h, 0, h))));
            }
            const BasisFamily fam(d, bases);
            const bool base = is_disparate(fam);

            const CMatrix u = random_unitary(d, rng);
            std::vector<QuditBasis> conj;
            for (const auto& b : bases) conj.push_back(b.conjugated(u));
            CHECK(is_disparate(BasisFamily(d, conj)) == base);

            std::vector<QuditBasis> relabeled;
            for (const auto& b : bases) {
                auto els = b.elements();
                std::shuffle(els.begin(), els.end(), rng);
                relabeled.emplace_back(els);
            }
            std::shuffle(relabeled.begin(), relabeled.end(), rng);
            CHECK(is_disparate(BasisFamily(d, relabeled)) == base);
        }
    }
}

TEST_CASE("property: hull decompositions re-substitute and zero out every basis") {
    auto rng = rng_for(63);
    const BasisFamily mub3(3, mutually_unbiased_bases(3));
    for (int t = 0; t < 30; ++t) {
        std::vector<QubitBasis> q;
        for (int a = 0; a < 3; ++a) q.emplace_back(BlochVector(unit_vector(rng)));
        const auto fam = BasisFamily::from_qubit(q);
        if (!is_disparate(fam)) continue;
        const auto phi = random_pure(2, rng);
        const auto dec = hull_decompose(fam, phi);
        CHECK(decomposition_residual(fam, phi, dec) <= 1e-9);
        CHECK(dec.zero_in_every_basis);

        const auto phi3 = random_pure(3, rng);
        const auto dec3 = hull_decompose(mub3, phi3);
        CHECK(decomposition_residual(mub3, phi3, dec3) <= 1e-9);
        CHECK(dec3.zero_in_every_basis);
    }
}

TEST_CASE("property: qubit theorem checks agree with the certifier") {
    auto rng = rng_for(64);
    for (int t = 0; t < 200; ++t) {
        std::vector<QubitBasis> q;
        for (int a = 0; a < 3; ++a) q.emplace_back(BlochVector(unit_vector(rng)));
        const auto r = check_theorem3(BasisFamily::from_qubit(q));
        REQUIRE(r.precondition_ok);
        CHECK(r.consistent);
    }
    for (int t = 0; t < 200; ++t) {
        std::vector<QubitBasis> q;
        if (t % 2 == 0) {
            std::uniform_real_distribution<double> angle(0.05, std::numbers::pi / 2 - 0.05);
            q = rotate_bases(family_bases({FamilyKind::Cuboid, angle(rng), angle(rng), {}}), random_rotation(rng));
        } else {
            for (int a = 0; a < 4; ++a) q.emplace_back(BlochVector(unit_vector(rng)));
        }
        const bool feasible = certify(q, ArithmeticMode::Float).feasible();
        if (feasible) CHECK(theorem4_search(BasisFamily::from_qubit(q)).epsilon_matches);
        CHECK(feasible == (t % 2 == 0));
    }
}
