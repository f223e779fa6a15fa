#include <numbers>

#include "support.hpp"

#include "qpr/certifier.hpp"

using namespace qpr;
using namespace qpr::test;
using std::numbers::pi;

namespace {

std::vector<QubitBasis> stabilizer() { return family_bases({FamilyKind::Stabilizer, 0, 0, {}}); }

std::vector<QubitBasis> coplanar() {
    const double h = std::numbers::sqrt2 / 2;
    return {QubitBasis(BlochVector(1, 0, 0)), QubitBasis(BlochVector(0, 0, 1)), QubitBasis(BlochVector(h, 0, h))};
}

std::vector<QubitBasis> random_bases(std::mt19937_64& rng, std::size_t n) {
    std::vector<QubitBasis> out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(BlochVector(unit_vector(rng)));
    return out;
}

/// Exact check of q against normalization and overlap constraints, computed
/// directly from sign vectors and rationalized Bloch vectors.
bool exact_constraints_hold(const std::vector<QubitBasis>& bases, const std::vector<Rational>& q) {
    const std::size_t n = bases.size();
    std::vector<ExactBloch> r;
    for (const auto& b : bases) r.push_back(rationalize(b.direction()));
    auto sign = [n](std::size_t p, std::size_t j) { return (p >> (n - 1 - j)) & 1U ? -1 : 1; };
    for (const auto& v : q)
        if (v < 0) return false;
    for (std::size_t j = 0; j < n; ++j)
        for (int g : {1, -1}) {
            Rational s = 0;
            for (std::size_t p = 0; p < q.size(); ++p)
                if (sign(p, j) == g) s += q[p];
            if (s != 1) return false;
        }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k)
            for (int g : {1, -1})
                for (int h : {1, -1}) {
                    Rational s = 0;
                    for (std::size_t p = 0; p < q.size(); ++p)
                        if (sign(p, j) == g && sign(p, k) == h) s += q[p];
                    const Rational dot = r[j].r[0] * r[k].r[0] + r[j].r[1] * r[k].r[1] + r[j].r[2] * r[k].r[2];
                    if (s != (1 + g * h * dot) / 2) return false;
                }
    return true;
}

/// y^T A <= 0, y^T b > 0 with A, b rebuilt from the problem's rows.
bool exact_farkas_holds(const FeasibilityProblem& prob, const std::vector<Rational>& y) {
    const auto a = prob.exact_matrix();
    for (std::size_t j = 0; j < a.cols; ++j) {
        Rational s = 0;
        for (std::size_t i = 0; i < a.rows; ++i) s += y[i] * a(i, j);
        if (s > 0) return false;
    }
    Rational yb = 0;
    for (std::size_t i = 0; i < a.rows; ++i) yb += y[i] * prob.b_exact[i];
    return yb > 0;
}

}  // namespace

TEST_CASE("pattern space") {
    PatternSpace s(3);
    CHECK(s.size() == 8);
    CHECK(s.label(0) == "+++");
    CHECK(s.label(5) == "-+-");
    CHECK(s.index_of({-1, 1, -1}) == 5);
    for (std::size_t j = 0; j < 3; ++j)
        for (int g : {1, -1}) {
            const auto c = s.compatible(j, g);
            CHECK(c.size() == 4);
            for (auto p : c) CHECK(s.sign(p, j) == g);
        }
}

TEST_CASE("build_problem sizes and entries") {
    CHECK(build_problem(stabilizer()).space.size() == 8);
    const auto one = build_problem({QubitBasis(BlochVector(0, 0, 1))});
    CHECK(one.space.size() == 2);
    CHECK(one.a.rows == 2);
    const auto four = build_problem(family_bases({FamilyKind::Cuboid, 0.5, 0.5, {}}));
    CHECK(four.space.size() == 16);
    CHECK(four.a.rows == 2 * 4 + 4 * 6);
    for (double v : four.a.data) CHECK((v == 0.0 || v == 1.0));
    for (double v : four.b) CHECK((v >= 0.0 && v <= 1.0));
}

TEST_CASE("duplicate and antipodal bases are rejected") {
    CHECK_THROWS_AS(build_problem({QubitBasis(BlochVector(0, 0, 1)), QubitBasis(BlochVector(0, 0, 1))}),
                    DuplicateBasisError);
    CHECK_THROWS_AS(build_problem({QubitBasis(BlochVector(0, 0, 1)), QubitBasis(BlochVector(0, 0, -1))}),
                    DuplicateBasisError);
    CHECK_THROWS_AS(build_problem({}), InvalidArgumentError);
}

TEST_CASE("single basis forces q(+) = q(-) = 1") {
    const auto cert = certify({QubitBasis(BlochVector(0, 0, 1))}, ArithmeticMode::Exact);
    REQUIRE(cert.feasible());
    CHECK(cert.q_exact == std::vector<Rational>{1, 1});
    CHECK_FALSE(cert.frame_verified);
    CHECK_FALSE(cert.frame_note.empty());
}

TEST_CASE("stabilizer bases are feasible with q = 1/4 after symmetrizing") {
    CertifyOptions opts;
    opts.symmetrize = true;
    const auto cert = certify(stabilizer(), opts);
    REQUIRE(cert.feasible());
    CHECK(cert.symmetrized);
    for (const auto& q : cert.q_exact) CHECK(q == Rational(1, 4));
    CHECK(exact_constraints_hold(stabilizer(), cert.q_exact));
    CHECK(cert.frame_verified);
}

TEST_CASE("coplanar triple is infeasible in both modes") {
    const auto prob = build_problem(coplanar());
    const auto exact = certify(coplanar(), ArithmeticMode::Exact);
    CHECK_FALSE(exact.feasible());
    CHECK(exact.witness_verified);
    CHECK(exact_farkas_holds(prob, exact.farkas_exact));
    CHECK_FALSE(certify(coplanar(), ArithmeticMode::Float).feasible());
}

TEST_CASE("icosahedron is infeasible with an exact witness") {
    const auto bases = family_bases({FamilyKind::Icosahedron, 0, 0, {}});
    const auto cert = certify(bases, ArithmeticMode::Exact);
    CHECK_FALSE(cert.feasible());
    CHECK(exact_farkas_holds(build_problem(bases), cert.farkas_exact));
}

TEST_CASE("threshold scans") {
    const double d3 = threshold_scan({FamilyKind::D3, 0, 0, {}}, "theta", 0.5, pi / 2, 1e-10);
    CHECK(std::abs(std::sin(d3) * std::sin(d3) - 8.0 / 9.0) <= 1e-6);
    const double c2 = threshold_scan({FamilyKind::C2, pi / 3, 0, {}}, "phi", 0.01, pi / 2, 1e-10);
    CHECK(std::abs(std::cos(c2) - std::sqrt(3.0) / 2) <= 1e-6);
    CHECK_THROWS_AS(threshold_scan({FamilyKind::D3, 0, 0, {}}, "theta", 0.05, 0.5, 1e-6), NoThresholdError);
    CHECK_THROWS_AS(threshold_scan({FamilyKind::D3, 0, 0, {}}, "psi", 0.05, 0.5, 1e-6), InvalidArgumentError);
}

TEST_CASE("cuboid checks") {
    const double theta = std::acos(1 / std::sqrt(3.0));
    auto cube = family_bases({FamilyKind::Cuboid, theta, pi / 4, {}});
    CHECK(is_right_cuboid(cube));
    CHECK(certify(cube, ArithmeticMode::Float).feasible());
    CHECK(certify(cube, ArithmeticMode::Exact).feasible());

    auto tilted = cube;
    tilted[3] = QubitBasis(BlochVector(rodrigues(Vec3(1, 0, 0), 1e-3, cube[3].direction().vec())));
    CHECK_FALSE(is_right_cuboid(tilted));
    CHECK_FALSE(certify(tilted, ArithmeticMode::Float).feasible());

    auto five = cube;
    five.emplace_back(BlochVector(0, 0, 1));
    CHECK_FALSE(certify(five, ArithmeticMode::Exact).feasible());
    CHECK_FALSE(is_right_cuboid(stabilizer()));
}

TEST_CASE("d3 limit plus z is feasible") {
    auto bases = family_bases({FamilyKind::D3, std::asin(std::sqrt(8.0 / 9.0)), 0, {}});
    bases.emplace_back(BlochVector(0, 0, 1));
    const auto cert = certify(bases, ArithmeticMode::Float);
    CHECK(cert.feasible());
    CHECK(cert.frame_verified);
}

TEST_CASE("gram symmetries of the stabilizer triple") {
    // Signed permutations of three orthogonal axes: 3! * 2^3.
    CHECK(gram_symmetries(stabilizer()).size() == 48);
}

TEST_CASE("verify reports on small runs") {
    const auto cop = verify_coplanar_triples(40, 3);
    CHECK(cop.passed());
    CHECK(cop.infeasible == 40);
    const auto cub = verify_cuboid_classification(40, 3, 5);
    CHECK(cub.passed());
    CHECK(cub.grid_feasible == 25);
    const auto five = verify_max_bases(30, 3);
    CHECK(five.passed());
    CHECK(five.random_infeasible == 30);
}

TEST_CASE("property: exact soundness on random triples and quadruples") {
    auto rng = rng_for(41);
    for (std::size_t n : {3, 4}) {
        for (int t = 0; t < 30; ++t) {
            const auto bases = random_bases(rng, n);
            const auto cert = certify(bases, ArithmeticMode::Exact);
            if (cert.feasible())
                CHECK(exact_constraints_hold(bases, cert.q_exact));
            else
                CHECK(exact_farkas_holds(build_problem(bases), cert.farkas_exact));
        }
    }
}

TEST_CASE("property: verdict invariant under global rotation and sign flips") {
    auto rng = rng_for(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<QubitBasis>> sets{stabilizer(), coplanar(),
                                              family_bases({FamilyKind::Cuboid, 0.4, 1.1, {}}),
                                              family_bases({FamilyKind::D3, 1.0, 0, {}}),
                                              family_bases({FamilyKind::D3, 1.4, 0, {}})};
    for (int t = 0; t < 20; ++t) sets.push_back(random_bases(rng, 3));
    for (const auto& bases : sets) {
        const bool base = certify(bases, ArithmeticMode::Float).feasible();
        const auto rotated = rotate_bases(bases, random_rotation(rng));
        CHECK(certify(rotated, ArithmeticMode::Float).feasible() == base);
        auto flipped = bases;
        for (auto& b : flipped)
            if (u(rng) < 0.5) b = b.flipped();
        CHECK(certify(flipped, ArithmeticMode::Float).feasible() == base);
    }
}

TEST_CASE("property: subsets of feasible sets are feasible") {
    const auto cuboid = family_bases({FamilyKind::Cuboid, 0.9, 0.5, {}});
    REQUIRE(certify(cuboid, ArithmeticMode::Float).feasible());
    for (std::size_t mask = 1; mask < 15; ++mask) {
        std::vector<QubitBasis> subset;
        for (std::size_t j = 0; j < 4; ++j)
            if (mask & (std::size_t{1} << j)) subset.push_back(cuboid[j]);
        CHECK(certify(subset, ArithmeticMode::Float).feasible());
    }
}

TEST_CASE("property: rebuilt frames reproduce the Born rule") {
    auto rng = rng_for(43);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& bases : {stabilizer(), family_bases({FamilyKind::Cuboid, 0.3, 0.8, {}}),
                              family_bases({FamilyKind::C2, 1.0, 1.2, {}})}) {
        const auto cert = certify(bases, ArithmeticMode::Float);
        REQUIRE(cert.feasible());
        const auto rep = frame_from_certificate(cert, bases);
        for (int t = 0; t < 100; ++t) {
            const auto rho = bloch_to_density(BlochVector(ball_vector(rng)));
            const double a = u(rng);
            const HermitianOp e(a * CMatrix::Identity(2, 2) + sigma_dot(std::min(a, 1 - a) * u(rng) * unit_vector(rng)));
            CHECK(born_residual(rep, rho, e) <= 1e-10);
        }
    }
}
