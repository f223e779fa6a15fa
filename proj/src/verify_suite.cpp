#include "qpr/verify_suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "qpr/ontic_sim.hpp"
#include "qpr/qudit_tools.hpp"

namespace qpr {

namespace {

using std::numbers::pi;

Json num(double x) { return to_json(TaggedNumber::of(x)); }
Json num(const Rational& x) { return to_json(TaggedNumber::of(x)); }

std::size_t trials_or(const VerifyOptions& o, std::size_t fallback) { return o.trials.value_or(fallback); }
std::uint64_t seed_for(const VerifyOptions& o, int id) { return trial_seed(o.seed, static_cast<std::uint64_t>(id)); }

Json failures_json(const std::vector<std::string>& failures) {
    Json out = Json::array();
    for (std::size_t i = 0; i < failures.size() && i < 10; ++i) out.push_back(failures[i]);
    return out;
}

CriterionResult d3_threshold(const VerifyOptions&) {
    CriterionResult r{1, "d3 threshold", false, Json::object()};
    const auto start = std::chrono::steady_clock::now();
    const double theta = threshold_scan({FamilyKind::D3, 0, 0, {}}, "theta", 0.5, pi / 2, 1e-10);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double s2 = std::sin(theta) * std::sin(theta);
    const double error = std::abs(s2 - 8.0 / 9.0);
    r.details["theta"] = num(theta);
    r.details["sin2_theta"] = num(s2);
    r.details["expected"] = num(Rational(8, 9));
    r.details["abs_error"] = num(error);
    r.details["under_10_seconds"] = seconds < 10.0;
    r.passed = error <= 1e-6 && seconds < 10.0;
    return r;
}

CriterionResult c2_threshold(const VerifyOptions&) {
    CriterionResult r{2, "c2 threshold", true, Json::object()};
    Json points = Json::array();
    for (double theta : {pi / 6, pi / 4, pi / 3}) {
        const double phi = threshold_scan({FamilyKind::C2, theta, 0, {}}, "phi", 0.01, pi / 2, 1e-10);
        const double error = std::abs(std::cos(phi) - std::sin(theta));
        const bool ok = error <= 1e-6;
        r.passed = r.passed && ok;
        points.push_back(Json{{"theta", num(theta)},
                              {"cos_phi", num(std::cos(phi))},
                              {"sin_theta", num(std::sin(theta))},
                              {"abs_error", num(error)},
                              {"passed", ok}});
    }
    r.details["points"] = points;
    return r;
}

CriterionResult stabilizer_uniformity(const VerifyOptions&) {
    CriterionResult r{3, "stabilizer uniformity", false, Json::object()};
    CertifyOptions opts;
    opts.mode = ArithmeticMode::Exact;
    opts.symmetrize = true;
    const auto cert = certify(family_bases({FamilyKind::Stabilizer, 0, 0, {}}), opts);
    bool uniform = cert.feasible() && cert.q_exact.size() == 8;
    Json q = Json::object();
    for (std::size_t i = 0; i < cert.q_exact.size(); ++i) {
        uniform = uniform && cert.q_exact[i] == Rational(1, 4);
        q[cert.space.label(i)] = num(cert.q_exact[i]);
    }
    r.details["verdict"] = to_string(cert.verdict);
    r.details["q"] = q;
    r.details["frame_verified"] = cert.frame_verified;
    r.passed = uniform && cert.witness_verified && cert.frame_verified;
    return r;
}

CriterionResult coplanar(const VerifyOptions& o) {
    CriterionResult r{4, "coplanar triples", false, Json::object()};
    const auto rep = verify_coplanar_triples(trials_or(o, 500), seed_for(o, 4));
    r.details["trials"] = rep.trials;
    r.details["infeasible"] = rep.infeasible;
    r.details["witnesses_verified"] = rep.witnesses_verified;
    r.details["exceptions"] = rep.exceptions;
    r.details["failures"] = failures_json(rep.failures);
    r.passed = rep.passed() && rep.infeasible == rep.trials && rep.witnesses_verified == rep.trials &&
               rep.exceptions == 0;
    return r;
}

CriterionResult cuboids(const VerifyOptions& o) {
    CriterionResult r{5, "cuboid classification", false, Json::object()};
    const auto rep = verify_cuboid_classification(trials_or(o, 1000), seed_for(o, 5), 20);
    r.details["trials"] = rep.trials;
    r.details["random_feasible"] = rep.random_feasible;
    r.details["feasible_noncuboid"] = rep.feasible_noncuboid;
    r.details["random_cuboids_feasible"] = rep.random_cuboids_feasible;
    r.details["perturbed_infeasible"] = rep.perturbed_infeasible;
    r.details["grid_points"] = rep.grid_points;
    r.details["grid_feasible"] = rep.grid_feasible;
    r.details["failures"] = failures_json(rep.failures);
    r.passed = rep.passed() && rep.feasible_noncuboid == 0 && rep.grid_feasible == rep.grid_points;
    return r;
}

CriterionResult five_bases(const VerifyOptions& o) {
    CriterionResult r{6, "five-basis impossibility", false, Json::object()};
    const auto rep = verify_max_bases(trials_or(o, 500), seed_for(o, 6));
    r.details["random_sets"] = rep.random_sets;
    r.details["random_infeasible"] = rep.random_infeasible;
    r.details["cuboid_plus_one"] = rep.cuboid_plus_one;
    r.details["cuboid_plus_one_infeasible"] = rep.cuboid_plus_one_infeasible;
    r.details["failures"] = failures_json(rep.failures);
    r.passed = rep.passed() && rep.random_infeasible == rep.random_sets &&
               rep.cuboid_plus_one_infeasible == rep.cuboid_plus_one;
    return r;
}

CriterionResult icosahedron(const VerifyOptions&) {
    CriterionResult r{7, "icosahedron", false, Json::object()};
    const auto cert = certify(family_bases({FamilyKind::Icosahedron, 0, 0, {}}), ArithmeticMode::Exact);
    r.details["verdict"] = to_string(cert.verdict);
    r.details["mode"] = to_string(cert.mode);
    r.details["witness_verified"] = cert.witness_verified;
    r.passed = !cert.feasible() && cert.mode == ArithmeticMode::Exact && cert.witness_verified;
    return r;
}

HermitianOp random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double radius = std::cbrt(u(rng));
    return bloch_to_density(BlochVector(Vec3(radius * random_direction(rng).vec())));
}

/// a 1 + b.sigma with 0 <= a +- |b| <= 1.
HermitianOp random_effect(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double a = u(rng);
    const double b = std::min(a, 1.0 - a) * u(rng);
    CMatrix m = a * CMatrix::Identity(2, 2) + sigma_dot(b * random_direction(rng).vec());
    return HermitianOp(m);
}

std::vector<FamilySpec> frame_points(FamilyKind kind) {
    std::vector<FamilySpec> out;
    if (kind == FamilyKind::Single || kind == FamilyKind::Stabilizer) {
        out.push_back({kind, 0, 0, {}});
        return out;
    }
    const double d3_max = std::asin(std::sqrt(8.0 / 9.0));
    for (int k = 0; k < 10; ++k) {
        const double t = k / 9.0;
        switch (kind) {
            case FamilyKind::Pair: out.push_back({kind, 0.15 + 1.25 * t, 0, {}}); break;
            case FamilyKind::D3: out.push_back({kind, 0.15 + (d3_max - 0.16) * t, 0, {}}); break;
            case FamilyKind::C2: {
                const double theta = 0.3 + 1.1 * t;
                out.push_back({kind, theta, std::acos(std::sin(theta) * (0.9 - 1.8 * t)), {}});
                break;
            }
            case FamilyKind::Cuboid: out.push_back({kind, 0.15 + 1.25 * t, 1.4 - 1.2 * t, {}}); break;
            default: break;
        }
    }
    return out;
}

CriterionResult frame_validity(const VerifyOptions& o) {
    CriterionResult r{8, "frame validity", true, Json::object()};
    const std::size_t samples = 100;
    Json families = Json::array();
    int family_index = 0;
    for (FamilyKind kind : {FamilyKind::Single, FamilyKind::Pair, FamilyKind::D3, FamilyKind::C2, FamilyKind::Cuboid,
                            FamilyKind::Stabilizer}) {
        const auto points = frame_points(kind);
        double worst_frame = 0.0, worst_born = 0.0;
        bool ok = true;
        std::string error;
        for (std::size_t k = 0; k < points.size(); ++k) {
            try {
                const QuasiRep rep = build_family_frame(points[k]);
                const auto check = check_dual_frame(rep);
                ok = ok && check.ok;
                worst_frame = std::max(worst_frame, check.max_deviation);
                std::mt19937_64 rng(trial_seed(seed_for(o, 8), 100 * family_index + k));
                for (std::size_t s = 0; s < samples; ++s) {
                    const HermitianOp rho = random_state(rng);
                    const HermitianOp effect = random_effect(rng);
                    worst_born = std::max(worst_born, born_residual(rep, rho, effect));
                }
            } catch (const Error& e) {
                ok = false;
                if (error.empty()) error = e.what();
            }
        }
        ok = ok && worst_born <= 1e-10;
        r.passed = r.passed && ok;
        Json f{{"family", to_string(kind)},
               {"parameter_points", points.size()},
               {"samples_per_point", samples},
               {"max_frame_deviation", num(worst_frame)},
               {"max_born_residual", num(worst_born)},
               {"passed", ok}};
        if (!error.empty()) f["error"] = error;
        families.push_back(f);
        ++family_index;
    }
    r.details["families"] = families;
    r.details["excluded"] = "icosahedron (no non-negative frame exists)";
    return r;
}

double nonsymmetric_q0(double theta) {
    const double s2 = std::sin(theta) * std::sin(theta);
    const double lo = std::max(0.0, 1 - 1.5 * s2);
    const double hi = std::min(2 - 2.25 * s2, 1 - 0.75 * s2);
    return lo + 0.3 * (hi - lo);
}

CriterionResult supervenience(const VerifyOptions&) {
    CriterionResult r{9, "supervenience", false, Json::object()};
    const SubtheoryModel stab = stabilizer_model();
    std::size_t clifford_ok = 0;
    const auto rotations = clifford_rotations();
    for (const auto& rot : rotations) {
        const auto search = find_permutation(rot.unitary, stab);
        if (search.found() && supervenes(search.first(), rot.unitary, stab)) ++clifford_ok;
    }
    r.details["clifford_rotations"] = rotations.size();
    r.details["clifford_supervening"] = clifford_ok;

    bool gamma_ok = true, pi_sym_ok = true, pi_asym_rejected = true;
    Json thetas = Json::array();
    for (double theta : {0.7, 1.0}) {
        const double q0 = nonsymmetric_q0(theta);
        const SubtheoryModel sym = make_model({FamilyKind::D3, theta, 0, {}});
        const SubtheoryModel asym = make_model({FamilyKind::D3, theta, 0, q0});
        const bool g_sym = supervenes(table_one_gamma(), named_gate("GAMMA"), sym);
        const bool g_asym = supervenes(table_one_gamma(), named_gate("GAMMA"), asym);
        const bool p_sym = supervenes(table_one_pi(), named_gate("PI"), sym);
        const bool p_asym = supervenes(table_one_pi(), named_gate("PI"), asym);
        const bool p_any_asym = find_permutation(named_gate("PI"), asym).found();
        gamma_ok = gamma_ok && g_sym && g_asym;
        pi_sym_ok = pi_sym_ok && p_sym;
        pi_asym_rejected = pi_asym_rejected && !p_asym && !p_any_asym;
        thetas.push_back(Json{{"theta", num(theta)},
                              {"q0", num(q0)},
                              {"gamma_symmetric", g_sym},
                              {"gamma_nonsymmetric", g_asym},
                              {"pi_symmetric", p_sym},
                              {"pi_nonsymmetric", p_asym},
                              {"pi_any_permutation_nonsymmetric", p_any_asym}});
    }
    r.details["d3"] = thetas;
    const bool not_ok = universal_not_check(stab);
    const bool not_unitary = not_gate_is_not_unitary(stab);
    r.details["universal_not"] = not_ok;
    r.details["not_outside_registered_gates"] = not_unitary;
    r.passed = clifford_ok == rotations.size() && gamma_ok && pi_sym_ok && pi_asym_rejected && not_ok && not_unitary;
    return r;
}

CriterionResult circuits(const VerifyOptions& o) {
    CriterionResult r{10, "circuit agreement", false, Json::object()};
    const SubtheoryModel model = stabilizer_model();
    const std::size_t trials = trials_or(o, 100);
    std::vector<std::string> gates, states, bases;
    for (const auto& g : model.gates()) gates.push_back(g.name);
    for (const auto& s : model.states()) states.push_back(s.label);
    for (const auto& b : model.bases()) bases.push_back(b.name);

    double worst = 0.0;
    std::size_t agreed = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        std::mt19937_64 rng(trial_seed(seed_for(o, 10), t));
        auto pick = [&rng](const std::vector<std::string>& v) {
            return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
        };
        const std::string initial = pick(states);
        const std::size_t length = std::uniform_int_distribution<std::size_t>(0, 6)(rng);
        std::vector<std::string> circuit;
        for (std::size_t k = 0; k < length; ++k) circuit.push_back(pick(gates));
        const std::string measure = pick(bases);
        const auto result = run_circuit(model, initial, circuit, measure);
        worst = std::max(worst, result.max_difference);
        if (result.agree && result.max_difference <= 1e-10) ++agreed;
    }
    r.details["trials"] = trials;
    r.details["agreed"] = agreed;
    r.details["max_difference"] = num(worst);
    r.passed = agreed == trials;
    return r;
}

CriterionResult qudit_suite(const VerifyOptions&) {
    CriterionResult r{11, "qudit suite", false, Json::object()};
    bool ok = true;
    auto record = [&](const std::string& key, bool value) {
        r.details[key] = value;
        ok = ok && value;
    };

    const auto xyz = BasisFamily::from_qubit(family_bases({FamilyKind::Stabilizer, 0, 0, {}}));
    record("xyz_disparate", is_disparate(xyz));
    const auto t3_xyz = check_theorem3(xyz);
    record("xyz_theorem3_consistent", t3_xyz.precondition_ok && t3_xyz.consistent);

    const double h = std::numbers::sqrt2 / 2;
    const auto coplanar = BasisFamily::from_qubit(
        {QubitBasis(BlochVector(1, 0, 0)), QubitBasis(BlochVector(0, 0, 1)), QubitBasis(BlochVector(h, 0, h))});
    const auto t3_cop = check_theorem3(coplanar);
    record("coplanar_not_disparate", !t3_cop.disparate);
    record("coplanar_certified_infeasible", t3_cop.nonnegative.has_value() && !*t3_cop.nonnegative);
    record("coplanar_theorem3_consistent", t3_cop.consistent);

    const auto mubs = mutually_unbiased_bases(3);
    record("d3_mub_triple_disparate", is_disparate(BasisFamily(3, {mubs[0], mubs[1], mubs[2]})));
    const auto t4_mub = theorem4_search(BasisFamily(3, mubs));
    record("d3_mub_quadruple_theorem4_not_applicable", !t4_mub.applicable);

    const auto cuboid = BasisFamily::from_qubit(family_bases({FamilyKind::Cuboid, 0.7, 0.4, {}}));
    const auto t4 = theorem4_search(cuboid);
    bool thirds = t4.coefficients.size() == 3;
    Json coeffs = Json::array();
    for (double c : t4.coefficients) {
        thirds = thirds && std::abs(c - 1.0 / 3.0) <= 1e-9;
        coeffs.push_back(num(c));
    }
    r.details["theorem4_epsilon"] = num(t4.epsilon);
    r.details["theorem4_expected"] = num(Rational(1, 3));
    r.details["theorem4_coefficients"] = coeffs;
    record("theorem4_epsilon_one_third", t4.applicable && t4.epsilon_matches);
    record("theorem4_coefficients_one_third", thirds);

    record("theorem5_n4_d2_equals_theorem4", std::abs(theorem5_bound(4, 2) - 1.0 / 3.0) <= 1e-15);
    record("theorem5_n4_d3_equals_theorem4", std::abs(theorem5_bound(4, 3) - 0.25) <= 1e-15);
    record("theorem5_n5_d2_half", std::abs(theorem5_bound(5, 2) - 0.5) <= 1e-15);
    record("theorem5_n6_d3_half", std::abs(theorem5_bound(6, 3) - 0.5) <= 1e-15);
    const auto head = cuboid.without(3);
    const auto t5 = check_theorem5_bound(cuboid, hull_decompose(head, cuboid.bases.back()[0]));
    r.details["theorem5_cuboid_bound"] = num(t5.bound);
    r.details["theorem5_cuboid_maximal_epsilon"] = num(t5.maximal_epsilon);
    record("theorem5_cuboid_within_bound", t5.applicable && t5.given_within_bound && t5.maximal_within_bound);

    const auto pb2 = pattern_bound(2);
    const auto pb3 = pattern_bound(3);
    r.details["pattern_bound_d2"] = pb2.bound;
    r.details["pattern_refined_d2"] = pb2.refined;
    r.details["pattern_bound_d3"] = pb3.bound;
    r.details["pattern_refined_d3"] = pb3.refined;
    record("pattern_bound_16_refined_14", pb2.bound == 16 && pb2.refined == 14);
    record("pattern_bound_d3_512", pb3.bound == 512);

    std::uint64_t realized = 0;
    Json observed = Json::object();
    for (const FamilySpec& spec : std::vector<FamilySpec>{{FamilyKind::Stabilizer, 0, 0, {}},
                                                          {FamilyKind::D3, 0.8, 0, {}},
                                                          {FamilyKind::C2, 0.9, 1.2, {}},
                                                          {FamilyKind::Cuboid, 0.7, 0.4, {}},
                                                          {FamilyKind::Cuboid, 0.9553, 0.7854, {}}}) {
        const QuasiRep rep = build_family_frame(spec);
        const auto count = pattern_bound(2, &rep);
        const std::uint64_t n = count.observed.value_or(0);
        realized = std::max(realized, n);
        observed[to_string(spec.kind) + (spec.kind == FamilyKind::Stabilizer ? "" : " " + std::to_string(spec.theta) +
                                                                                       "," + std::to_string(spec.phi))] = n;
    }
    r.details["observed"] = observed;
    r.details["realized_maximum"] = realized;
    record("realized_maximum_8", realized == 8);

    r.passed = ok;
    return r;
}

CriterionResult limiting_case(const VerifyOptions&) {
    CriterionResult r{12, "limiting case", false, Json::object()};
    const double theta = std::asin(std::sqrt(8.0 / 9.0));
    const auto q = d3_distribution(theta);
    const double q0 = q.at("+0");
    auto bases = family_bases({FamilyKind::D3, theta, 0, {}});
    bases.emplace_back(BlochVector(0, 0, 1));
    CertifyOptions opts;
    opts.mode = ArithmeticMode::Float;
    const auto cert = certify(bases, opts);
    r.details["theta"] = num(theta);
    r.details["q0"] = num(q0);
    r.details["with_z_verdict"] = to_string(cert.verdict);
    r.details["with_z_frame_verified"] = cert.frame_verified;
    r.details["with_z_is_right_cuboid"] = is_right_cuboid(bases);
    r.passed = std::abs(q0) <= 1e-12 && cert.feasible() && cert.frame_verified && is_right_cuboid(bases);
    return r;
}

}  // namespace

std::string to_string(Suite suite) {
    switch (suite) {
        case Suite::All: return "all";
        case Suite::Qubit: return "qubit";
        case Suite::Qudit: return "qudit";
    }
    return "all";
}

Suite parse_suite(const std::string& text) {
    if (text == "all") return Suite::All;
    if (text == "qubit") return Suite::Qubit;
    if (text == "qudit") return Suite::Qudit;
    throw InvalidArgumentError("unknown suite '" + text + "' (expected all, qubit or qudit)");
}

std::vector<int> suite_criteria(Suite suite) {
    switch (suite) {
        case Suite::Qubit: return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12};
        case Suite::Qudit: return {11};
        case Suite::All: break;
    }
    return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
}

CriterionResult run_criterion(int id, const VerifyOptions& options) {
    using Fn = CriterionResult (*)(const VerifyOptions&);
    static const Fn table[] = {d3_threshold, c2_threshold, stabilizer_uniformity, coplanar, cuboids, five_bases,
                               icosahedron,  frame_validity, supervenience,       circuits, qudit_suite, limiting_case};
    if (id < 1 || id > 12) throw InvalidArgumentError("criterion id must be 1..12");
    try {
        return table[id - 1](options);
    } catch (const Error& e) {
        return CriterionResult{id, "criterion " + std::to_string(id), false, Json{{"error", e.what()}}};
    }
}

VerifyReport run_verification(const VerifyOptions& options) {
    VerifyReport report;
    report.suite = options.suite;
    report.seed = options.seed;
    report.trials = options.trials;
    for (int id : suite_criteria(options.suite)) report.criteria.push_back(run_criterion(id, options));
    return report;
}

bool VerifyReport::all_passed() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

Json VerifyReport::to_json() const {
    Json out{{"suite", qpr::to_string(suite)}, {"seed", seed}};
    out["trials"] = trials ? Json(*trials) : Json("default");
    Json list = Json::array();
    for (const auto& c : criteria)
        list.push_back(Json{{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"details", c.details}});
    out["criteria"] = list;
    out["all_passed"] = all_passed();
    return out;
}

}  // namespace qpr
