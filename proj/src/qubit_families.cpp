#include "qpr/qubit_families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qpr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundTol = 1e-12;

// (+, a) lies in supp(rho(j, kTableOne[j][a])).
constexpr int kTableOne[3][4] = {{1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};

// Sign vectors (over x, y, z) of the "+" element of each cuboid basis.
constexpr int kCuboidSigns[4][3] = {{1, 1, 1}, {-1, 1, 1}, {1, -1, 1}, {1, 1, -1}};

std::string sign_char(int s) { return s > 0 ? "+" : "-"; }

void require_open(double value, double lo, double hi, const char* name, const std::string& family) {
    if (!(value > lo && value < hi))
        throw ParameterRangeError(family + ": " + name + " = " + std::to_string(value) +
                                  " outside (" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
}

Vec3 cuboid_corner(double theta, double phi) {
    return {std::cos(phi) * std::sin(theta), std::sin(phi) * std::sin(theta), std::cos(theta)};
}

OnticDistribution on_table_one(const std::array<double, 8>& values) {
    return OnticDistribution{table_one_pattern().space, std::vector<double>(values.begin(), values.end())};
}

// Values within kBoundTol below zero are rounding noise at a boundary.
void clamp_noise(OnticDistribution& q) {
    for (auto& v : q.values)
        if (v < 0 && v > -kBoundTol) v = 0.0;
}

}  // namespace

std::string to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::Single: return "single";
        case FamilyKind::Pair: return "pair";
        case FamilyKind::D3: return "d3";
        case FamilyKind::C2: return "c2";
        case FamilyKind::Cuboid: return "cuboid";
        case FamilyKind::Stabilizer: return "stabilizer";
        case FamilyKind::Icosahedron: return "icosahedron";
    }
    return "unknown";
}

FamilyKind parse_family_kind(std::string_view text) {
    for (auto kind : {FamilyKind::Single, FamilyKind::Pair, FamilyKind::D3, FamilyKind::C2,
                      FamilyKind::Cuboid, FamilyKind::Stabilizer, FamilyKind::Icosahedron})
        if (to_string(kind) == text) return kind;
    throw InvalidArgumentError("unknown family '" + std::string(text) + "'");
}

void validate(const FamilySpec& spec) {
    const std::string name = to_string(spec.kind);
    switch (spec.kind) {
        case FamilyKind::Pair: require_open(spec.theta, 0.0, kPi / 2, "theta", name); break;
        case FamilyKind::D3: require_open(spec.theta, 0.0, kPi, "theta", name); break;
        case FamilyKind::C2:
            require_open(spec.theta, 0.0, kPi / 2, "theta", name);
            require_open(spec.phi, 0.0, kPi, "phi", name);
            break;
        case FamilyKind::Cuboid:
            require_open(spec.theta, 0.0, kPi / 2, "theta", name);
            require_open(spec.phi, 0.0, kPi / 2, "phi", name);
            break;
        default: break;
    }
}

SupportSet SupportPattern::support_of(std::size_t j, int gamma) const {
    SupportSet out;
    for (std::size_t p = 0; p < signs.size(); ++p)
        if (signs[p][j] == gamma) out.push_back(p);
    return out;
}

SupportPattern table_one_pattern() {
    SupportPattern pattern;
    std::vector<std::string> labels;
    for (int eps : {1, -1}) {
        for (int a = 0; a < 4; ++a) {
            labels.push_back(sign_char(eps) + std::to_string(a));
            pattern.signs.push_back({eps * kTableOne[0][a], eps * kTableOne[1][a], eps * kTableOne[2][a]});
        }
    }
    pattern.space = OnticSpace(std::move(labels));
    return pattern;
}

SupportPattern cuboid_pattern() {
    SupportPattern pattern;
    std::vector<std::string> labels;
    for (int eps : {1, -1}) {
        for (int a = 0; a < 3; ++a) {
            labels.push_back(sign_char(eps) + std::to_string(a + 1));
            std::vector<int> row;
            for (const auto& basis : kCuboidSigns) row.push_back(eps * basis[a]);
            pattern.signs.push_back(std::move(row));
        }
    }
    pattern.space = OnticSpace(std::move(labels));
    return pattern;
}

std::vector<QubitBasis> family_bases(const FamilySpec& spec) {
    validate(spec);
    const double st = std::sin(spec.theta), ct = std::cos(spec.theta);
    std::vector<QubitBasis> out;
    switch (spec.kind) {
        case FamilyKind::Single: out.emplace_back(BlochVector(0, 0, 1)); break;
        case FamilyKind::Pair:
            out.emplace_back(BlochVector(st, 0, ct));
            out.emplace_back(BlochVector(-st, 0, ct));
            break;
        case FamilyKind::D3: {
            const double h = std::sqrt(3.0) / 2;
            out.emplace_back(BlochVector(st, 0, ct));
            out.emplace_back(BlochVector(-0.5 * st, h * st, ct));
            out.emplace_back(BlochVector(-0.5 * st, -h * st, ct));
            break;
        }
        case FamilyKind::C2:
            out.emplace_back(BlochVector(st, 0, ct));
            out.emplace_back(BlochVector(-st, 0, ct));
            out.emplace_back(BlochVector(std::cos(spec.phi), std::sin(spec.phi), 0));
            break;
        case FamilyKind::Cuboid: {
            const Vec3 c = cuboid_corner(spec.theta, spec.phi);
            for (const auto& s : kCuboidSigns) out.emplace_back(BlochVector(s[0] * c.x(), s[1] * c.y(), s[2] * c.z()));
            break;
        }
        case FamilyKind::Stabilizer:
            out.emplace_back(BlochVector(1, 0, 0));
            out.emplace_back(BlochVector(0, 1, 0));
            out.emplace_back(BlochVector(0, 0, 1));
            break;
        case FamilyKind::Icosahedron: {
            const double g = std::numbers::phi;
            const double n = std::sqrt(1 + g * g);
            for (int alpha : {1, -1}) out.emplace_back(BlochVector(1 / n, alpha * g / n, 0));
            for (int alpha : {1, -1}) out.emplace_back(BlochVector(0, 1 / n, alpha * g / n));
            for (int alpha : {1, -1}) out.emplace_back(BlochVector(alpha * g / n, 0, 1 / n));
            break;
        }
    }
    return out;
}

std::vector<QubitBasis> frame_bases(const FamilySpec& spec) {
    switch (spec.kind) {
        case FamilyKind::Single: return family_bases({FamilyKind::Stabilizer, 0, 0, {}});
        case FamilyKind::Pair: return family_bases({FamilyKind::C2, spec.theta, kPi / 2, {}});
        case FamilyKind::Icosahedron:
            throw InfeasibleDistributionError("icosahedron: the six bases admit no non-negative representation");
        default: return family_bases(spec);
    }
}

SupportPattern family_pattern(const FamilySpec& spec) {
    if (spec.kind == FamilyKind::Cuboid) return cuboid_pattern();
    if (spec.kind == FamilyKind::Icosahedron)
        throw InfeasibleDistributionError("icosahedron: no support pattern exists");
    return table_one_pattern();
}

OnticDistribution d3_distribution(double theta, bool symmetric, std::optional<double> q0) {
    validate({FamilyKind::D3, theta, 0, {}});
    const double s2 = std::sin(theta) * std::sin(theta);
    if (s2 > 8.0 / 9.0 + kBoundTol)
        throw InfeasibleDistributionError("d3: non-negative weights exist only when sin^2(theta) <= 8/9 (got " +
                                          std::to_string(s2) + ")");
    OnticDistribution q;
    if (symmetric && !q0) {
        const double a0 = 1 - 9.0 / 8.0 * s2, a1 = 3.0 / 8.0 * s2;
        q = on_table_one({a0, a1, a1, a1, a0, a1, a1, a1});
    } else {
        const double v = q0.value_or(1 - 9.0 / 8.0 * s2);
        const double upper = 2 - 9.0 / 4.0 * s2;
        if (v < -kBoundTol || v > upper + kBoundTol)
            throw InfeasibleDistributionError("d3: q0 = " + std::to_string(v) + " outside [0, 2 - 9/4 sin^2(theta)] = [0, " +
                                              std::to_string(upper) + "]");
        const double plus_a = 1.5 * s2 - 1 + v;
        const double minus_0 = 2 - v - 2.25 * s2;
        const double minus_a = 1 - v - 0.75 * s2;
        q = on_table_one({v, plus_a, plus_a, plus_a, minus_0, minus_a, minus_a, minus_a});
    }
    clamp_noise(q);
    const double residual = constraint_residual(family_bases({FamilyKind::D3, theta, 0, {}}), table_one_pattern(), q);
    if (residual > 1e-10) throw Error("d3: internal constraint residual " + std::to_string(residual));
    return q;
}

OnticDistribution c2_distribution(double theta, double phi, std::optional<double> q0) {
    validate({FamilyKind::C2, theta, phi, {}});
    const double st = std::sin(theta), ct = std::cos(theta), cp = std::cos(phi);
    if (std::abs(cp) > st + kBoundTol)
        throw InfeasibleDistributionError("c2: non-negative weights require |cos(phi)| <= sin(theta) (got |cos(phi)| = " +
                                          std::to_string(std::abs(cp)) + ", sin(theta) = " + std::to_string(st) + ")");
    const double v = q0.value_or(ct * ct / 2);
    const double c2t = std::cos(2 * theta);
    const double p0 = v, p1 = v - 0.5 * c2t - 0.5 * cp * st, p2 = v - 0.5 * c2t + 0.5 * cp * st;
    const double m0 = 0.5 - v + 0.5 * c2t, m1 = 0.5 - v - 0.5 * cp * st, m2 = 0.5 - v + 0.5 * cp * st;
    OnticDistribution q = on_table_one({p0, p1, p2, p0, m0, m1, m2, m0});
    clamp_noise(q);
    const double residual = constraint_residual(family_bases({FamilyKind::C2, theta, phi, {}}), table_one_pattern(), q);
    if (residual > 1e-10) throw Error("c2: internal constraint residual " + std::to_string(residual));
    return q;
}

OnticDistribution cuboid_distribution(double theta, double phi) {
    validate({FamilyKind::Cuboid, theta, phi, {}});
    const Vec3 c = cuboid_corner(theta, phi);
    const std::vector<double> half{c.x() * c.x(), c.y() * c.y(), c.z() * c.z()};
    OnticDistribution q{cuboid_pattern().space, {}};
    for (int eps = 0; eps < 2; ++eps) q.values.insert(q.values.end(), half.begin(), half.end());
    return q;
}

std::array<double, 3> cuboid_unnormalized_weights(double theta, double phi) {
    const double s2 = std::sin(theta) * std::sin(theta), c2 = std::cos(theta) * std::cos(theta);
    const double c2p = std::cos(2 * phi);
    return {1 + s2 * c2p - c2, 1 - s2 * c2p - c2, 1 + std::cos(2 * theta)};
}

OnticDistribution stabilizer_distribution() { return on_table_one({.25, .25, .25, .25, .25, .25, .25, .25}); }

OnticDistribution family_distribution(const FamilySpec& spec) {
    switch (spec.kind) {
        case FamilyKind::Single:
        case FamilyKind::Stabilizer: return stabilizer_distribution();
        case FamilyKind::Pair: return c2_distribution(spec.theta, kPi / 2);
        case FamilyKind::D3: return d3_distribution(spec.theta, !spec.q0.has_value(), spec.q0);
        case FamilyKind::C2: return c2_distribution(spec.theta, spec.phi, spec.q0);
        case FamilyKind::Cuboid: return cuboid_distribution(spec.theta, spec.phi);
        case FamilyKind::Icosahedron:
            throw InfeasibleDistributionError("icosahedron: the six bases admit no non-negative representation");
    }
    throw InvalidArgumentError("unknown family");
}

DVectorSet solve_dvectors(const std::vector<QubitBasis>& bases, const SupportPattern& pattern, double tol) {
    if (pattern.num_bases() != bases.size())
        throw InvalidArgumentError("support pattern covers " + std::to_string(pattern.num_bases()) +
                                   " bases, got " + std::to_string(bases.size()));
    Eigen::MatrixXd r(static_cast<Eigen::Index>(bases.size()), 3);
    for (std::size_t j = 0; j < bases.size(); ++j) r.row(static_cast<Eigen::Index>(j)) = bases[j].direction().vec().transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(tol);
    if (svd.rank() < 3) throw NoSolutionError("Bloch vectors do not span R^3 (coplanar bases); d-vector system is singular");
    DVectorSet out{pattern.space, {}};
    for (std::size_t p = 0; p < pattern.signs.size(); ++p) {
        Eigen::VectorXd s(static_cast<Eigen::Index>(bases.size()));
        for (std::size_t j = 0; j < bases.size(); ++j) s[static_cast<Eigen::Index>(j)] = pattern.signs[p][j];
        const Vec3 d = svd.solve(s);
        const double residual = (r * d - s).cwiseAbs().maxCoeff();
        if (residual > tol)
            throw NoSolutionError("no d-vector for point " + pattern.space.label(p) + " (residual " +
                                  std::to_string(residual) + ")");
        out.vectors.push_back(d);
    }
    return out;
}

double constraint_residual(const std::vector<QubitBasis>& bases, const SupportPattern& pattern,
                           const OnticDistribution& q) {
    double worst = 0.0;
    const std::size_t n = bases.size();
    for (std::size_t j = 0; j < n; ++j) {
        for (int gamma : {1, -1}) {
            double sum = 0.0;
            for (auto p : pattern.support_of(j, gamma)) sum += q.values[p];
            worst = std::max(worst, std::abs(sum - 1.0));
        }
    }
    for (std::size_t j1 = 0; j1 < n; ++j1) {
        for (std::size_t j2 = j1 + 1; j2 < n; ++j2) {
            const double dot = bases[j1].direction().dot(bases[j2].direction());
            for (int g1 : {1, -1}) {
                for (int g2 : {1, -1}) {
                    double sum = 0.0;
                    for (std::size_t p = 0; p < pattern.signs.size(); ++p)
                        if (pattern.signs[p][j1] == g1 && pattern.signs[p][j2] == g2) sum += q.values[p];
                    worst = std::max(worst, std::abs(sum - 0.5 * (1 + g1 * g2 * dot)));
                }
            }
        }
    }
    return worst;
}

QuasiRep build_frame(const std::vector<QubitBasis>& bases, const OnticDistribution& q,
                     const SupportPattern& pattern) {
    if (!(q.space == pattern.space)) throw InvalidArgumentError("distribution and pattern live on different spaces");
    for (std::size_t p = 0; p < q.values.size(); ++p)
        if (q.values[p] < -kBoundTol)
            throw FrameConstructionError("negative weight " + std::to_string(q.values[p]) + " at " + q.space.label(p),
                                         -q.values[p]);
    const DVectorSet dvec = solve_dvectors(bases, pattern);
    std::vector<HermitianOp> f, g;
    const CMatrix id = CMatrix::Identity(2, 2);
    for (std::size_t p = 0; p < q.values.size(); ++p) {
        const CMatrix gm = 0.5 * (id + sigma_dot(dvec.vectors[p]));
        g.emplace_back(gm);
        f.emplace_back(q.values[p] * gm);
    }
    QuasiRep rep(q.space, std::move(f), std::move(g));
    const auto check = check_dual_frame(rep);
    if (!check.ok) throw FrameConstructionError("frame is not dual (max deviation " + std::to_string(check.max_deviation) + ")", check.max_deviation);
    for (std::size_t j = 0; j < bases.size(); ++j)
        if (!is_nonnegative_basis(rep, bases[j]))
            throw FrameConstructionError("basis " + std::to_string(j + 1) + " is not non-negative in the built frame", 0.0);
    const auto report = lemma_structure_report(rep, bases);
    if (!report.all_passed())
        throw FrameConstructionError("structure check failed: " + report.failures.front(), 0.0);
    return rep;
}

QuasiRep build_family_frame(const FamilySpec& spec) {
    return build_frame(frame_bases(spec), family_distribution(spec), family_pattern(spec));
}

QuasiRep reduced_wigner(const QuasiRep& rep) {
    const SupportPattern pattern = table_one_pattern();
    if (!(rep.space() == pattern.space) || rep.dim() != 2)
        throw InvalidArgumentError("reduced_wigner expects an 8-point stabilizer representation");
    const auto q = q_function(rep);
    for (double v : q.values)
        if (std::abs(v - 0.25) > kTolerance) throw InvalidArgumentError("reduced_wigner: representation is not the stabilizer one (q is not uniform)");
    for (const auto& b : family_bases({FamilyKind::Stabilizer, 0, 0, {}}))
        if (!is_nonnegative_basis(rep, b)) throw InvalidArgumentError("reduced_wigner: stabilizer bases are not non-negative");
    // F'(a) = 1/2 sum_j rho(j, gamma_ja) - 1/2, with gamma_ja read off the support pattern.
    const auto bases = family_bases({FamilyKind::Stabilizer, 0, 0, {}});
    std::vector<std::string> labels;
    std::vector<HermitianOp> f, g;
    for (std::size_t p = 0; p < pattern.signs.size(); ++p) {
        if (pattern.space.label(p)[0] != '+') continue;
        HermitianOp sum = HermitianOp::zero(2);
        for (std::size_t j = 0; j < bases.size(); ++j) sum += bases[j].element(pattern.signs[p][j]);
        const HermitianOp point_op = 0.5 * sum - 0.5 * HermitianOp::identity(2);
        labels.push_back(pattern.space.label(p));
        f.push_back(point_op);
        g.push_back(2.0 * point_op);
    }
    return QuasiRep(OnticSpace(std::move(labels)), std::move(f), std::move(g));
}

}  // namespace qpr
