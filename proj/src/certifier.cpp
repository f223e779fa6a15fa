#include "qpr/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>

#include "parallel.hpp"

namespace qpr {

namespace {

constexpr double kDuplicateTol = 1e-12;
constexpr double kFloatWitnessTol = 1e-9;
// Float weights below this are treated as zero when rebuilding the frame.
constexpr double kFrameWeightCutoff = 1e-9;
constexpr std::size_t kMaxSymmetrizeBases = 6;

std::string sign_char(int s) { return s > 0 ? "+" : "-"; }

bool spans_r3(const std::vector<QubitBasis>& bases) {
    Eigen::MatrixXd r(static_cast<Eigen::Index>(bases.size()), 3);
    for (std::size_t j = 0; j < bases.size(); ++j) r.row(static_cast<Eigen::Index>(j)) = bases[j].direction().vec().transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
    svd.setThreshold(kTolerance);
    return svd.rank() == 3;
}

Rational exact_dot(const ExactBloch& a, const ExactBloch& b) {
    return a.r[0] * b.r[0] + a.r[1] * b.r[1] + a.r[2] * b.r[2];
}

std::vector<std::size_t> point_map(const PatternSpace& space, const SignedPermutation& g) {
    std::vector<std::size_t> out(space.size());
    for (std::size_t p = 0; p < space.size(); ++p) {
        std::vector<int> t(space.num_bases());
        for (std::size_t j = 0; j < t.size(); ++j) t[j] = g.eps[j] * space.sign(p, g.sigma[j]);
        out[p] = space.index_of(t);
    }
    return out;
}

template <class Scalar>
std::vector<Scalar> average_over(const PatternSpace& space, const std::vector<SignedPermutation>& group,
                                 const std::vector<Scalar>& q) {
    std::vector<Scalar> sum(q.size(), Scalar(0));
    for (const auto& g : group) {
        const auto map = point_map(space, g);
        for (std::size_t p = 0; p < q.size(); ++p) sum[p] += q[map[p]];
    }
    for (auto& v : sum) v /= Scalar(static_cast<long>(group.size()));
    return sum;
}

template <class Gram>
std::vector<SignedPermutation> symmetries_of(std::size_t n, Gram&& preserved) {
    std::vector<SignedPermutation> out;
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            std::vector<int> eps(n);
            for (std::size_t j = 0; j < n; ++j) eps[j] = (mask >> j) & 1U ? -1 : 1;
            bool ok = true;
            for (std::size_t j = 0; j < n && ok; ++j)
                for (std::size_t k = j + 1; k < n && ok; ++k) ok = preserved(j, k, sigma, eps);
            if (ok) out.push_back({sigma, eps});
        }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

std::vector<SignedPermutation> exact_symmetries(const std::vector<ExactBloch>& r) {
    return symmetries_of(r.size(), [&](std::size_t j, std::size_t k, const auto& sigma, const auto& eps) {
        return Rational(eps[j] * eps[k]) * exact_dot(r[sigma[j]], r[sigma[k]]) == exact_dot(r[j], r[k]);
    });
}

}  // namespace

PatternSpace::PatternSpace(std::size_t num_bases) : n_(num_bases) {
    if (num_bases == 0 || num_bases > 20) throw InvalidArgumentError("pattern space needs 1..20 bases");
}

std::vector<int> PatternSpace::signs(std::size_t point) const {
    std::vector<int> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = sign(point, j);
    return out;
}

std::string PatternSpace::label(std::size_t point) const {
    std::string out;
    for (std::size_t j = 0; j < n_; ++j) out += sign_char(sign(point, j));
    return out;
}

std::size_t PatternSpace::index_of(const std::vector<int>& s) const {
    if (s.size() != n_) throw InvalidArgumentError("sign vector length mismatch");
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n_; ++j) idx = (idx << 1) | (s[j] < 0 ? 1U : 0U);
    return idx;
}

OnticSpace PatternSpace::ontic_space() const {
    std::vector<std::string> labels;
    for (std::size_t p = 0; p < size(); ++p) labels.push_back(label(p));
    return OnticSpace(std::move(labels));
}

std::vector<std::size_t> PatternSpace::compatible(std::size_t j, int gamma) const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < size(); ++p)
        if (sign(p, j) == gamma) out.push_back(p);
    return out;
}

lp::DenseMatrix<Rational> FeasibilityProblem::exact_matrix() const {
    lp::DenseMatrix<Rational> out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = Rational(static_cast<int>(a.data[i]));
    return out;
}

FeasibilityProblem build_problem(const std::vector<QubitBasis>& bases) {
    if (bases.empty()) throw InvalidArgumentError("at least one basis is required");
    const std::size_t n = bases.size();
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k)
            if (std::abs(bases[j].direction().dot(bases[k].direction())) >= 1 - kDuplicateTol)
                throw DuplicateBasisError("bases " + std::to_string(j + 1) + " and " + std::to_string(k + 1) +
                                          " coincide");
    FeasibilityProblem prob;
    prob.space = PatternSpace(n);
    prob.bases = bases;
    for (const auto& b : bases) prob.exact_bloch.push_back(rationalize(b.direction()));
    const std::size_t rows = 2 * n + 2 * n * (n - 1);
    prob.a = lp::DenseMatrix<double>(rows, prob.space.size());
    std::size_t row = 0;
    for (std::size_t j = 0; j < n; ++j) {
        for (int gamma : {1, -1}) {
            for (auto p : prob.space.compatible(j, gamma)) prob.a(row, p) = 1.0;
            prob.b.push_back(1.0);
            prob.b_exact.emplace_back(1);
            prob.row_labels.push_back("norm " + std::to_string(j + 1) + sign_char(gamma));
            ++row;
        }
    }
    for (std::size_t j1 = 0; j1 < n; ++j1) {
        for (std::size_t j2 = j1 + 1; j2 < n; ++j2) {
            const double dot = bases[j1].direction().dot(bases[j2].direction());
            const Rational dot_exact = exact_dot(prob.exact_bloch[j1], prob.exact_bloch[j2]);
            for (int g1 : {1, -1}) {
                for (int g2 : {1, -1}) {
                    for (std::size_t p = 0; p < prob.space.size(); ++p)
                        if (prob.space.sign(p, j1) == g1 && prob.space.sign(p, j2) == g2) prob.a(row, p) = 1.0;
                    prob.b.push_back(0.5 * (1 + g1 * g2 * dot));
                    prob.b_exact.push_back(Rational(1, 2) * (1 + Rational(g1 * g2) * dot_exact));
                    prob.row_labels.push_back("overlap " + std::to_string(j1 + 1) + sign_char(g1) + " " +
                                              std::to_string(j2 + 1) + sign_char(g2));
                    ++row;
                }
            }
        }
    }
    return prob;
}

std::string to_string(Verdict verdict) { return verdict == Verdict::Feasible ? "feasible" : "infeasible"; }

std::vector<SignedPermutation> gram_symmetries(const std::vector<QubitBasis>& bases, double tol) {
    return symmetries_of(bases.size(), [&](std::size_t j, std::size_t k, const auto& sigma, const auto& eps) {
        const double g = eps[j] * eps[k] * bases[sigma[j]].direction().dot(bases[sigma[k]].direction());
        return std::abs(g - bases[j].direction().dot(bases[k].direction())) <= tol;
    });
}

QuasiRep frame_from_certificate(const FeasibilityCertificate& cert, const std::vector<QubitBasis>& bases) {
    if (!cert.feasible()) throw InvalidArgumentError("certificate is infeasible; no frame exists");
    SupportPattern pattern;
    std::vector<std::string> labels;
    std::vector<double> weights;
    for (std::size_t p = 0; p < cert.space.size(); ++p) {
        // Exact weights below the cutoff come from rationalizing irrational inputs.
        if (cert.q[p] <= kFrameWeightCutoff) continue;
        labels.push_back(cert.space.label(p));
        pattern.signs.push_back(cert.space.signs(p));
        weights.push_back(cert.q[p]);
    }
    pattern.space = OnticSpace(labels);
    return build_frame(bases, OnticDistribution{pattern.space, weights}, pattern);
}

FeasibilityCertificate certify(const std::vector<QubitBasis>& bases, ArithmeticMode mode) {
    CertifyOptions options;
    options.mode = mode;
    return certify(bases, options);
}

FeasibilityCertificate certify(const std::vector<QubitBasis>& bases, const CertifyOptions& options) {
    const FeasibilityProblem prob = build_problem(bases);
    FeasibilityCertificate cert;
    cert.mode = options.mode;
    cert.space = prob.space;

    if (options.mode == ArithmeticMode::Exact) {
        const auto a = prob.exact_matrix();
        const auto result = lp::find_feasible(a, prob.b_exact);
        cert.pivots = result.pivots;
        if (result.status == lp::Status::Infeasible) {
            cert.verdict = Verdict::Infeasible;
            cert.farkas_exact = result.farkas;
            for (const auto& y : result.farkas) cert.farkas.push_back(to_double(y));
            cert.witness_verified = lp::verify_farkas(a, prob.b_exact, result.farkas);
            if (!cert.witness_verified) throw Error("exact Farkas witness failed verification");
            return cert;
        }
        cert.verdict = Verdict::Feasible;
        cert.q_exact = result.x;
        if (options.symmetrize && bases.size() <= kMaxSymmetrizeBases) {
            auto sym = average_over(prob.space, exact_symmetries(prob.exact_bloch), cert.q_exact);
            if (lp::max_residual(a, prob.b_exact, sym) == 0) {
                cert.q_exact = std::move(sym);
                cert.symmetrized = true;
            }
        }
        cert.witness_verified = lp::max_residual(a, prob.b_exact, cert.q_exact) == 0;
        if (!cert.witness_verified) throw Error("exact feasible witness failed verification");
        for (const auto& v : cert.q_exact) cert.q.push_back(to_double(v));
        cert.residual = lp::max_residual(prob.a, prob.b, cert.q);
    } else {
        lp::Result<double> result;
        try {
            result = lp::find_feasible(prob.a, prob.b);
        } catch (const Error& e) {
            throw NumericalError(std::string(e.what()) + "; retry with --mode exact");
        }
        cert.pivots = result.pivots;
        if (result.status == lp::Status::Infeasible) {
            cert.verdict = Verdict::Infeasible;
            cert.farkas = result.farkas;
            cert.witness_verified = lp::verify_farkas(prob.a, prob.b, result.farkas, kFloatWitnessTol);
            if (!cert.witness_verified)
                throw NumericalError("float Farkas witness does not verify (degenerate input); retry with --mode exact");
            return cert;
        }
        cert.verdict = Verdict::Feasible;
        cert.q = result.x;
        if (options.symmetrize && bases.size() <= kMaxSymmetrizeBases) {
            auto sym = average_over(prob.space, gram_symmetries(bases), cert.q);
            if (lp::max_residual(prob.a, prob.b, sym) <= kFloatWitnessTol) {
                cert.q = std::move(sym);
                cert.symmetrized = true;
            }
        }
        cert.residual = lp::max_residual(prob.a, prob.b, cert.q);
        cert.witness_verified = cert.residual <= kFloatWitnessTol;
        if (!cert.witness_verified)
            throw NumericalError("float witness residual " + std::to_string(cert.residual) +
                                 " exceeds 1e-9; retry with --mode exact");
    }

    if (!options.verify_frame) {
        cert.frame_note = "frame verification disabled";
    } else if (!spans_r3(bases)) {
        cert.frame_note = "Bloch vectors do not span R^3; verdict rests on the one- and two-basis constructions";
    } else {
        try {
            const QuasiRep rep = frame_from_certificate(cert, bases);
            cert.frame_deviation = check_dual_frame(rep).max_deviation;
            cert.frame_verified = true;
        } catch (const Error& e) {
            throw NumericalError(std::string("frame rebuilt from the witness failed validation: ") + e.what() +
                                 (options.mode == ArithmeticMode::Float ? "; retry with --mode exact" : ""));
        }
    }
    return cert;
}

namespace {

bool verdict_at(const FamilySpec& tmpl, const std::string& parameter, double value, ArithmeticMode mode) {
    FamilySpec spec = tmpl;
    if (parameter == "theta")
        spec.theta = value;
    else if (parameter == "phi")
        spec.phi = value;
    else
        throw InvalidArgumentError("scan parameter must be 'theta' or 'phi', got '" + parameter + "'");
    CertifyOptions options;
    options.mode = mode;
    options.verify_frame = false;
    return certify(family_bases(spec), options).feasible();
}

}  // namespace

double threshold_scan(const FamilySpec& family, const std::string& parameter, double lo, double hi, double tol,
                      ArithmeticMode mode) {
    if (!(tol > 0)) throw InvalidArgumentError("scan tolerance must be positive");
    if (!(lo < hi)) throw InvalidArgumentError("scan requires lo < hi");
    const bool at_lo = verdict_at(family, parameter, lo, mode);
    const bool at_hi = verdict_at(family, parameter, hi, mode);
    if (at_lo == at_hi)
        throw NoThresholdError("no threshold: both ends are " + std::string(at_lo ? "feasible" : "infeasible"));
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (verdict_at(family, parameter, mid, mode) == at_lo ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

bool is_right_cuboid(const std::vector<QubitBasis>& bases, double tol) {
    if (bases.size() != 4) return false;
    for (std::size_t i = 0; i < 4; ++i) {
        std::vector<Vec3> others;
        for (std::size_t k = 0; k < 4; ++k)
            if (k != i) others.push_back(bases[k].direction().vec());
        const Vec3 top = bases[i].direction().vec();
        for (int mask = 0; mask < 8; ++mask) {
            std::array<Vec3, 3> v;
            for (int k = 0; k < 3; ++k) v[k] = ((mask >> k) & 1) ? Vec3(-others[k]) : others[k];
            // top = a + b + c and v_k = top - 2 e_k for orthogonal edge half-vectors e_k.
            if ((top - (v[0] + v[1] + v[2])).norm() > tol) continue;
            std::array<Vec3, 3> e;
            for (int k = 0; k < 3; ++k) e[k] = 0.5 * (top - v[k]);
            if (std::abs(e[0].dot(e[1])) <= tol && std::abs(e[0].dot(e[2])) <= tol && std::abs(e[1].dot(e[2])) <= tol)
                return true;
        }
    }
    return false;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

BlochVector random_direction(std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    for (;;) {
        Vec3 v(normal(rng), normal(rng), normal(rng));
        const double n = v.norm();
        if (n > 1e-6) return BlochVector(Vec3(v / n));
    }
}

CMatrix random_rotation(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    const BlochVector axis = random_direction(rng);
    return rotation_unitary(axis, angle(rng));
}

std::vector<QubitBasis> rotate_bases(const std::vector<QubitBasis>& bases, const CMatrix& unitary) {
    std::vector<QubitBasis> out;
    for (const auto& b : bases) out.emplace_back(density_to_bloch(b.plus().conjugated(unitary)));
    return out;
}

namespace {

std::vector<QubitBasis> random_bases(std::mt19937_64& rng, std::size_t n, const std::vector<QubitBasis>& start = {}) {
    std::vector<QubitBasis> out = start;
    while (out.size() < n) {
        const BlochVector r = random_direction(rng);
        bool distinct = true;
        for (const auto& b : out) distinct = distinct && std::abs(b.direction().dot(r)) < 1 - 1e-3;
        if (distinct) out.emplace_back(r);
    }
    return out;
}

std::vector<QubitBasis> random_cuboid(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.05, std::numbers::pi / 2 - 0.05);
    const double theta = angle(rng), phi = angle(rng);
    return rotate_bases(family_bases({FamilyKind::Cuboid, theta, phi, {}}), random_rotation(rng));
}

CertifyOptions float_options() {
    CertifyOptions options;
    options.mode = ArithmeticMode::Float;
    return options;
}

struct Collector {
    std::mutex mutex;
    std::vector<std::pair<std::size_t, std::string>> failures;

    void add(std::size_t order, std::string message) {
        std::lock_guard lock(mutex);
        failures.emplace_back(order, std::move(message));
    }
    std::vector<std::string> sorted() {
        std::sort(failures.begin(), failures.end());
        std::vector<std::string> out;
        for (auto& f : failures) out.push_back(std::move(f.second));
        return out;
    }
};

}  // namespace

CuboidReport verify_cuboid_classification(std::size_t trials, std::uint64_t seed, std::size_t grid) {
    if (trials == 0) throw InvalidArgumentError("trials must be at least 1");
    CuboidReport report;
    report.trials = trials;
    std::vector<int> random_feasible(trials), noncuboid(trials), cuboid_ok(trials), perturbed_ok(trials);
    Collector failures;
    detail::parallel_for(trials, [&](std::size_t t) {
        std::mt19937_64 rng(trial_seed(seed, t));
        const std::string tag = "trial " + std::to_string(t) + ": ";
        try {
            const auto quad = random_bases(rng, 4);
            if (certify(quad, float_options()).feasible()) {
                random_feasible[t] = 1;
                if (!is_right_cuboid(quad)) {
                    noncuboid[t] = 1;
                    failures.add(t, tag + "feasible quadruple is not a right cuboid");
                }
            }
            const auto cub = random_cuboid(rng);
            if (is_right_cuboid(cub) && certify(cub, float_options()).feasible())
                cuboid_ok[t] = 1;
            else
                failures.add(t, tag + "random cuboid not certified feasible");
            auto perturbed = cub;
            perturbed[3] = rotate_bases({cub[3]}, rotation_unitary(random_direction(rng), 1e-3)).front();
            if (!is_right_cuboid(perturbed) && !certify(perturbed, float_options()).feasible())
                perturbed_ok[t] = 1;
            else
                failures.add(t, tag + "perturbed cuboid not certified infeasible");
        } catch (const std::exception& e) {
            failures.add(t, tag + "exception: " + e.what());
        }
    });
    for (std::size_t t = 0; t < trials; ++t) {
        report.random_feasible += random_feasible[t];
        report.feasible_noncuboid += noncuboid[t];
        report.random_cuboids_feasible += cuboid_ok[t];
        report.perturbed_infeasible += perturbed_ok[t];
    }
    std::vector<int> grid_ok(grid * grid);
    detail::parallel_for(grid * grid, [&](std::size_t k) {
        const double step = (std::numbers::pi / 2) / static_cast<double>(grid + 1);
        const double theta = step * static_cast<double>(k / grid + 1), phi = step * static_cast<double>(k % grid + 1);
        try {
            if (certify(family_bases({FamilyKind::Cuboid, theta, phi, {}}), float_options()).feasible())
                grid_ok[k] = 1;
            else
                failures.add(trials + k, "cuboid grid point (" + std::to_string(theta) + ", " + std::to_string(phi) +
                                             ") infeasible");
        } catch (const std::exception& e) {
            failures.add(trials + k, "cuboid grid point exception: " + std::string(e.what()));
        }
    });
    report.grid_points = grid * grid;
    report.grid_feasible = static_cast<std::size_t>(std::accumulate(grid_ok.begin(), grid_ok.end(), 0));
    report.failures = failures.sorted();
    return report;
}

MaxBasesReport verify_max_bases(std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw InvalidArgumentError("trials must be at least 1");
    MaxBasesReport report;
    report.random_sets = trials;
    report.cuboid_plus_one = trials;
    std::vector<int> random_ok(trials), plus_ok(trials);
    Collector failures;
    detail::parallel_for(trials, [&](std::size_t t) {
        std::mt19937_64 rng(trial_seed(seed, t));
        const std::string tag = "trial " + std::to_string(t) + ": ";
        try {
            if (!certify(random_bases(rng, 5), float_options()).feasible())
                random_ok[t] = 1;
            else
                failures.add(t, tag + "random five-basis set certified feasible");
            if (!certify(random_bases(rng, 5, random_cuboid(rng)), float_options()).feasible())
                plus_ok[t] = 1;
            else
                failures.add(t, tag + "cuboid plus one certified feasible");
        } catch (const std::exception& e) {
            failures.add(t, tag + "exception: " + e.what());
        }
    });
    report.random_infeasible = static_cast<std::size_t>(std::accumulate(random_ok.begin(), random_ok.end(), 0));
    report.cuboid_plus_one_infeasible = static_cast<std::size_t>(std::accumulate(plus_ok.begin(), plus_ok.end(), 0));
    report.failures = failures.sorted();
    return report;
}

CoplanarReport verify_coplanar_triples(std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw InvalidArgumentError("trials must be at least 1");
    CoplanarReport report;
    report.trials = trials;
    std::vector<int> infeasible(trials), verified(trials), exceptions(trials);
    Collector failures;
    detail::parallel_for(trials, [&](std::size_t t) {
        std::mt19937_64 rng(trial_seed(seed, t));
        const std::string tag = "trial " + std::to_string(t) + ": ";
        try {
            const Vec3 normal = random_direction(rng).vec();
            const Vec3 u = normal.unitOrthogonal();
            const Vec3 v = normal.cross(u);
            std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
            std::vector<QubitBasis> triple;
            while (triple.size() < 3) {
                const double a = angle(rng);
                const BlochVector r(Vec3(std::cos(a) * u + std::sin(a) * v));
                bool distinct = true;
                for (const auto& b : triple) distinct = distinct && std::abs(b.direction().dot(r)) < 1 - 1e-3;
                if (distinct) triple.emplace_back(r);
            }
            const auto cert = certify(triple, ArithmeticMode::Exact);
            if (!cert.feasible()) infeasible[t] = 1;
            if (cert.witness_verified && !cert.feasible()) verified[t] = 1;
            if (cert.feasible()) failures.add(t, tag + "coplanar triple certified feasible");
        } catch (const std::exception& e) {
            exceptions[t] = 1;
            failures.add(t, tag + "exception: " + e.what());
        }
    });
    for (std::size_t t = 0; t < trials; ++t) {
        report.infeasible += infeasible[t];
        report.witnesses_verified += verified[t];
        report.exceptions += exceptions[t];
    }
    report.failures = failures.sorted();
    return report;
}

}  // namespace qpr
