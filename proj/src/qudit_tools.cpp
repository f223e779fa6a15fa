#include "qpr/qudit_tools.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

#include "parallel.hpp"
#include "qpr/certifier.hpp"
#include "qpr/lp.hpp"

namespace qpr {

namespace {

constexpr double kSpanTol = 1e-9;
constexpr double kRelationTol = 1e-8;
constexpr double kZeroCoefficient = 1e-9;

HermitianOp unvectorize(const Eigen::VectorXd& v, int d) {
    CMatrix m = CMatrix::Zero(d, d);
    int idx = 0;
    for (int j = 0; j < d; ++j) m(j, j) = v[idx++];
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            const double re = v[idx++] / std::sqrt(2.0);
            const double im = v[idx++] / std::sqrt(2.0);
            m(j, k) = Complex(re, im);
            m(k, j) = Complex(re, -im);
        }
    }
    return HermitianOp(m);
}

int numeric_rank(const Eigen::MatrixXd& rows, double cutoff) {
    if (rows.rows() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
    return static_cast<int>((svd.singularValues().array() > cutoff).count());
}

QubitBasis to_qubit(const QuditBasis& b) { return QubitBasis(density_to_bloch(b[0])); }

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

BasisFamily::BasisFamily(int d, std::vector<QuditBasis> b) : dim(d), bases(std::move(b)) {
    for (const auto& basis : bases)
        if (basis.dim() != dim) throw DimensionError("basis dimension differs from the family dimension");
}

BasisFamily BasisFamily::from_qubit(const std::vector<QubitBasis>& qubit_bases) {
    std::vector<QuditBasis> out;
    for (const auto& b : qubit_bases) out.push_back(QuditBasis::from_qubit(b));
    return BasisFamily(2, std::move(out));
}

BasisFamily BasisFamily::without(std::size_t alpha) const {
    std::vector<QuditBasis> out;
    for (std::size_t a = 0; a < bases.size(); ++a)
        if (a != alpha) out.push_back(bases[a]);
    return BasisFamily(dim, std::move(out));
}

bool is_disparate(const BasisFamily& fam, double cutoff) {
    const int d = fam.dim;
    const std::size_t n = fam.size();
    if (n > static_cast<std::size_t>(d + 1)) return false;
    std::size_t patterns = 1;
    for (std::size_t a = 0; a < n; ++a) patterns *= static_cast<std::size_t>(d);
    const Eigen::VectorXd identity = real_vectorize(HermitianOp::identity(d));
    std::atomic<bool> all_independent{true};
    detail::parallel_for(patterns, [&](std::size_t code) {
        if (!all_independent) return;
        const int count = static_cast<int>(n) * (d - 1) + 1;
        Eigen::MatrixXd rows(count, d * d);
        int r = 0;
        std::size_t rest = code;
        for (std::size_t a = 0; a < n; ++a) {
            const int omitted = static_cast<int>(rest % static_cast<std::size_t>(d));
            rest /= static_cast<std::size_t>(d);
            for (int j = 0; j < d; ++j)
                if (j != omitted) rows.row(r++) = real_vectorize(fam.bases[a][j]).transpose();
        }
        rows.row(r) = identity.transpose();
        if (numeric_rank(rows, cutoff) < count) all_independent = false;
    });
    return all_independent;
}

bool mutually_nonorthogonal(const BasisFamily& fam, double tol) {
    for (std::size_t a = 0; a < fam.size(); ++a)
        for (std::size_t b = a + 1; b < fam.size(); ++b)
            for (const auto& x : fam.bases[a].elements())
                for (const auto& y : fam.bases[b].elements())
                    if (overlap(x, y) <= tol) return false;
    return true;
}

double decomposition_residual(const BasisFamily& fam, const HermitianOp& phi, const HullDecomposition& dec) {
    const int d = fam.dim;
    HermitianOp lhs = dec.epsilon * phi + ((1 - dec.epsilon) / d) * HermitianOp::identity(d);
    HermitianOp rhs = HermitianOp::zero(d);
    for (std::size_t a = 0; a < fam.size(); ++a)
        for (int j = 0; j < d; ++j) rhs += dec.p[a][static_cast<std::size_t>(j)] * fam.bases[a][j];
    return max_abs_diff(lhs, rhs);
}

HullDecomposition hull_decompose(const BasisFamily& fam, const HermitianOp& phi) {
    const int d = fam.dim;
    if (phi.dim() != d) throw DimensionError("state dimension differs from the family dimension");
    if (fam.size() == 0) throw InvalidArgumentError("empty basis family");
    const std::size_t n = fam.size();
    const int dd = d * d;
    Eigen::MatrixXd span(dd, static_cast<Eigen::Index>(n) * d);
    for (std::size_t a = 0; a < n; ++a)
        for (int j = 0; j < d; ++j) span.col(static_cast<Eigen::Index>(a) * d + j) = real_vectorize(fam.bases[a][j]);
    const Eigen::VectorXd target = real_vectorize(phi);
    const Eigen::VectorXd coeffs = span.completeOrthogonalDecomposition().solve(target);
    const double span_residual = (span * coeffs - target).norm();
    if (span_residual > kSpanTol)
        throw SpanError("state is outside the span of the family (residual " + std::to_string(span_residual) + ")");

    const std::size_t vars = n * static_cast<std::size_t>(d) + 1;
    lp::DenseMatrix<double> a(static_cast<std::size_t>(dd), vars);
    std::vector<double> b(static_cast<std::size_t>(dd));
    const Eigen::VectorXd centre = real_vectorize((1.0 / d) * HermitianOp::identity(d));
    const Eigen::VectorXd direction = target - centre;
    for (int r = 0; r < dd; ++r) {
        for (std::size_t c = 0; c + 1 < vars; ++c) a(static_cast<std::size_t>(r), c) = span(r, static_cast<Eigen::Index>(c));
        a(static_cast<std::size_t>(r), vars - 1) = -direction[r];
        b[static_cast<std::size_t>(r)] = centre[r];
    }
    std::vector<double> objective(vars, 0.0);
    objective.back() = 1.0;
    const auto result = lp::maximize(a, b, objective);
    if (result.status != lp::Status::Feasible)
        throw NumericalError("hull decomposition LP did not reach an optimum");

    HullDecomposition dec;
    dec.epsilon = result.x.back();
    dec.p.assign(n, std::vector<double>(static_cast<std::size_t>(d)));
    dec.zero_in_every_basis = true;
    for (std::size_t al = 0; al < n; ++al) {
        int omitted = -1;
        for (int j = 0; j < d; ++j) {
            double v = result.x[al * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)];
            if (std::abs(v) < kZeroCoefficient) v = 0.0;
            dec.p[al][static_cast<std::size_t>(j)] = v;
            if (v == 0.0 && omitted < 0) omitted = j;
        }
        dec.omitted.push_back(omitted);
        dec.zero_in_every_basis = dec.zero_in_every_basis && omitted >= 0;
    }
    dec.residual = decomposition_residual(fam, phi, dec);
    return dec;
}

Theorem3Report check_theorem3(const BasisFamily& fam, std::optional<bool> certified_nonnegative) {
    Theorem3Report report;
    if (fam.size() != 3) {
        report.note = "needs exactly three bases";
        return report;
    }
    if (!mutually_nonorthogonal(fam)) {
        report.note = "precondition failed: an element of one basis is orthogonal to an element of another";
        return report;
    }
    report.precondition_ok = true;
    report.disparate = is_disparate(fam);
    report.nonnegative = certified_nonnegative;
    if (!report.nonnegative && fam.dim == 2) {
        std::vector<QubitBasis> qubit;
        for (const auto& b : fam.bases) qubit.push_back(to_qubit(b));
        CertifyOptions options;
        options.mode = ArithmeticMode::Float;
        options.verify_frame = false;
        report.nonnegative = certify(qubit, options).feasible();
    }
    report.consistent = !(report.nonnegative.value_or(false) && !report.disparate);
    return report;
}

Theorem4Report check_theorem4_relation(const BasisFamily& fam, const HullDecomposition& dec) {
    Theorem4Report report;
    const int d = fam.dim;
    report.expected = 1.0 / (d + 1);
    if (fam.size() != 4) {
        report.note = "needs exactly four bases";
        return report;
    }
    if (is_disparate(fam)) {
        report.note = "not applicable: the bases are disparate";
        return report;
    }
    if (dec.p.size() != 3) {
        report.note = "decomposition must be over the first three bases";
        return report;
    }
    report.applicable = true;
    report.epsilon = dec.epsilon;
    report.epsilon_matches = std::abs(dec.epsilon - report.expected) <= kRelationTol;
    const double full = (1 - dec.epsilon) / d;
    for (const auto& basis : dec.p) {
        int count = 0;
        for (double v : basis) {
            if (std::abs(v - full) <= kRelationTol) ++count;
            if (v != 0.0) report.coefficients.push_back(v);
        }
        report.full_weight_counts.push_back(count);
    }
    return report;
}

Theorem4Report theorem4_search(const BasisFamily& fam) {
    Theorem4Report last;
    if (fam.size() != 4) {
        last.note = "needs exactly four bases";
        return last;
    }
    if (is_disparate(fam)) {
        last.note = "not applicable: the bases are disparate";
        last.expected = 1.0 / (fam.dim + 1);
        return last;
    }
    for (std::size_t beta = 4; beta-- > 0;) {
        for (int k = 0; k < fam.dim; ++k) {
            std::vector<QuditBasis> order;
            for (std::size_t a = 0; a < 4; ++a)
                if (a != beta) order.push_back(fam.bases[a]);
            // Relabel so the decomposed element is element 0 of the last basis.
            std::vector<HermitianOp> last_elements = fam.bases[beta].elements();
            std::swap(last_elements[0], last_elements[static_cast<std::size_t>(k)]);
            order.emplace_back(last_elements);
            const BasisFamily relabeled(fam.dim, order);
            try {
                const auto dec = hull_decompose(relabeled.without(3), relabeled.bases[3][0]);
                last = check_theorem4_relation(relabeled, dec);
                last.note = "basis " + std::to_string(beta) + ", element " + std::to_string(k);
                if (last.epsilon_matches) return last;
            } catch (const SpanError&) {
                continue;
            }
        }
    }
    return last;
}

double theorem5_bound(std::size_t n, int d) {
    if (n < 4) throw InvalidArgumentError("the bound is stated for N >= 4");
    const double m = static_cast<double>(n) - 3.0;
    return m / (m + d);
}

Theorem5Report check_theorem5_bound(const BasisFamily& fam, const HullDecomposition& dec) {
    Theorem5Report report;
    if (fam.size() < 4) {
        report.note = "needs at least four bases";
        return report;
    }
    report.bound = theorem5_bound(fam.size(), fam.dim);
    if (is_disparate(fam)) {
        report.note = "not applicable: the bases are disparate";
        return report;
    }
    report.applicable = true;
    report.given_epsilon = dec.epsilon;
    report.given_within_bound = dec.epsilon <= report.bound + kRelationTol;
    const BasisFamily head = fam.without(fam.size() - 1);
    try {
        const auto maximal = hull_decompose(head, fam.bases.back()[0]);
        report.maximal_epsilon = maximal.epsilon;
        report.maximal_within_bound = maximal.epsilon <= report.bound + kRelationTol;
    } catch (const SpanError& e) {
        report.note = std::string("maximal decomposition unavailable: ") + e.what();
    }
    return report;
}

PatternCount pattern_bound(int d, const QuasiRep* rep) {
    if (d < 2) throw InvalidArgumentError("dimension must be at least 2");
    const int dd = d * d;
    if (dd > 63) throw InvalidArgumentError("2^(d^2) does not fit in 64 bits for d > 7");
    PatternCount out;
    out.dim = d;
    out.bound = std::uint64_t{1} << dd;
    for (int k = 1; k <= dd - d + 1; ++k) out.refined += binomial(static_cast<std::uint64_t>(dd), static_cast<std::uint64_t>(k));
    if (!rep) return out;
    if (rep->dim() != d) throw DimensionError("representation dimension differs from d");
    if (d > 4) throw InvalidArgumentError("pattern enumeration is limited to d <= 4");

    const auto q = q_function(*rep);
    // Greedy choice of d^2 independent points, positive-q points first.
    std::vector<std::size_t> chosen;
    Eigen::MatrixXd rows(0, dd);
    for (int pass = 0; pass < 2 && static_cast<int>(chosen.size()) < dd; ++pass) {
        for (std::size_t i = 0; i < rep->size() && static_cast<int>(chosen.size()) < dd; ++i) {
            const bool positive = q.values[i] > kTolerance;
            if ((pass == 0) != positive) continue;
            Eigen::MatrixXd trial(rows.rows() + 1, dd);
            trial << rows, real_vectorize(rep->f(i)).transpose();
            if (numeric_rank(trial, kTolerance) == trial.rows()) {
                rows = trial;
                chosen.push_back(i);
            }
        }
    }
    if (static_cast<int>(chosen.size()) < dd)
        throw RankDeficientFrameError("frame has fewer than d^2 linearly independent operators");
    for (auto i : chosen) out.points.push_back(rep->space().label(i));

    const auto solver = rows.fullPivLu();
    std::uint64_t observed = 0;
    for (std::uint64_t pattern = 0; pattern < out.bound; ++pattern) {
        Eigen::VectorXd values(dd);
        for (int b = 0; b < dd; ++b) values[b] = ((pattern >> b) & 1U) ? q.values[chosen[static_cast<std::size_t>(b)]] : 0.0;
        const HermitianOp rho = unvectorize(solver.solve(values), d);
        if (std::abs(rho.trace() - 1.0) > 1e-7) continue;
        if (std::abs(trace_product(rho, rho) - 1.0) > 1e-7) continue;
        if (rho.eigenvalues().minCoeff() < -1e-7) continue;
        bool nonnegative = true;
        if (d == 2) {
            nonnegative = is_nonnegative_basis(*rep, QubitBasis(density_to_bloch(rho)));
        } else {
            for (std::size_t i = 0; i < rep->size() && nonnegative; ++i) {
                const double m = mu(*rep, rho, i);
                const double x = xi(*rep, rho, i);
                nonnegative = m >= -kTolerance && x >= -kTolerance && x <= 1 + kTolerance;
            }
        }
        if (nonnegative) ++observed;
    }
    out.observed = observed;
    return out;
}

std::vector<QuditBasis> mutually_unbiased_bases(int d) {
    if (d == 2) {
        return {QuditBasis::from_qubit(QubitBasis(BlochVector(0, 0, 1))),
                QuditBasis::from_qubit(QubitBasis(BlochVector(1, 0, 0))),
                QuditBasis::from_qubit(QubitBasis(BlochVector(0, 1, 0)))};
    }
    for (int k = 2; k * k <= d; ++k)
        if (d % k == 0) throw InvalidArgumentError("mutually unbiased bases are built for prime d only");
    std::vector<QuditBasis> out;
    std::vector<CVector> computational;
    for (int j = 0; j < d; ++j) computational.push_back(CVector::Unit(d, j));
    out.push_back(QuditBasis::from_vectors(computational));
    const double two_pi = 2 * std::numbers::pi;
    for (int k = 0; k < d; ++k) {
        std::vector<CVector> vectors;
        for (int j = 0; j < d; ++j) {
            CVector v(d);
            for (int m = 0; m < d; ++m) v[m] = std::polar(1.0 / std::sqrt(d), two_pi * ((k * m * m + j * m) % d) / d);
            vectors.push_back(v);
        }
        out.push_back(QuditBasis::from_vectors(vectors));
    }
    return out;
}

QuditBasis random_qudit_basis(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    CMatrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Complex(normal(rng), normal(rng));
    const CMatrix q = Eigen::HouseholderQR<CMatrix>(g).householderQ();
    std::vector<CVector> vectors;
    for (int j = 0; j < d; ++j) vectors.push_back(q.col(j));
    return QuditBasis::from_vectors(vectors);
}

}  // namespace qpr
