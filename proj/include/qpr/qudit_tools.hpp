#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qpr/quasirep.hpp"

namespace qpr {

/// State outside the real span of the family's projectors.
class SpanError : public Error {
public:
    using Error::Error;
};
class RankDeficientFrameError : public Error {
public:
    using Error::Error;
};

/** N orthonormal bases of one dimension d. */
struct BasisFamily {
    int dim = 2;
    std::vector<QuditBasis> bases;

    BasisFamily() = default;
    /// Throws DimensionError when the bases differ in dimension.
    BasisFamily(int d, std::vector<QuditBasis> b);
    static BasisFamily from_qubit(const std::vector<QubitBasis>& bases);
    std::size_t size() const { return bases.size(); }
    /// Family without basis `alpha`.
    BasisFamily without(std::size_t alpha) const;
};

/**
 * Disparate: for every f in Z_d^N, {rho(a, j) : j != f_a} plus the identity is
 * linearly independent (singular values above `cutoff`). N > d + 1 is never
 * disparate.
 */
bool is_disparate(const BasisFamily& fam, double cutoff = kTolerance);

/// No element of one basis is orthogonal to an element of another (overlap > tol).
bool mutually_nonorthogonal(const BasisFamily& fam, double tol = kTolerance);

/**
 * eps phi + (1 - eps)/d 1 = sum p[a][j] rho(a, j) with the largest eps the
 * hull allows. `omitted[a]` is the first j with p[a][j] = 0, or -1.
 */
struct HullDecomposition {
    double epsilon = 0.0;
    std::vector<int> omitted;
    std::vector<std::vector<double>> p;
    double residual = 0.0;
    /// Every basis has a zero coefficient.
    bool zero_in_every_basis = false;
};

/// Maximizes eps by linear programming. SpanError when phi is not in the span
/// of the family's projectors (least-squares residual above 1e-9).
HullDecomposition hull_decompose(const BasisFamily& fam, const HermitianOp& phi);

/// max_abs_diff between both sides of the decomposition identity.
double decomposition_residual(const BasisFamily& fam, const HermitianOp& phi, const HullDecomposition& dec);

struct Theorem3Report {
    bool precondition_ok = false;
    std::string note;
    bool disparate = false;
    /// Certifier verdict at d = 2 (or the flag handed in).
    std::optional<bool> nonnegative;
    /// Not (non-negative and not disparate).
    bool consistent = false;
};

/// Three mutually non-orthogonal bases. At d = 2 the certifier decides
/// non-negativity unless `certified_nonnegative` is given.
Theorem3Report check_theorem3(const BasisFamily& fam, std::optional<bool> certified_nonnegative = std::nullopt);

struct Theorem4Report {
    bool applicable = false;
    std::string note;
    double epsilon = 0.0;
    double expected = 0.0;
    bool epsilon_matches = false;
    /// Per remaining basis, how many p equal (1 - eps)/d.
    std::vector<int> full_weight_counts;
    /// Nonzero coefficients, basis by basis.
    std::vector<double> coefficients;
};

/// Four bases; `dec` expresses element 0 of the last basis over the first three.
Theorem4Report check_theorem4_relation(const BasisFamily& fam, const HullDecomposition& dec);

/// Tries every (basis, element) as the decomposed state and reports the first
/// relabeling whose maximal eps is 1/(d + 1), or the last one tried.
Theorem4Report theorem4_search(const BasisFamily& fam);

struct Theorem5Report {
    bool applicable = false;
    std::string note;
    double bound = 0.0;
    /// The decomposition handed in.
    double given_epsilon = 0.0;
    bool given_within_bound = false;
    /// Element 0 of the last basis over the others, maximal eps.
    double maximal_epsilon = 0.0;
    bool maximal_within_bound = false;
};

/// (N - 3)/(N - 3 + d).
double theorem5_bound(std::size_t n, int d);
Theorem5Report check_theorem5_bound(const BasisFamily& fam, const HullDecomposition& dec);

struct PatternCount {
    int dim = 2;
    /// 2^(d^2).
    std::uint64_t bound = 0;
    /// Patterns with between 1 and d^2 - d + 1 nonzero entries.
    std::uint64_t refined = 0;
    /// Patterns realized by an element of a non-negative basis (rep given).
    std::optional<std::uint64_t> observed;
    /// Labels of the d^2 independent points used.
    std::vector<std::string> points;
};

/**
 * Counting bound on states that are elements of non-negative bases. With a
 * representation, each 0/q pattern on d^2 independent points is solved for
 * the unique Hermitian rho; it counts when rho is a pure state whose
 * distribution is non-negative with indicators in [0, 1] (at d = 2 the whole
 * basis {rho, 1 - rho} must be non-negative).
 */
PatternCount pattern_bound(int d, const QuasiRep* rep = nullptr);

/// Complete set of d + 1 mutually unbiased bases for prime d.
std::vector<QuditBasis> mutually_unbiased_bases(int d);
/// Haar-random orthonormal basis.
QuditBasis random_qudit_basis(int d, std::mt19937_64& rng);

}  // namespace qpr
