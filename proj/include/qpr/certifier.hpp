#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qpr/lp.hpp"
#include "qpr/qubit_families.hpp"

/**
 * Decides whether a finite set of qubit bases can be simultaneously
 * non-negative in some quasiprobability representation, by linear
 * feasibility over sign-pattern weights.
 */
namespace qpr {

class DuplicateBasisError : public Error {
public:
    using Error::Error;
};
/// Float-mode degeneracy; the message advises exact mode.
class NumericalError : public Error {
public:
    using Error::Error;
};
class NoThresholdError : public Error {
public:
    using Error::Error;
};

/** All 2^N sign vectors; index bit (N-1-j) clear means s_j = +. */
class PatternSpace {
public:
    explicit PatternSpace(std::size_t num_bases);

    std::size_t num_bases() const { return n_; }
    std::size_t size() const { return std::size_t{1} << n_; }
    int sign(std::size_t point, std::size_t j) const { return (point >> (n_ - 1 - j)) & 1U ? -1 : 1; }
    std::vector<int> signs(std::size_t point) const;
    /// "+-+" style label.
    std::string label(std::size_t point) const;
    std::size_t index_of(const std::vector<int>& signs) const;
    OnticSpace ontic_space() const;
    /// Points compatible with rho(j, gamma): the 2^(N-1) with s_j = gamma.
    std::vector<std::size_t> compatible(std::size_t j, int gamma) const;

private:
    std::size_t n_;
};

struct FeasibilityProblem {
    PatternSpace space{1};
    std::vector<QubitBasis> bases;
    /// 0/1 constraint matrix: 2N normalization rows, then 4 C(N,2) overlap rows.
    lp::DenseMatrix<double> a;
    std::vector<double> b;
    /// Exact right-hand sides from the rationalized Bloch vectors.
    std::vector<Rational> b_exact;
    std::vector<ExactBloch> exact_bloch;
    std::vector<std::string> row_labels;

    lp::DenseMatrix<Rational> exact_matrix() const;
};

/// Throws InvalidArgumentError for no bases, DuplicateBasisError when two
/// bases coincide (|r_i . r_j| >= 1 - 1e-12).
FeasibilityProblem build_problem(const std::vector<QubitBasis>& bases);

enum class Verdict { Feasible, Infeasible };
std::string to_string(Verdict verdict);

struct FeasibilityCertificate {
    Verdict verdict = Verdict::Infeasible;
    ArithmeticMode mode = ArithmeticMode::Float;
    PatternSpace space{1};
    /// Weight per pattern point (feasible). Exact copy filled in exact mode.
    std::vector<double> q;
    std::vector<Rational> q_exact;
    /// Farkas vector per constraint row (infeasible).
    std::vector<double> farkas;
    std::vector<Rational> farkas_exact;
    /// Max constraint violation of q (feasible) or 0.
    double residual = 0.0;
    bool witness_verified = false;
    bool symmetrized = false;
    /// True when a frame was rebuilt from q and validated (spanning inputs only).
    bool frame_verified = false;
    double frame_deviation = 0.0;
    /// Why the frame step was skipped, if it was.
    std::string frame_note;
    std::size_t pivots = 0;

    bool feasible() const { return verdict == Verdict::Feasible; }
};

struct CertifyOptions {
    ArithmeticMode mode = ArithmeticMode::Exact;
    /// Average the simplex vertex over the Gram-preserving signed permutations.
    bool symmetrize = false;
    /// Rebuild and validate the frame for feasible spanning inputs.
    bool verify_frame = true;
};

FeasibilityCertificate certify(const std::vector<QubitBasis>& bases, const CertifyOptions& options = {});
FeasibilityCertificate certify(const std::vector<QubitBasis>& bases, ArithmeticMode mode);

/// Frame for a feasible certificate over its positive-weight points.
QuasiRep frame_from_certificate(const FeasibilityCertificate& cert, const std::vector<QubitBasis>& bases);

/// Signed permutations (sigma, eps) with eps_j eps_k G[sigma j][sigma k] = G[j][k].
struct SignedPermutation {
    std::vector<std::size_t> sigma;
    std::vector<int> eps;
};
std::vector<SignedPermutation> gram_symmetries(const std::vector<QubitBasis>& bases, double tol = 1e-12);

/**
 * Bisection on `parameter` ("theta" or "phi") of `family` between lo and hi,
 * whose verdicts must differ. Returns the boundary within tol.
 */
double threshold_scan(const FamilySpec& family, const std::string& parameter, double lo, double hi,
                      double tol, ArithmeticMode mode = ArithmeticMode::Float);

/// True when the 8 points +-r_j form a rectangular box (edges orthogonal within tol).
bool is_right_cuboid(const std::vector<QubitBasis>& bases, double tol = 1e-7);

struct CuboidReport {
    std::size_t trials = 0;
    std::size_t random_feasible = 0;
    std::size_t feasible_noncuboid = 0;
    std::size_t random_cuboids_feasible = 0;
    std::size_t perturbed_infeasible = 0;
    std::size_t grid_points = 0;
    std::size_t grid_feasible = 0;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

/// Random quadruples, random rotated cuboids and their perturbations, plus a
/// grid x grid cuboid sweep.
CuboidReport verify_cuboid_classification(std::size_t trials, std::uint64_t seed, std::size_t grid = 20);

struct MaxBasesReport {
    std::size_t random_sets = 0;
    std::size_t random_infeasible = 0;
    std::size_t cuboid_plus_one = 0;
    std::size_t cuboid_plus_one_infeasible = 0;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

/// Five-basis sets: `trials` random ones and `trials` cuboid-plus-one ones.
MaxBasesReport verify_max_bases(std::size_t trials, std::uint64_t seed);

struct CoplanarReport {
    std::size_t trials = 0;
    std::size_t infeasible = 0;
    std::size_t witnesses_verified = 0;
    std::size_t exceptions = 0;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

/// Random coplanar triples in exact mode; each must be refuted by a verified witness.
CoplanarReport verify_coplanar_triples(std::size_t trials, std::uint64_t seed);

/// Seed of trial i in a run seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);
/// Uniform direction on the sphere.
BlochVector random_direction(std::mt19937_64& rng);
/// Rotation unitary with uniformly random axis and angle.
CMatrix random_rotation(std::mt19937_64& rng);
/// Applies U to every basis direction.
std::vector<QubitBasis> rotate_bases(const std::vector<QubitBasis>& bases, const CMatrix& unitary);

}  // namespace qpr
