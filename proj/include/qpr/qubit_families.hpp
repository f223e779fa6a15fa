#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpr/operator_core.hpp"
#include "qpr/quasirep.hpp"

namespace qpr {

/// Parameters outside a family's domain.
class ParameterRangeError : public Error {
public:
    using Error::Error;
};
/// No non-negative distribution exists; the message names the violated bound.
class InfeasibleDistributionError : public Error {
public:
    using Error::Error;
};
/// d-vector system has no solution (e.g. coplanar Bloch vectors).
class NoSolutionError : public Error {
public:
    using Error::Error;
};
/// A built frame failed validation.
class FrameConstructionError : public Error {
public:
    FrameConstructionError(const std::string& what, double deviation)
        : Error(what), max_deviation(deviation) {}
    double max_deviation;
};

enum class FamilyKind { Single, Pair, D3, C2, Cuboid, Stabilizer, Icosahedron };

std::string to_string(FamilyKind kind);
FamilyKind parse_family_kind(std::string_view text);

/**
 * A family of qubit bases in canonical orientation. Angles are radians.
 *  - single:      {z}
 *  - pair:        (sin t, 0, cos t), (-sin t, 0, cos t), t in (0, pi/2)
 *  - d3:          three bases related by 2pi/3 rotations about z, t in (0, pi)
 *  - c2:          pair plus (cos p, sin p, 0), t in (0, pi/2), p in (0, pi)
 *  - cuboid:      vertices of a right cuboid, t, p in (0, pi/2)
 *  - stabilizer:  x, y, z
 *  - icosahedron: six antipodal vertex pairs of a regular icosahedron
 * `q0` selects a non-symmetric member of the d3 / c2 distribution families.
 */
struct FamilySpec {
    FamilyKind kind = FamilyKind::Stabilizer;
    double theta = 0.0;
    double phi = 0.0;
    std::optional<double> q0;
};

/// Throws ParameterRangeError when theta/phi are outside the family's domain.
void validate(const FamilySpec& spec);

/**
 * Which basis element each ontic point is compatible with:
 * signs[point][j] = gamma such that point lies in supp(rho(j, gamma)).
 */
struct SupportPattern {
    OnticSpace space;
    std::vector<std::vector<int>> signs;

    std::size_t num_bases() const { return signs.empty() ? 0 : signs.front().size(); }
    /// Points compatible with rho(j, gamma).
    SupportSet support_of(std::size_t j, int gamma) const;
};

/// The 8-point (eps, a) pattern for three bases, labels "+0".."+3","-0".."-3".
SupportPattern table_one_pattern();
/// The 6-point (eps, a), a = 1..3 pattern for the four cuboid bases.
SupportPattern cuboid_pattern();

std::vector<QubitBasis> family_bases(const FamilySpec& spec);
/// Pattern used to build the family's frame (3-basis completion for single/pair).
SupportPattern family_pattern(const FamilySpec& spec);
/// Bases the frame is built from; equals family_bases except for single/pair.
std::vector<QubitBasis> frame_bases(const FamilySpec& spec);

/**
 * d3 distribution over the 8 Table I points. symmetric: q(eps,0) = 1 - 9/8 sin^2 t,
 * q(eps,a) = 3/8 sin^2 t. Otherwise the one-parameter solution with q(+,0) = q0,
 * q0 restricted to [0, 2 - 9/4 sin^2 t].
 */
OnticDistribution d3_distribution(double theta, bool symmetric = true,
                                  std::optional<double> q0 = std::nullopt);

/// c2 distribution; q0 defaults to cos^2 t / 2. Requires |cos p| <= sin t.
OnticDistribution c2_distribution(double theta, double phi,
                                  std::optional<double> q0 = std::nullopt);

/// Normalized cuboid weights q(eps, a) = c_a^2 with c = r(+,+,+).
OnticDistribution cuboid_distribution(double theta, double phi);

/**
 * Cuboid weights in the closed form 1 + sin^2 t cos 2p - cos^2 t,
 * 1 - sin^2 t cos 2p - cos^2 t, 1 + cos 2t. They are exactly twice the
 * normalized weights returned by cuboid_distribution (they sum to 2 over a
 * state's 3-point support).
 */
std::array<double, 3> cuboid_unnormalized_weights(double theta, double phi);

OnticDistribution stabilizer_distribution();

/// Symmetric distribution of a family (dispatches on kind, honours q0).
OnticDistribution family_distribution(const FamilySpec& spec);

/** Per-point vectors d with d . r(j) = signs[point][j]; F = q/2 (1 + d.sigma). */
struct DVectorSet {
    OnticSpace space;
    std::vector<Vec3> vectors;

    const Vec3& at(const std::string& label) const { return vectors.at(space.index_of(label)); }
};

/// Solves the 3 x 3 (or overdetermined) systems; NoSolutionError if the
/// Bloch vectors do not span R^3 or a point's system is inconsistent.
DVectorSet solve_dvectors(const std::vector<QubitBasis>& bases, const SupportPattern& pattern,
                          double tol = kTolerance);

/// max over normalization and pairwise-overlap constraints of |lhs - rhs|.
double constraint_residual(const std::vector<QubitBasis>& bases, const SupportPattern& pattern,
                           const OnticDistribution& q);

/**
 * F(l) = q(l)/2 (1 + d(l).sigma), G(l) = (1 + d(l).sigma)/2. The result is
 * checked as a dual frame, every input basis must be non-negative and the
 * lemma report must be clean; otherwise FrameConstructionError.
 */
QuasiRep build_frame(const std::vector<QubitBasis>& bases, const OnticDistribution& q,
                     const SupportPattern& pattern);

/// Frame of a family at its (possibly q0-adjusted) symmetric distribution.
QuasiRep build_family_frame(const FamilySpec& spec);

/**
 * Restriction of an 8-point stabilizer representation to {(+, a)}:
 * F'(a) = (1/2) sum_j rho(j, gamma_ja) - (1/2) 1 and G'(a) = 2 F'(a), which
 * is the standard single-qubit discrete Wigner function.
 */
QuasiRep reduced_wigner(const QuasiRep& stabilizer_rep);

}  // namespace qpr
