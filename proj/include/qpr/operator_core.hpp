#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpr/exact.hpp"

/**
 * Finite-dimensional operator algebra shared by every other module: Hermitian
 * operators, the qubit Bloch map, and validated orthonormal bases.
 */
namespace qpr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

/// Comparison tolerance of the float backend.
inline constexpr double kTolerance = 1e-9;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class InvalidStateError : public Error {
public:
    using Error::Error;
};
class DimensionError : public Error {
public:
    using Error::Error;
};
class InvalidBasisError : public Error {
public:
    using Error::Error;
};
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

/** A d x d complex matrix equal to its own conjugate transpose. */
class HermitianOp {
public:
    HermitianOp() = default;

    /// Throws InvalidArgumentError if `m` is not square or not Hermitian within `tol`.
    explicit HermitianOp(CMatrix m, double tol = kTolerance);

    static HermitianOp identity(int dim);
    static HermitianOp zero(int dim);
    /// |v><v| for a normalized copy of v.
    static HermitianOp projector(const CVector& v);

    int dim() const { return static_cast<int>(m_.rows()); }
    const CMatrix& matrix() const { return m_; }
    Complex operator()(int i, int j) const { return m_(i, j); }

    double trace() const { return m_.trace().real(); }
    /// U A U^dagger.
    HermitianOp conjugated(const CMatrix& unitary) const;
    Eigen::VectorXd eigenvalues() const;

    HermitianOp& operator+=(const HermitianOp& other);
    HermitianOp& operator-=(const HermitianOp& other);
    HermitianOp& operator*=(double s);

private:
    CMatrix m_;
};

HermitianOp operator+(HermitianOp a, const HermitianOp& b);
HermitianOp operator-(HermitianOp a, const HermitianOp& b);
HermitianOp operator*(double s, HermitianOp a);

/// Tr(AB) for Hermitian A, B (always real).
double trace_product(const HermitianOp& a, const HermitianOp& b);
/// Max-abs entrywise difference.
double max_abs_diff(const HermitianOp& a, const HermitianOp& b);
/// Half the trace norm of A - B.
double trace_distance(const HermitianOp& a, const HermitianOp& b);

const CMatrix& pauli_x();
const CMatrix& pauli_y();
const CMatrix& pauli_z();

/** Real 3-vector representing a qubit state; unit norm for pure states. */
class BlochVector {
public:
    BlochVector() : r_(Vec3::Zero()) {}
    BlochVector(double x, double y, double z) : r_(x, y, z) {}
    explicit BlochVector(const Vec3& r) : r_(r) {}

    double x() const { return r_.x(); }
    double y() const { return r_.y(); }
    double z() const { return r_.z(); }
    double operator[](int k) const { return r_[k]; }
    const Vec3& vec() const { return r_; }
    double norm() const { return r_.norm(); }
    double dot(const BlochVector& other) const { return r_.dot(other.r_); }
    BlochVector operator-() const { return BlochVector(Vec3(-r_)); }
    bool is_pure(double tol = kTolerance) const { return std::abs(norm() - 1.0) <= tol; }

private:
    Vec3 r_;
};

/// r . sigma as a 2x2 matrix.
CMatrix sigma_dot(const Vec3& r);

/**
 * Orthonormal qubit basis stored as a direction r; element gamma = +1 is
 * (1 + r.sigma)/2 and gamma = -1 is (1 - r.sigma)/2, in that order.
 */
class QubitBasis {
public:
    explicit QubitBasis(const BlochVector& direction);

    const BlochVector& direction() const { return direction_; }
    const HermitianOp& plus() const { return plus_; }
    const HermitianOp& minus() const { return minus_; }
    /// gamma must be +1 or -1.
    const HermitianOp& element(int gamma) const;
    std::vector<HermitianOp> elements() const { return {plus_, minus_}; }
    QubitBasis flipped() const { return QubitBasis(-direction_); }

private:
    BlochVector direction_;
    HermitianOp plus_;
    HermitianOp minus_;
};

/** d rank-1 projectors, pairwise trace-orthogonal and summing to the identity. */
class QuditBasis {
public:
    /// Validates orthonormality and completeness; throws InvalidBasisError.
    explicit QuditBasis(std::vector<HermitianOp> elements, double tol = kTolerance);

    /// Builds the projectors from d (not necessarily normalized) vectors.
    static QuditBasis from_vectors(const std::vector<CVector>& vectors, double tol = kTolerance);
    static QuditBasis from_qubit(const QubitBasis& basis) { return QuditBasis(basis.elements()); }

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(elements_.size()); }
    const HermitianOp& operator[](int j) const { return elements_[j]; }
    const std::vector<HermitianOp>& elements() const { return elements_; }
    QuditBasis conjugated(const CMatrix& unitary) const;

private:
    int dim_;
    std::vector<HermitianOp> elements_;
};

/// rho = (1 + r.sigma)/2. Throws InvalidStateError when |r| > 1 + tolerance.
HermitianOp bloch_to_density(const BlochVector& r);
/// r_k = Tr(rho sigma_k). Throws DimensionError unless dim == 2.
BlochVector density_to_bloch(const HermitianOp& rho);
/// Tr(rho omega); DimensionError on mismatched dimensions.
double overlap(const HermitianOp& rho, const HermitianOp& omega);
/// InvalidStateError unless |r| = 1 within tolerance.
QubitBasis basis_from_bloch(const BlochVector& r);

/**
 * exp(-i angle axis.sigma / 2): conjugation rotates Bloch vectors by `angle`
 * (right-handed) about `axis`. The axis is normalized; a zero axis throws.
 */
CMatrix rotation_unitary(const BlochVector& axis, double angle);

/// |Tr(U^dagger V)| = d within tol.
bool equal_up_to_phase(const CMatrix& u, const CMatrix& v, double tol = kTolerance);
bool is_unitary(const CMatrix& u, double tol = kTolerance);

// ---------------------------------------------------------------------------
// Exact qubit algebra over the rationals.

struct ExactBloch {
    std::array<Rational, 3> r;
    Rational norm_squared() const { return r[0] * r[0] + r[1] * r[1] + r[2] * r[2]; }
    bool operator==(const ExactBloch&) const = default;
};

/// 2x2 Hermitian matrix with rational real and imaginary parts (row-major).
struct ExactQubitOp {
    std::array<Rational, 4> re;
    std::array<Rational, 4> im;
    Rational trace() const { return re[0] + re[3]; }
    bool operator==(const ExactQubitOp&) const = default;
};

ExactQubitOp bloch_to_density(const ExactBloch& r);
ExactBloch density_to_bloch(const ExactQubitOp& rho);
Rational overlap(const ExactQubitOp& rho, const ExactQubitOp& omega);
ExactBloch rationalize(const BlochVector& r, double tol = 1e-12);
BlochVector to_float(const ExactBloch& r);

}  // namespace qpr
