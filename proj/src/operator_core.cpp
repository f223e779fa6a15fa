#include "qpr/operator_core.hpp"

#include <cmath>

namespace qpr {

namespace {

constexpr Complex kI{0.0, 1.0};

}  // namespace

HermitianOp::HermitianOp(CMatrix m, double tol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
        throw InvalidArgumentError("operator must be a non-empty square matrix");
    const double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol)
        throw InvalidArgumentError("operator is not Hermitian (deviation " + std::to_string(dev) +
                                   ")");
    m_ = 0.5 * (m_ + m_.adjoint());
}

HermitianOp HermitianOp::identity(int dim) { return HermitianOp(CMatrix::Identity(dim, dim)); }

HermitianOp HermitianOp::zero(int dim) { return HermitianOp(CMatrix::Zero(dim, dim)); }

HermitianOp HermitianOp::projector(const CVector& v) {
    const double n = v.norm();
    if (n <= kTolerance) throw InvalidStateError("cannot project onto a zero vector");
    const CVector u = v / n;
    return HermitianOp(u * u.adjoint());
}

HermitianOp HermitianOp::conjugated(const CMatrix& unitary) const {
    if (unitary.rows() != dim() || unitary.cols() != dim())
        throw DimensionError("unitary dimension does not match operator");
    return HermitianOp(unitary * m_ * unitary.adjoint(), 1e-7);
}

Eigen::VectorXd HermitianOp::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

HermitianOp& HermitianOp::operator+=(const HermitianOp& other) {
    if (other.dim() != dim()) throw DimensionError("dimension mismatch in operator sum");
    m_ += other.m_;
    return *this;
}

HermitianOp& HermitianOp::operator-=(const HermitianOp& other) {
    if (other.dim() != dim()) throw DimensionError("dimension mismatch in operator difference");
    m_ -= other.m_;
    return *this;
}

HermitianOp& HermitianOp::operator*=(double s) {
    m_ *= s;
    return *this;
}

HermitianOp operator+(HermitianOp a, const HermitianOp& b) { return a += b; }
HermitianOp operator-(HermitianOp a, const HermitianOp& b) { return a -= b; }
HermitianOp operator*(double s, HermitianOp a) { return a *= s; }

double trace_product(const HermitianOp& a, const HermitianOp& b) {
    if (a.dim() != b.dim()) throw DimensionError("dimension mismatch in trace product");
    // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
    return (a.matrix().array() * b.matrix().conjugate().array()).sum().real();
}

double max_abs_diff(const HermitianOp& a, const HermitianOp& b) {
    if (a.dim() != b.dim()) throw DimensionError("dimension mismatch");
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

double trace_distance(const HermitianOp& a, const HermitianOp& b) {
    return 0.5 * (a - b).eigenvalues().cwiseAbs().sum();
}

const CMatrix& pauli_x() {
    static const CMatrix m = (CMatrix(2, 2) << 0, 1, 1, 0).finished();
    return m;
}

const CMatrix& pauli_y() {
    static const CMatrix m = (CMatrix(2, 2) << 0, -kI, kI, 0).finished();
    return m;
}

const CMatrix& pauli_z() {
    static const CMatrix m = (CMatrix(2, 2) << 1, 0, 0, -1).finished();
    return m;
}

CMatrix sigma_dot(const Vec3& r) { return r.x() * pauli_x() + r.y() * pauli_y() + r.z() * pauli_z(); }

QubitBasis::QubitBasis(const BlochVector& direction) : direction_(direction) {
    if (!direction.is_pure())
        throw InvalidStateError("basis direction must be a unit Bloch vector (norm " +
                                std::to_string(direction.norm()) + ")");
    plus_ = bloch_to_density(direction);
    minus_ = bloch_to_density(-direction);
}

const HermitianOp& QubitBasis::element(int gamma) const {
    if (gamma == 1) return plus_;
    if (gamma == -1) return minus_;
    throw InvalidArgumentError("basis element label must be +1 or -1");
}

QuditBasis::QuditBasis(std::vector<HermitianOp> elements, double tol)
    : dim_(elements.empty() ? 0 : elements.front().dim()), elements_(std::move(elements)) {
    if (elements_.empty()) throw InvalidBasisError("basis has no elements");
    if (static_cast<int>(elements_.size()) != dim_)
        throw InvalidBasisError("basis of dimension " + std::to_string(dim_) + " has " +
                                std::to_string(elements_.size()) + " elements");
    HermitianOp sum = HermitianOp::zero(dim_);
    for (int j = 0; j < dim_; ++j) {
        if (elements_[j].dim() != dim_) throw DimensionError("basis elements differ in dimension");
        for (int k = j; k < dim_; ++k) {
            const double expected = j == k ? 1.0 : 0.0;
            if (std::abs(trace_product(elements_[j], elements_[k]) - expected) > tol)
                throw InvalidBasisError("basis elements are not trace-orthonormal");
        }
        sum += elements_[j];
    }
    if (max_abs_diff(sum, HermitianOp::identity(dim_)) > tol)
        throw InvalidBasisError("basis elements do not sum to the identity");
}

QuditBasis QuditBasis::from_vectors(const std::vector<CVector>& vectors, double tol) {
    std::vector<HermitianOp> projectors;
    projectors.reserve(vectors.size());
    for (const auto& v : vectors) projectors.push_back(HermitianOp::projector(v));
    return QuditBasis(std::move(projectors), tol);
}

QuditBasis QuditBasis::conjugated(const CMatrix& unitary) const {
    std::vector<HermitianOp> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) out.push_back(e.conjugated(unitary));
    return QuditBasis(std::move(out), 1e-7);
}

HermitianOp bloch_to_density(const BlochVector& r) {
    if (r.norm() > 1.0 + kTolerance)
        throw InvalidStateError("Bloch vector norm " + std::to_string(r.norm()) + " exceeds 1");
    return HermitianOp(0.5 * (CMatrix::Identity(2, 2) + sigma_dot(r.vec())));
}

BlochVector density_to_bloch(const HermitianOp& rho) {
    if (rho.dim() != 2) throw DimensionError("Bloch vectors exist only for dimension 2");
    const CMatrix& m = rho.matrix();
    return BlochVector((m * pauli_x()).trace().real(), (m * pauli_y()).trace().real(),
                       (m * pauli_z()).trace().real());
}

double overlap(const HermitianOp& rho, const HermitianOp& omega) {
    if (rho.dim() != omega.dim()) throw DimensionError("overlap of operators of different dimension");
    return trace_product(rho, omega);
}

QubitBasis basis_from_bloch(const BlochVector& r) { return QubitBasis(r); }

CMatrix rotation_unitary(const BlochVector& axis, double angle) {
    const double n = axis.norm();
    if (n <= kTolerance) throw InvalidArgumentError("rotation axis must be nonzero");
    const Vec3 u = axis.vec() / n;
    return std::cos(angle / 2) * CMatrix::Identity(2, 2) - kI * std::sin(angle / 2) * sigma_dot(u);
}

bool equal_up_to_phase(const CMatrix& u, const CMatrix& v, double tol) {
    if (u.rows() != v.rows() || u.cols() != v.cols()) return false;
    return std::abs(std::abs((u.adjoint() * v).trace()) - static_cast<double>(u.rows())) <= tol;
}

bool is_unitary(const CMatrix& u, double tol) {
    if (u.rows() != u.cols()) return false;
    return ((u.adjoint() * u) - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

// rho = 1/2 [[1 + z, x - iy], [x + iy, 1 - z]]
ExactQubitOp bloch_to_density(const ExactBloch& b) {
    if (b.norm_squared() > 1) throw InvalidStateError("exact Bloch vector lies outside the unit ball");
    const Rational half(1, 2);
    ExactQubitOp op;
    op.re = {half * (1 + b.r[2]), half * b.r[0], half * b.r[0], half * (1 - b.r[2])};
    op.im = {Rational(0), -half * b.r[1], half * b.r[1], Rational(0)};
    return op;
}

ExactBloch density_to_bloch(const ExactQubitOp& rho) {
    if (rho.re[1] != rho.re[2] || rho.im[1] != -rho.im[2] || rho.im[0] != 0 || rho.im[3] != 0)
        throw InvalidArgumentError("exact operator is not Hermitian");
    // Tr(rho X) = 2 Re rho_01, Tr(rho Y) = -2 Im rho_01, Tr(rho Z) = rho_00 - rho_11.
    return ExactBloch{{2 * rho.re[1], -2 * rho.im[1], rho.re[0] - rho.re[3]}};
}

Rational overlap(const ExactQubitOp& a, const ExactQubitOp& b) {
    // Tr(AB) = sum_ij A_ij B_ji; the imaginary part cancels for Hermitian A, B.
    Rational sum = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            sum += a.re[2 * i + j] * b.re[2 * j + i] - a.im[2 * i + j] * b.im[2 * j + i];
    return sum;
}

ExactBloch rationalize(const BlochVector& r, double tol) {
    return ExactBloch{{rationalize(r.x(), tol), rationalize(r.y(), tol), rationalize(r.z(), tol)}};
}

BlochVector to_float(const ExactBloch& r) {
    return BlochVector(to_double(r.r[0]), to_double(r.r[1]), to_double(r.r[2]));
}

}  // namespace qpr
