#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qpr/operator_core.hpp"

namespace qpr {

class UnknownPointError : public Error {
public:
    using Error::Error;
};

/** Finite ordered set of ontic labels, e.g. "+0".."-3" or sign patterns "+-+". */
class OnticSpace {
public:
    OnticSpace() = default;
    /// Throws InvalidArgumentError on duplicate labels.
    explicit OnticSpace(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }
    /// Throws UnknownPointError.
    std::size_t index_of(const std::string& label) const;
    bool contains(const std::string& label) const;

    bool operator==(const OnticSpace&) const = default;

private:
    std::vector<std::string> labels_;
};

/// Real-valued function on an ontic space (quasiprobabilities may be negative).
struct OnticDistribution {
    OnticSpace space;
    std::vector<double> values;

    double total() const;
    double at(const std::string& label) const { return values.at(space.index_of(label)); }
};

/// Sorted point indices.
using SupportSet = std::vector<std::size_t>;

/**
 * Paired frames {F(l)}, {G(l)} over a finite ontic space. mu_rho(l) = Tr[rho F(l)],
 * xi_E(l) = Tr[E G(l)]. Construction checks shapes only; use check_dual_frame
 * for validity.
 */
class QuasiRep {
public:
    QuasiRep(OnticSpace space, std::vector<HermitianOp> f, std::vector<HermitianOp> g);

    const OnticSpace& space() const { return space_; }
    int dim() const { return dim_; }
    std::size_t size() const { return space_.size(); }
    const HermitianOp& f(std::size_t i) const { return f_.at(i); }
    const HermitianOp& g(std::size_t i) const { return g_.at(i); }
    const std::vector<HermitianOp>& f_ops() const { return f_; }
    const std::vector<HermitianOp>& g_ops() const { return g_; }

private:
    OnticSpace space_;
    std::vector<HermitianOp> f_;
    std::vector<HermitianOp> g_;
    int dim_;
};

double mu(const QuasiRep& rep, const HermitianOp& rho, std::size_t point);
double mu(const QuasiRep& rep, const HermitianOp& rho, const std::string& label);
double xi(const QuasiRep& rep, const HermitianOp& effect, std::size_t point);
double xi(const QuasiRep& rep, const HermitianOp& effect, const std::string& label);

/// mu_rho over the whole space.
OnticDistribution distribution(const QuasiRep& rep, const HermitianOp& rho);
/// xi_E over the whole space.
std::vector<double> indicator(const QuasiRep& rep, const HermitianOp& effect);

/// |Tr(rho E) - sum_l mu_rho(l) xi_E(l)|.
double born_residual(const QuasiRep& rep, const HermitianOp& rho, const HermitianOp& effect);

struct DualFrameCheck {
    bool ok = false;
    /// max over a Hermitian operator basis of |sum_l Tr[A F(l)] G(l) - A|.
    double max_deviation = 0.0;
    /// |sum_l F(l) - 1| (entrywise max).
    double normalization_deviation = 0.0;
    /// max_l |Tr G(l) - 1|.
    double indicator_trace_deviation = 0.0;
};

DualFrameCheck check_dual_frame(const QuasiRep& rep, double tol = kTolerance);

/// Numerical rank of {F(l)}, singular values above `cutoff`. Injective iff rank = d^2.
int frame_rank(const QuasiRep& rep, double cutoff = kTolerance);

SupportSet support(const QuasiRep& rep, const HermitianOp& rho, double tol = kTolerance);
std::vector<std::string> support_labels(const QuasiRep& rep, const SupportSet& set);

/// q(l) = d mu_{1/d}(l).
OnticDistribution q_function(const QuasiRep& rep);

/// mu >= -tol and xi in [-tol, 1 + tol] for every element at every point.
bool is_nonnegative_basis(const QuasiRep& rep, std::span<const HermitianOp> elements,
                          double tol = kTolerance);
bool is_nonnegative_basis(const QuasiRep& rep, const QubitBasis& basis, double tol = kTolerance);
bool is_nonnegative_basis(const QuasiRep& rep, const QuditBasis& basis, double tol = kTolerance);

/**
 * Structural consequences of non-negativity, checked numerically:
 *  - supports within each basis are pairwise disjoint;
 *  - xi_{rho(j)} = delta_jk on supp(rho(k));
 *  - every mu value is 0 or q(l);
 *  - two basis elements share support iff they are not orthogonal.
 * Failures are collected in `failures`, never thrown.
 */
struct LemmaReport {
    bool preconditions_ok = true;
    bool supports_disjoint = true;
    bool deterministic_indicators = true;
    bool two_valued = true;
    bool support_overlap_matches_orthogonality = true;
    std::vector<std::string> failures;

    bool all_passed() const {
        return preconditions_ok && supports_disjoint && deterministic_indicators && two_valued &&
               support_overlap_matches_orthogonality;
    }
};

LemmaReport lemma_structure_report(const QuasiRep& rep,
                                   const std::vector<std::vector<HermitianOp>>& bases,
                                   double tol = kTolerance);
LemmaReport lemma_structure_report(const QuasiRep& rep, const std::vector<QubitBasis>& bases,
                                   double tol = kTolerance);

/// Hermitian operator basis of dimension d: d diagonal units, then the
/// symmetric and antisymmetric off-diagonal pairs.
std::vector<HermitianOp> hermitian_operator_basis(int dim);

/// Real coordinates of a Hermitian operator in a fixed d^2-dimensional frame.
Eigen::VectorXd real_vectorize(const HermitianOp& op);

}  // namespace qpr
