#include "qpr/quasirep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace qpr {

OnticSpace::OnticSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw InvalidArgumentError("ontic labels must be distinct");
}

std::size_t OnticSpace::index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw UnknownPointError("unknown ontic point '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

bool OnticSpace::contains(const std::string& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

double OnticDistribution::total() const { return std::accumulate(values.begin(), values.end(), 0.0); }

QuasiRep::QuasiRep(OnticSpace space, std::vector<HermitianOp> f, std::vector<HermitianOp> g)
    : space_(std::move(space)), f_(std::move(f)), g_(std::move(g)), dim_(0) {
    if (f_.size() != space_.size() || g_.size() != space_.size())
        throw InvalidArgumentError("frame sizes do not match the ontic space");
    if (f_.empty()) throw InvalidArgumentError("ontic space is empty");
    dim_ = f_.front().dim();
    for (std::size_t i = 0; i < f_.size(); ++i)
        if (f_[i].dim() != dim_ || g_[i].dim() != dim_)
            throw DimensionError("frame operators differ in dimension");
}

namespace {

void check_point(const QuasiRep& rep, std::size_t point) {
    if (point >= rep.size())
        throw UnknownPointError("ontic point index " + std::to_string(point) + " out of range");
}

}  // namespace

double mu(const QuasiRep& rep, const HermitianOp& rho, std::size_t point) {
    check_point(rep, point);
    return trace_product(rho, rep.f(point));
}

double mu(const QuasiRep& rep, const HermitianOp& rho, const std::string& label) {
    return mu(rep, rho, rep.space().index_of(label));
}

double xi(const QuasiRep& rep, const HermitianOp& effect, std::size_t point) {
    check_point(rep, point);
    return trace_product(effect, rep.g(point));
}

double xi(const QuasiRep& rep, const HermitianOp& effect, const std::string& label) {
    return xi(rep, effect, rep.space().index_of(label));
}

OnticDistribution distribution(const QuasiRep& rep, const HermitianOp& rho) {
    OnticDistribution out{rep.space(), std::vector<double>(rep.size())};
    for (std::size_t i = 0; i < rep.size(); ++i) out.values[i] = trace_product(rho, rep.f(i));
    return out;
}

std::vector<double> indicator(const QuasiRep& rep, const HermitianOp& effect) {
    std::vector<double> out(rep.size());
    for (std::size_t i = 0; i < rep.size(); ++i) out[i] = trace_product(effect, rep.g(i));
    return out;
}

double born_residual(const QuasiRep& rep, const HermitianOp& rho, const HermitianOp& effect) {
    double ontic = 0.0;
    for (std::size_t i = 0; i < rep.size(); ++i)
        ontic += trace_product(rho, rep.f(i)) * trace_product(effect, rep.g(i));
    return std::abs(trace_product(rho, effect) - ontic);
}

std::vector<HermitianOp> hermitian_operator_basis(int dim) {
    std::vector<HermitianOp> out;
    out.reserve(static_cast<std::size_t>(dim * dim));
    for (int j = 0; j < dim; ++j) {
        CMatrix m = CMatrix::Zero(dim, dim);
        m(j, j) = 1.0;
        out.emplace_back(m);
    }
    for (int j = 0; j < dim; ++j) {
        for (int k = j + 1; k < dim; ++k) {
            CMatrix sym = CMatrix::Zero(dim, dim);
            sym(j, k) = sym(k, j) = 1.0;
            out.emplace_back(sym);
            CMatrix anti = CMatrix::Zero(dim, dim);
            anti(j, k) = Complex(0, -1);
            anti(k, j) = Complex(0, 1);
            out.emplace_back(anti);
        }
    }
    return out;
}

Eigen::VectorXd real_vectorize(const HermitianOp& op) {
    const int d = op.dim();
    Eigen::VectorXd v(d * d);
    int idx = 0;
    for (int j = 0; j < d; ++j) v[idx++] = op(j, j).real();
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            // Scaled so the map is an isometry for the Hilbert-Schmidt product.
            v[idx++] = std::sqrt(2.0) * op(j, k).real();
            v[idx++] = std::sqrt(2.0) * op(j, k).imag();
        }
    }
    return v;
}

DualFrameCheck check_dual_frame(const QuasiRep& rep, double tol) {
    DualFrameCheck out;
    const int d = rep.dim();
    for (const auto& a : hermitian_operator_basis(d)) {
        HermitianOp rebuilt = HermitianOp::zero(d);
        for (std::size_t i = 0; i < rep.size(); ++i) rebuilt += trace_product(a, rep.f(i)) * rep.g(i);
        out.max_deviation = std::max(out.max_deviation, max_abs_diff(rebuilt, a));
    }
    HermitianOp f_sum = HermitianOp::zero(d);
    for (const auto& f : rep.f_ops()) f_sum += f;
    out.normalization_deviation = max_abs_diff(f_sum, HermitianOp::identity(d));
    for (const auto& g : rep.g_ops())
        out.indicator_trace_deviation = std::max(out.indicator_trace_deviation, std::abs(g.trace() - 1.0));
    out.ok = out.max_deviation <= tol;
    return out;
}

int frame_rank(const QuasiRep& rep, double cutoff) {
    const int d = rep.dim();
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(rep.size()), d * d);
    for (std::size_t i = 0; i < rep.size(); ++i)
        rows.row(static_cast<Eigen::Index>(i)) = real_vectorize(rep.f(i)).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
    const auto& s = svd.singularValues();
    return static_cast<int>((s.array() > cutoff).count());
}

SupportSet support(const QuasiRep& rep, const HermitianOp& rho, double tol) {
    SupportSet out;
    for (std::size_t i = 0; i < rep.size(); ++i)
        if (std::abs(mu(rep, rho, i)) > tol) out.push_back(i);
    return out;
}

std::vector<std::string> support_labels(const QuasiRep& rep, const SupportSet& set) {
    std::vector<std::string> out;
    out.reserve(set.size());
    for (auto i : set) out.push_back(rep.space().label(i));
    return out;
}

OnticDistribution q_function(const QuasiRep& rep) {
    const int d = rep.dim();
    const HermitianOp mixed = (1.0 / d) * HermitianOp::identity(d);
    OnticDistribution out = distribution(rep, mixed);
    for (auto& v : out.values) v *= d;
    return out;
}

bool is_nonnegative_basis(const QuasiRep& rep, std::span<const HermitianOp> elements, double tol) {
    for (const auto& rho : elements) {
        if (rho.dim() != rep.dim()) throw DimensionError("basis dimension does not match representation");
        for (std::size_t i = 0; i < rep.size(); ++i) {
            if (mu(rep, rho, i) < -tol) return false;
            const double x = xi(rep, rho, i);
            if (x < -tol || x > 1.0 + tol) return false;
        }
    }
    return true;
}

bool is_nonnegative_basis(const QuasiRep& rep, const QubitBasis& basis, double tol) {
    const auto elements = basis.elements();
    return is_nonnegative_basis(rep, std::span<const HermitianOp>(elements), tol);
}

bool is_nonnegative_basis(const QuasiRep& rep, const QuditBasis& basis, double tol) {
    return is_nonnegative_basis(rep, std::span<const HermitianOp>(basis.elements()), tol);
}

namespace {

bool intersects(const SupportSet& a, const SupportSet& b) {
    std::vector<std::size_t> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    return !common.empty();
}

}  // namespace

LemmaReport lemma_structure_report(const QuasiRep& rep,
                                   const std::vector<std::vector<HermitianOp>>& bases, double tol) {
    LemmaReport report;
    for (std::size_t b = 0; b < bases.size(); ++b) {
        if (!is_nonnegative_basis(rep, std::span<const HermitianOp>(bases[b]), tol)) {
            report.preconditions_ok = false;
            report.failures.push_back("basis " + std::to_string(b) + " is not non-negative");
        }
    }
    if (!report.preconditions_ok) return report;

    const auto q = q_function(rep);
    std::vector<std::vector<SupportSet>> supports(bases.size());
    for (std::size_t b = 0; b < bases.size(); ++b)
        for (const auto& rho : bases[b]) supports[b].push_back(support(rep, rho, tol));

    for (std::size_t b = 0; b < bases.size(); ++b) {
        const auto& basis = bases[b];
        for (std::size_t j = 0; j < basis.size(); ++j) {
            for (std::size_t k = j + 1; k < basis.size(); ++k) {
                if (intersects(supports[b][j], supports[b][k])) {
                    report.supports_disjoint = false;
                    report.failures.push_back("basis " + std::to_string(b) + ": supports of elements " +
                                              std::to_string(j) + " and " + std::to_string(k) +
                                              " intersect");
                }
            }
            for (std::size_t k = 0; k < basis.size(); ++k) {
                const double expected = j == k ? 1.0 : 0.0;
                for (auto point : supports[b][k]) {
                    if (std::abs(xi(rep, basis[j], point) - expected) > tol) {
                        report.deterministic_indicators = false;
                        report.failures.push_back("basis " + std::to_string(b) + ": xi of element " +
                                                  std::to_string(j) + " not deterministic at " +
                                                  rep.space().label(point));
                    }
                }
            }
            for (std::size_t i = 0; i < rep.size(); ++i) {
                const double m = mu(rep, basis[j], i);
                if (std::abs(m) > tol && std::abs(m - q.values[i]) > tol) {
                    report.two_valued = false;
                    report.failures.push_back("basis " + std::to_string(b) + ": mu of element " +
                                              std::to_string(j) + " at " + rep.space().label(i) +
                                              " is neither 0 nor q");
                }
            }
        }
    }

    for (std::size_t b1 = 0; b1 < bases.size(); ++b1) {
        for (std::size_t b2 = b1; b2 < bases.size(); ++b2) {
            for (std::size_t j = 0; j < bases[b1].size(); ++j) {
                for (std::size_t k = 0; k < bases[b2].size(); ++k) {
                    const bool orthogonal = std::abs(overlap(bases[b1][j], bases[b2][k])) <= tol;
                    const bool shared = intersects(supports[b1][j], supports[b2][k]);
                    if (orthogonal == shared) {
                        report.support_overlap_matches_orthogonality = false;
                        report.failures.push_back("elements (" + std::to_string(b1) + "," +
                                                  std::to_string(j) + ") and (" + std::to_string(b2) +
                                                  "," + std::to_string(k) +
                                                  (orthogonal ? ") are orthogonal but share support"
                                                              : ") overlap but have disjoint supports"));
                    }
                }
            }
        }
    }
    return report;
}

LemmaReport lemma_structure_report(const QuasiRep& rep, const std::vector<QubitBasis>& bases,
                                   double tol) {
    std::vector<std::vector<HermitianOp>> elements;
    elements.reserve(bases.size());
    for (const auto& b : bases) elements.push_back(b.elements());
    return lemma_structure_report(rep, elements, tol);
}

}  // namespace qpr
