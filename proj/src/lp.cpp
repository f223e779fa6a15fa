#include "qpr/lp.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "qpr/operator_core.hpp"

namespace qpr::lp {

namespace {

// Sign tests: exact for Rational, thresholded for double.
template <class Scalar>
struct Arith;

template <>
struct Arith<double> {
    double eps;
    bool neg(double v) const { return v < -eps; }
    bool pos(double v) const { return v > eps; }
    bool zero(double v) const { return std::abs(v) <= eps; }
};

template <>
struct Arith<Rational> {
    bool neg(const Rational& v) const { return v < 0; }
    bool pos(const Rational& v) const { return v > 0; }
    bool zero(const Rational& v) const { return v == 0; }
};

template <class Scalar>
Arith<Scalar> make_arith(const Options& options) {
    if constexpr (std::is_same_v<Scalar, double>) {
        return Arith<double>{options.pivot_tol};
    } else {
        (void)options;
        return Arith<Rational>{};
    }
}

/**
 * Tableau over columns [x_0..x_{n-1}, a_0..a_{m-1}] with one artificial per
 * row. `cost` holds the reduced costs of the current phase and `value` the
 * objective (minimization form).
 */
template <class Scalar>
class Tableau {
public:
    Tableau(const DenseMatrix<Scalar>& a, const std::vector<Scalar>& b, const Options& options)
        : m_(a.rows), n_(a.cols), t_(a.rows, a.cols + a.rows), rhs_(b), row_sign_(a.rows, 1),
          basis_(a.rows), cost_(a.cols + a.rows, Scalar(0)), arith_(make_arith<Scalar>(options)),
          options_(options) {
        if (b.size() != m_) throw InvalidArgumentError("right-hand side length mismatch");
        for (std::size_t i = 0; i < m_; ++i) {
            const bool flip = rhs_[i] < 0;
            row_sign_[i] = flip ? -1 : 1;
            for (std::size_t j = 0; j < n_; ++j) t_(i, j) = flip ? Scalar(-a(i, j)) : a(i, j);
            if (flip) rhs_[i] = -rhs_[i];
            t_(i, n_ + i) = Scalar(1);
            basis_[i] = n_ + i;
        }
    }

    /// Minimize the sum of artificials. Returns the optimum.
    Scalar phase_one() {
        for (std::size_t j = 0; j < n_ + m_; ++j) cost_[j] = Scalar(j < n_ ? 0 : 1);
        value_ = Scalar(0);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) cost_[j] -= t_(i, j);
            cost_[n_ + i] = Scalar(0);
            value_ += rhs_[i];
        }
        run(true);
        return value_;
    }

    /// y_i = 1 - reduced cost of artificial i, mapped back through row flips.
    std::vector<Scalar> phase_one_duals() const {
        std::vector<Scalar> y(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            y[i] = Scalar(1) - cost_[n_ + i];
            if (row_sign_[i] < 0) y[i] = -y[i];
        }
        return y;
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (!arith_.zero(t_(i, j))) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    /// Minimize -c^T x over the original columns; false if unbounded.
    bool phase_two(const std::vector<Scalar>& c) {
        for (std::size_t j = 0; j < n_ + m_; ++j) cost_[j] = j < n_ ? Scalar(-c[j]) : Scalar(0);
        value_ = Scalar(0);
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t bj = basis_[i];
            const Scalar cb = bj < n_ ? Scalar(-c[bj]) : Scalar(0);
            if (arith_.zero(cb)) continue;
            for (std::size_t j = 0; j < n_ + m_; ++j) cost_[j] -= cb * t_(i, j);
            value_ += cb * rhs_[i];
        }
        return run(false);
    }

    std::vector<Scalar> primal() const {
        std::vector<Scalar> x(n_, Scalar(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) x[basis_[i]] = rhs_[i];
        return x;
    }

    Scalar value() const { return value_; }
    std::size_t pivots() const { return pivots_; }

private:
    // Bland's rule: smallest eligible entering index, ties in the ratio test
    // broken by the smallest basic index. Returns false if unbounded.
    bool run(bool allow_artificials) {
        const std::size_t limit = allow_artificials ? n_ + m_ : n_;
        for (;;) {
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < limit; ++j) {
                if (arith_.neg(cost_[j])) {
                    enter = j;
                    break;
                }
            }
            if (!enter) return true;
            std::optional<std::size_t> leave;
            Scalar best_ratio{};
            for (std::size_t i = 0; i < m_; ++i) {
                if (!arith_.pos(t_(i, *enter))) continue;
                Scalar ratio = rhs_[i] / t_(i, *enter);
                if (!leave || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[*leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (!leave) return false;
            pivot(*leave, *enter);
            if (pivots_ > options_.max_pivots)
                throw Error("simplex exceeded its pivot limit; retry in exact mode");
        }
    }

    void pivot(std::size_t r, std::size_t e) {
        const std::size_t width = n_ + m_;
        const Scalar p = t_(r, e);
        for (std::size_t j = 0; j < width; ++j) t_(r, j) /= p;
        rhs_[r] /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const Scalar f = t_(i, e);
            if (f == Scalar(0)) continue;
            for (std::size_t j = 0; j < width; ++j) t_(i, j) -= f * t_(r, j);
            rhs_[i] -= f * rhs_[r];
            if constexpr (std::is_same_v<Scalar, double>) {
                t_(i, e) = 0.0;
                if (rhs_[i] < 0 && rhs_[i] > -options_.pivot_tol) rhs_[i] = 0.0;
            }
        }
        const Scalar f = cost_[e];
        if (!(f == Scalar(0))) {
            for (std::size_t j = 0; j < width; ++j) cost_[j] -= f * t_(r, j);
            value_ += f * rhs_[r];
        }
        basis_[r] = e;
        ++pivots_;
    }

    std::size_t m_;
    std::size_t n_;
    DenseMatrix<Scalar> t_;
    std::vector<Scalar> rhs_;
    std::vector<int> row_sign_;
    std::vector<std::size_t> basis_;
    std::vector<Scalar> cost_;
    Scalar value_{};
    std::size_t pivots_ = 0;
    Arith<Scalar> arith_;
    Options options_;
};

template <class Scalar>
bool phase_one_infeasible(const Scalar& value, const Options& options) {
    if constexpr (std::is_same_v<Scalar, double>) {
        return value > options.feasibility_tol;
    } else {
        (void)options;
        return value > 0;
    }
}

}  // namespace

template <class Scalar>
Result<Scalar> find_feasible(const DenseMatrix<Scalar>& a, const std::vector<Scalar>& b,
                             const Options& options) {
    Tableau<Scalar> tab(a, b, options);
    Result<Scalar> result;
    result.phase_one_value = tab.phase_one();
    result.pivots = tab.pivots();
    if (phase_one_infeasible(result.phase_one_value, options)) {
        result.status = Status::Infeasible;
        result.farkas = tab.phase_one_duals();
        return result;
    }
    result.status = Status::Feasible;
    result.x = tab.primal();
    return result;
}

template <class Scalar>
Result<Scalar> maximize(const DenseMatrix<Scalar>& a, const std::vector<Scalar>& b,
                        const std::vector<Scalar>& c, const Options& options) {
    if (c.size() != a.cols) throw InvalidArgumentError("objective length mismatch");
    Tableau<Scalar> tab(a, b, options);
    Result<Scalar> result;
    result.phase_one_value = tab.phase_one();
    if (phase_one_infeasible(result.phase_one_value, options)) {
        result.status = Status::Infeasible;
        result.farkas = tab.phase_one_duals();
        result.pivots = tab.pivots();
        return result;
    }
    tab.drive_out_artificials();
    const bool bounded = tab.phase_two(c);
    result.pivots = tab.pivots();
    result.status = bounded ? Status::Feasible : Status::Unbounded;
    result.x = tab.primal();
    result.objective = Scalar(0);
    for (std::size_t j = 0; j < c.size(); ++j) result.objective += c[j] * result.x[j];
    return result;
}

template <class Scalar>
Scalar max_residual(const DenseMatrix<Scalar>& a, const std::vector<Scalar>& b,
                    const std::vector<Scalar>& x) {
    Scalar worst(0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        Scalar s(0);
        for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
        s -= b[i];
        if (s < 0) s = -s;
        if (s > worst) worst = s;
    }
    return worst;
}

template <class Scalar>
bool verify_farkas(const DenseMatrix<Scalar>& a, const std::vector<Scalar>& b,
                   const std::vector<Scalar>& y, double tol) {
    if (y.size() != a.rows) return false;
    const Scalar bound(tol);
    for (std::size_t j = 0; j < a.cols; ++j) {
        Scalar s(0);
        for (std::size_t i = 0; i < a.rows; ++i) s += y[i] * a(i, j);
        if (s > bound) return false;
    }
    Scalar yb(0);
    for (std::size_t i = 0; i < a.rows; ++i) yb += y[i] * b[i];
    return yb > bound;
}

template Result<double> find_feasible(const DenseMatrix<double>&, const std::vector<double>&,
                                      const Options&);
template Result<Rational> find_feasible(const DenseMatrix<Rational>&, const std::vector<Rational>&,
                                        const Options&);
template Result<double> maximize(const DenseMatrix<double>&, const std::vector<double>&,
                                 const std::vector<double>&, const Options&);
template Result<Rational> maximize(const DenseMatrix<Rational>&, const std::vector<Rational>&,
                                   const std::vector<Rational>&, const Options&);
template double max_residual(const DenseMatrix<double>&, const std::vector<double>&,
                             const std::vector<double>&);
template Rational max_residual(const DenseMatrix<Rational>&, const std::vector<Rational>&,
                               const std::vector<Rational>&);
template bool verify_farkas(const DenseMatrix<double>&, const std::vector<double>&,
                            const std::vector<double>&, double);
template bool verify_farkas(const DenseMatrix<Rational>&, const std::vector<Rational>&,
                            const std::vector<Rational>&, double);

}  // namespace qpr::lp
