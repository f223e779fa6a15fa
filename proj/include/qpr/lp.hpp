#pragma once

#include <cstddef>
#include <vector>

#include "qpr/exact.hpp"

/**
 * Dense tableau simplex for small standard-form programs
 *
 *     A x = b,  x >= 0   (optionally maximizing c^T x),
 *
 * instantiated for `double` (tolerance-based) and `Rational` (exact). Both
 * phases use Bland's smallest-index rule, so degenerate vertices cannot cycle.
 * Infeasible programs return a Farkas vector y with y^T A <= 0 and y^T b > 0,
 * read off the optimal phase-one duals.
 */
namespace qpr::lp {

/// Row-major dense matrix.
template <class Scalar>
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Scalar> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, Scalar(0)) {}
    Scalar& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

enum class Status { Feasible, Infeasible, Unbounded };

template <class Scalar>
struct Result {
    Status status = Status::Infeasible;
    std::vector<Scalar> x;       ///< primal point (feasible / optimal)
    std::vector<Scalar> farkas;  ///< y with y^T A <= 0, y^T b > 0 (infeasible)
    Scalar objective = Scalar(0);
    Scalar phase_one_value = Scalar(0);
    std::size_t pivots = 0;
};

struct Options {
    /// Float backend: phase-one optimum above this is declared infeasible.
    double feasibility_tol = 1e-9;
    /// Float backend: smallest magnitude accepted as a pivot / reduced cost.
    double pivot_tol = 1e-11;
    std::size_t max_pivots = 200000;
};

/// Decide {x >= 0 : A x = b}.
template <class Scalar>
Result<Scalar> find_feasible(const DenseMatrix<Scalar>& a, const std::vector<Scalar>& b,
                             const Options& options = {});

/// max c^T x over {x >= 0 : A x = b}.
template <class Scalar>
Result<Scalar> maximize(const DenseMatrix<Scalar>& a, const std::vector<Scalar>& b,
                        const std::vector<Scalar>& c, const Options& options = {});

/// max_i |(A x - b)_i|.
template <class Scalar>
Scalar max_residual(const DenseMatrix<Scalar>& a, const std::vector<Scalar>& b,
                    const std::vector<Scalar>& x);

/// Checks y^T A <= tol componentwise and y^T b > tol (tol = 0 for Rational).
template <class Scalar>
bool verify_farkas(const DenseMatrix<Scalar>& a, const std::vector<Scalar>& b,
                   const std::vector<Scalar>& y, double tol = 0.0);

}  // namespace qpr::lp
