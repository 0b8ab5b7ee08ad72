#pragma once

#include <optional>
#include <vector>

#include "fredholm/grid.hpp"
#include "fredholm/matrix_function.hpp"

namespace fredholm {

/// Coefficients of L y = y^(r) + sum_{k<r} A_k(t) y^(k).
///
/// `coefficients[k]` multiplies y^(k), so the leading-order coefficient
/// A_{r-1} is the last entry. Every A_k is m x m and must supply derivatives
/// up to order n (the smoothness index).
struct CoefficientSet {
    int order = 1;       // r
    int dimension = 1;   // m
    int smoothness = 0;  // n
    std::vector<MatrixFunction> coefficients;

    /// A_k == 0 for all k.
    static CoefficientSet zero(int order, int dimension, int smoothness);

    /// Throws StructuralError on inconsistent shapes or missing derivative orders.
    void validate() const;

    int state_size() const { return order * dimension; }
    int top_order() const { return smoothness + order; }
};

/// {Y_1, ..., Y_r} with Y_i^(j-1)(a) = delta_ij I_m, stored with orders 0..n+r.
struct FundamentalSet {
    std::vector<MatrixTrajectory> members;
    // max over nodes and members of |L Y_i| with Y_i^(r) obtained by
    // differentiating the integrated Y_i^(r-1) samples.
    double residual = 0.0;
};

FundamentalSet fundamental_set(const CoefficientSet& coeffs, const Grid& grid);

/// sum_i Y_i xi_i with xi split into r blocks of m entries.
DerivativeStack combine(const FundamentalSet& set, const CVector& xi);

/// Solution of L y = f with y^(j)(a) = initial_state[j*m .. j*m+m) (zero by
/// default). `forcing` is an m x 1 matrix function with derivatives to order n.
DerivativeStack particular_solution(const CoefficientSet& coeffs, const MatrixFunction& forcing,
                                    const Grid& grid,
                                    const std::optional<CVector>& initial_state = std::nullopt);

/// (L y - f) and its derivatives 0..n at every node, computed from the stored
/// orders of y by the Leibniz rule. Needs y.max_order() >= n + r.
DerivativeStack apply_differential_operator(const CoefficientSet& coeffs,
                                            const DerivativeStack& y,
                                            const MatrixFunction* forcing = nullptr);

/// max over nodes of |L y - f| where y^(r) is recovered from the samples of
/// y^(r-1) by fourth-order differences, so the check is independent of the
/// stored top orders.
double ode_residual(const CoefficientSet& coeffs, const DerivativeStack& y,
                    const MatrixFunction* forcing = nullptr);

}  // namespace fredholm
