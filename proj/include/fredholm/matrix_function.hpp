#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "fredholm/grid.hpp"
#include "fredholm/types.hpp"

namespace fredholm {

/// A matrix-valued function of t that can report its derivatives.
///
/// Constant and polynomial representations differentiate exactly. Tabulated
/// ones return whatever orders were supplied; `tabulated_with_differences`
/// fills missing orders by fourth-order finite differences.
class MatrixFunction {
public:
    enum class Kind { Constant, Polynomial, Tabulated, Callable };
    using Callable = std::function<CMatrix(double t, int order)>;

    static constexpr int kUnlimitedOrder = std::numeric_limits<int>::max();

    static MatrixFunction constant(CMatrix value);
    static MatrixFunction zero(int rows, int cols) { return constant(CMatrix::Zero(rows, cols)); }
    /// sum_k coefficients[k] * (t - origin)^k
    static MatrixFunction polynomial(std::vector<CMatrix> coefficients, double origin = 0.0);
    static MatrixFunction tabulated(MatrixTrajectory samples);
    static MatrixFunction tabulated_with_differences(const Grid& grid, std::vector<CMatrix> values,
                                                     int max_order);
    static MatrixFunction callable(int rows, int cols, Callable fn,
                                   int max_order = kUnlimitedOrder);

    Kind kind() const { return kind_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int max_order() const { return max_order_; }

    /// Throws StructuralError when `order` exceeds the available derivatives.
    CMatrix operator()(double t, int order = 0) const;

    /// Constant value when kind() == Constant.
    const CMatrix& constant_value() const;

private:
    MatrixFunction(Kind kind, int rows, int cols, int max_order, Callable fn)
        : kind_(kind), rows_(rows), cols_(cols), max_order_(max_order), fn_(std::move(fn)) {}

    Kind kind_;
    int rows_;
    int cols_;
    int max_order_;
    Callable fn_;
    std::shared_ptr<const CMatrix> constant_;
};

}  // namespace fredholm
