#include "fredholm/matrix_function.hpp"

#include <sstream>

namespace fredholm {

MatrixFunction MatrixFunction::constant(CMatrix value) {
    const auto rows = static_cast<int>(value.rows());
    const auto cols = static_cast<int>(value.cols());
    auto shared = std::make_shared<const CMatrix>(std::move(value));
    MatrixFunction f(Kind::Constant, rows, cols, kUnlimitedOrder,
                     [shared, rows, cols](double, int order) -> CMatrix {
                         if (order == 0) return *shared;
                         return CMatrix::Zero(rows, cols);
                     });
    f.constant_ = shared;
    return f;
}

MatrixFunction MatrixFunction::polynomial(std::vector<CMatrix> coefficients, double origin) {
    if (coefficients.empty()) throw StructuralError("polynomial needs at least one coefficient");
    const auto rows = static_cast<int>(coefficients.front().rows());
    const auto cols = static_cast<int>(coefficients.front().cols());
    for (const auto& c : coefficients) {
        if (c.rows() != rows || c.cols() != cols) {
            throw StructuralError("polynomial coefficients differ in shape");
        }
    }
    auto shared = std::make_shared<const std::vector<CMatrix>>(std::move(coefficients));
    return MatrixFunction(
        Kind::Polynomial, rows, cols, kUnlimitedOrder,
        [shared, origin, rows, cols](double t, int order) -> CMatrix {
            const auto& c = *shared;
            const int degree = static_cast<int>(c.size()) - 1;
            CMatrix acc = CMatrix::Zero(rows, cols);
            if (order > degree) return acc;
            const double x = t - origin;
            // Horner on the order-th derivative: k!/(k-order)! c_k x^(k-order).
            for (int k = degree; k >= order; --k) {
                double falling = 1.0;
                for (int s = 0; s < order; ++s) falling *= static_cast<double>(k - s);
                acc = acc * x + c[k] * falling;
            }
            return acc;
        });
}

MatrixFunction MatrixFunction::tabulated(MatrixTrajectory samples) {
    const int rows = samples.rows();
    const int cols = samples.cols();
    const int max_order = samples.max_order();
    auto shared = std::make_shared<const MatrixTrajectory>(std::move(samples));
    return MatrixFunction(Kind::Tabulated, rows, cols, max_order,
                          [shared](double t, int order) { return shared->evaluate(order, t); });
}

MatrixFunction MatrixFunction::tabulated_with_differences(const Grid& grid,
                                                          std::vector<CMatrix> values,
                                                          int max_order) {
    if (values.size() != grid.size()) throw StructuralError("sample count does not match grid");
    if (values.empty()) throw StructuralError("empty table");
    MatrixTrajectory traj(grid, static_cast<int>(values.front().rows()),
                          static_cast<int>(values.front().cols()), max_order);
    std::vector<CMatrix> current = std::move(values);
    for (int k = 0; k <= max_order; ++k) {
        for (std::size_t i = 0; i < grid.size(); ++i) traj.at(k, i) = current[i];
        if (k < max_order) current = detail::differentiate<CMatrix>(grid, current);
    }
    return tabulated(std::move(traj));
}

MatrixFunction MatrixFunction::callable(int rows, int cols, Callable fn, int max_order) {
    return MatrixFunction(Kind::Callable, rows, cols, max_order, std::move(fn));
}

CMatrix MatrixFunction::operator()(double t, int order) const {
    if (order < 0 || order > max_order_) {
        std::ostringstream msg;
        msg << "derivative of order " << order << " requested but only orders 0.." << max_order_
            << " are available";
        throw StructuralError(msg.str());
    }
    return fn_(t, order);
}

const CMatrix& MatrixFunction::constant_value() const {
    if (!constant_) throw StructuralError("matrix function is not constant");
    return *constant_;
}

}  // namespace fredholm
