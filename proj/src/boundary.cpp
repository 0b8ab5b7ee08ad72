#include "fredholm/boundary.hpp"

#include <cmath>
#include <sstream>

#include "fredholm/ode.hpp"

namespace fredholm {

BoundaryOperator& BoundaryOperator::add_point(double point, int order, CMatrix matrix) {
    if (matrix.rows() != rows_) throw StructuralError("point-term matrix must have q rows");
    if (order < 0) throw StructuralError("point-term order must be non-negative");
    points_.push_back(PointTerm{point, order, std::move(matrix)});
    return *this;
}

BoundaryOperator& BoundaryOperator::set_integral(MatrixFunction phi) {
    if (phi.rows() != rows_) throw StructuralError("integral kernel must have q rows");
    integral_ = IntegralTerm{std::move(phi)};
    return *this;
}

BoundaryOperator BoundaryOperator::evaluation(double point, int dimension) {
    BoundaryOperator op(dimension);
    op.add_point(point, 0, CMatrix::Identity(dimension, dimension));
    return op;
}

void BoundaryOperator::check_shapes(const DerivativeStack& y) const {
    for (const auto& term : points_) {
        if (term.matrix.cols() != y.dimension()) {
            throw StructuralError("point-term matrix columns differ from the system size");
        }
        if (term.order >= y.max_order()) {
            std::ostringstream msg;
            msg << "point term of order " << term.order
                << " evaluates the top derivative (order " << y.max_order()
                << "), which is not continuous on the solution space";
            throw StructuralError(msg.str());
        }
        if (!y.grid().interval().contains(term.point)) {
            std::ostringstream msg;
            msg << "boundary point " << term.point << " lies outside the interval";
            throw StructuralError(msg.str());
        }
    }
    if (integral_ && integral_->phi.cols() != y.dimension()) {
        throw StructuralError("integral kernel columns differ from the system size");
    }
}

CVector BoundaryOperator::apply(const DerivativeStack& y) const {
    check_shapes(y);
    CVector out = CVector::Zero(rows_);
    for (const auto& term : points_) out.noalias() += term.matrix * y.evaluate(term.order, term.point);
    if (integral_) {
        const Grid& grid = y.grid();
        const int top = y.max_order();
        const std::size_t n = grid.size();
        CVector acc = CVector::Zero(rows_);
        for (std::size_t i = 0; i < n; ++i) {
            const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
            acc.noalias() += w * (integral_->phi(grid[i]) * y.at(top, i));
        }
        out += grid.step() * acc;
    }
    return out;
}

CMatrix BoundaryOperator::apply_to_matrix(const MatrixTrajectory& y) const {
    CMatrix out(rows_, y.cols());
    for (int j = 0; j < y.cols(); ++j) out.col(j) = apply(y.column(j));
    return out;
}

double BoundaryOperator::continuity_constant(const Interval& interval,
                                             const LebesgueExponent& p) const {
    const double len = interval.length();
    const double inv_p = p.is_infinite() ? 0.0 : 1.0 / p.value();
    const double inv_conj = 1.0 - inv_p;
    const double embedding = std::max(std::pow(len, -inv_p), std::pow(len, inv_conj));
    // Cubic interpolation of stored samples can overshoot node values slightly.
    constexpr double kInterpolationSlack = 1.25;
    double c = 0.0;
    for (const auto& term : points_) c += entry_sum_norm(term.matrix) * embedding * kInterpolationSlack;
    if (integral_) {
        const Grid grid(interval);
        std::vector<CVector> norms(grid.size(), CVector::Zero(1));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            norms[i](0) = entry_sum_norm(CMatrix(integral_->phi(grid[i])));
        }
        c += lp_norm(grid, norms, LebesgueExponent(p.conjugate()));
    }
    return c;
}

Diagnostic fractional_order_diagnostic(double order) {
    std::ostringstream msg;
    msg << "derivative order " << order
        << " is fractional; Caputo-type boundary terms are not supported, use integer orders";
    return Diagnostic{Severity::Error, "fractional-order", msg.str()};
}

Diagnostics validate(const BoundaryOperator& op, const CoefficientSet& coeffs,
                     const Interval& interval) {
    Diagnostics out;
    const int rm = coeffs.state_size();
    const int q = op.rows();
    if (q < rm) {
        out.push_back({Severity::Warning, "underdetermined",
                       "boundary conditions are underdetermined: q = " + std::to_string(q) +
                           " < rm = " + std::to_string(rm)});
    } else if (q > rm) {
        out.push_back({Severity::Warning, "overdetermined",
                       "boundary conditions are overdetermined: q = " + std::to_string(q) +
                           " > rm = " + std::to_string(rm)});
    }
    const int top = coeffs.top_order();
    for (std::size_t i = 0; i < op.point_terms().size(); ++i) {
        const auto& term = op.point_terms()[i];
        const std::string where = "point term " + std::to_string(i);
        if (term.order < 0 || term.order >= top) {
            out.push_back({Severity::Error, "order-out-of-range",
                           where + ": order " + std::to_string(term.order) +
                               " outside 0.." + std::to_string(top - 1)});
        }
        if (!interval.contains(term.point)) {
            std::ostringstream msg;
            msg << where << ": point " << term.point << " outside [" << interval.a() << ", "
                << interval.b() << "]";
            out.push_back({Severity::Error, "point-outside-interval", msg.str()});
        }
        if (term.matrix.cols() != coeffs.dimension) {
            out.push_back({Severity::Error, "shape-mismatch", where + ": matrix is not q x m"});
        }
    }
    if (op.integral_term() && op.integral_term()->phi.cols() != coeffs.dimension) {
        out.push_back({Severity::Error, "shape-mismatch", "integral kernel is not q x m"});
    }
    return out;
}

}  // namespace fredholm
