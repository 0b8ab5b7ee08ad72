#pragma once

#include <optional>
#include <vector>

#include "fredholm/grid.hpp"
#include "fredholm/matrix_function.hpp"

namespace fredholm {

struct CoefficientSet;

/// matrix * y^(order)(point)
struct PointTerm {
    double point = 0.0;
    int order = 0;
    CMatrix matrix;
};

/// integral over [a, b] of phi(t) * y^(n+r)(t)
struct IntegralTerm {
    MatrixFunction phi;
};

/// A boundary operator y -> C^q built from point-evaluation terms and at most
/// one integral term against the top derivative. Covers the canonical form
/// (all points at a) as well as multipoint conditions.
class BoundaryOperator {
public:
    explicit BoundaryOperator(int rows) : rows_(rows) {
        if (rows < 1) throw StructuralError("boundary operator needs at least one condition");
    }

    int rows() const { return rows_; }
    const std::vector<PointTerm>& point_terms() const { return points_; }
    const std::optional<IntegralTerm>& integral_term() const { return integral_; }

    BoundaryOperator& add_point(double point, int order, CMatrix matrix);
    BoundaryOperator& set_integral(MatrixFunction phi);

    /// y(point) evaluated by every row: rows x m identity-like selector.
    static BoundaryOperator evaluation(double point, int dimension);

    CVector apply(const DerivativeStack& y) const;

    /// Column j of the result is apply() on column j of `y`.
    CMatrix apply_to_matrix(const MatrixTrajectory& y) const;

    /// Upper bound C with |B y| <= C * ||y||_{N,p} for y in W_p^N on the
    /// given interval, using the embedding
    /// |g(t)| <= (b-a)^{-1/p} ||g||_p + (b-a)^{1/p'} ||g'||_p.
    double continuity_constant(const Interval& interval, const LebesgueExponent& p) const;

private:
    void check_shapes(const DerivativeStack& y) const;

    int rows_;
    std::vector<PointTerm> points_;
    std::optional<IntegralTerm> integral_;
};

/// Structural checks against a problem: condition count versus r*m, orders
/// below n+r, points inside the interval, matrix shapes.
Diagnostics validate(const BoundaryOperator& op, const CoefficientSet& coeffs,
                     const Interval& interval);

/// Diagnostic for a non-integer derivative order in a boundary term.
Diagnostic fractional_order_diagnostic(double order);

}  // namespace fredholm
