#include "fredholm/ode.hpp"

#include <cmath>
#include <sstream>

namespace fredholm {

namespace {

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
    return b;
}

// Right-hand side of the companion system S' = C(t) S + F(t), with the state
// S stacked as (y, y', ..., y^(r-1)).
CMatrix companion_rhs(const CoefficientSet& coeffs, const MatrixFunction* forcing, double t,
                      const CMatrix& state) {
    const int r = coeffs.order;
    const int m = coeffs.dimension;
    CMatrix out(state.rows(), state.cols());
    for (int j = 0; j + 1 < r; ++j) out.middleRows(j * m, m) = state.middleRows((j + 1) * m, m);
    CMatrix top = CMatrix::Zero(m, state.cols());
    for (int k = 0; k < r; ++k) top.noalias() -= coeffs.coefficients[k](t) * state.middleRows(k * m, m);
    if (forcing != nullptr) top.colwise() += (*forcing)(t).col(0);
    out.middleRows((r - 1) * m, m) = top;
    return out;
}

// Classical RK4 with the grid step; returns the state at every node.
std::vector<CMatrix> integrate(const CoefficientSet& coeffs, const MatrixFunction* forcing,
                               const Grid& grid, CMatrix state) {
    std::vector<CMatrix> states;
    states.reserve(grid.size());
    states.push_back(state);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double t = grid[i];
        const double h = grid[i + 1] - grid[i];
        const CMatrix k1 = companion_rhs(coeffs, forcing, t, state);
        const CMatrix k2 = companion_rhs(coeffs, forcing, t + 0.5 * h, state + (0.5 * h) * k1);
        const CMatrix k3 = companion_rhs(coeffs, forcing, t + 0.5 * h, state + (0.5 * h) * k2);
        const CMatrix k4 = companion_rhs(coeffs, forcing, grid[i + 1], state + h * k3);
        state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!state.allFinite()) {
            std::ostringstream msg;
            msg << "integration produced non-finite values at t = " << grid[i + 1];
            throw NumericalError(msg.str());
        }
        states.push_back(state);
    }
    return states;
}

// Coefficient derivative tables: table[k][q][node] = A_k^(q)(t_node).
std::vector<std::vector<std::vector<CMatrix>>> coefficient_table(const CoefficientSet& coeffs,
                                                                 const Grid& grid) {
    const int n = coeffs.smoothness;
    std::vector<std::vector<std::vector<CMatrix>>> table(coeffs.order);
    for (int k = 0; k < coeffs.order; ++k) {
        table[k].resize(n + 1);
        for (int q = 0; q <= n; ++q) {
            table[k][q].reserve(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                table[k][q].push_back(coeffs.coefficients[k](grid[i], q));
            }
        }
    }
    return table;
}

// Fills orders r..n+r of `derivs` (indexed [order][node], each rows x cols)
// from orders 0..r-1 using the differentiated equation
//   y^(r+s) = f^(s) - sum_k sum_{q<=s} C(s,q) A_k^(q) y^(k+s-q).
void fill_higher_orders(const CoefficientSet& coeffs, const Grid& grid,
                        const MatrixFunction* forcing, std::vector<std::vector<CMatrix>>& derivs) {
    const int r = coeffs.order;
    const int n = coeffs.smoothness;
    const auto table = coefficient_table(coeffs, grid);
    for (int s = 0; s <= n; ++s) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CMatrix value = CMatrix::Zero(derivs[0][i].rows(), derivs[0][i].cols());
            if (forcing != nullptr) value.colwise() += (*forcing)(grid[i], s).col(0);
            for (int k = 0; k < r; ++k) {
                for (int q = 0; q <= s; ++q) {
                    value.noalias() -= binomial(s, q) * table[k][q][i] * derivs[k + s - q][i];
                }
            }
            derivs[r + s][i] = std::move(value);
        }
    }
}

}  // namespace

CoefficientSet CoefficientSet::zero(int order, int dimension, int smoothness) {
    CoefficientSet set;
    set.order = order;
    set.dimension = dimension;
    set.smoothness = smoothness;
    for (int k = 0; k < order; ++k) set.coefficients.push_back(MatrixFunction::zero(dimension, dimension));
    return set;
}

void CoefficientSet::validate() const {
    if (order < 1) throw StructuralError("equation order r must be positive");
    if (dimension < 1) throw StructuralError("system size m must be positive");
    if (smoothness < 0) throw StructuralError("smoothness index n must be non-negative");
    if (static_cast<int>(coefficients.size()) != order) {
        throw StructuralError("expected one coefficient matrix per derivative order below r");
    }
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        const auto& c = coefficients[k];
        if (c.rows() != dimension || c.cols() != dimension) {
            throw StructuralError("coefficient A_" + std::to_string(k) + " is not m x m");
        }
        if (c.max_order() < smoothness) {
            throw StructuralError("coefficient A_" + std::to_string(k) +
                                  " lacks derivatives up to order n = " + std::to_string(smoothness));
        }
    }
}

FundamentalSet fundamental_set(const CoefficientSet& coeffs, const Grid& grid) {
    coeffs.validate();
    const int r = coeffs.order;
    const int m = coeffs.dimension;
    const int rm = coeffs.state_size();
    const auto states = integrate(coeffs, nullptr, grid, CMatrix::Identity(rm, rm));

    FundamentalSet set;
    for (int member = 0; member < r; ++member) {
        std::vector<std::vector<CMatrix>> derivs(coeffs.top_order() + 1,
                                                 std::vector<CMatrix>(grid.size()));
        for (int j = 0; j < r; ++j) {
            for (std::size_t i = 0; i < grid.size(); ++i) {
                derivs[j][i] = states[i].block(j * m, member * m, m, m);
            }
        }
        fill_higher_orders(coeffs, grid, nullptr, derivs);

        MatrixTrajectory traj(grid, m, m, coeffs.top_order());
        for (int k = 0; k <= coeffs.top_order(); ++k) {
            for (std::size_t i = 0; i < grid.size(); ++i) traj.at(k, i) = std::move(derivs[k][i]);
        }
        set.members.push_back(std::move(traj));
    }
    if (grid.size() >= 5) {
        for (const auto& y : set.members) {
            for (int c = 0; c < m; ++c) {
                set.residual = std::max(set.residual, ode_residual(coeffs, y.column(c)));
            }
        }
    }
    return set;
}

DerivativeStack combine(const FundamentalSet& set, const CVector& xi) {
    if (set.members.empty()) throw StructuralError("empty fundamental set");
    const auto& first = set.members.front();
    const int m = first.cols();
    if (xi.size() != static_cast<Eigen::Index>(set.members.size()) * m) {
        throw StructuralError("coefficient vector must have r*m entries");
    }
    DerivativeStack out(first.grid(), first.rows(), first.max_order());
    for (std::size_t member = 0; member < set.members.size(); ++member) {
        const auto& y = set.members[member];
        const CVector block = xi.segment(static_cast<Eigen::Index>(member) * m, m);
        for (int k = 0; k <= y.max_order(); ++k) {
            for (std::size_t i = 0; i < y.grid().size(); ++i) out.at(k, i) += y.at(k, i) * block;
        }
    }
    return out;
}

DerivativeStack particular_solution(const CoefficientSet& coeffs, const MatrixFunction& forcing,
                                    const Grid& grid, const std::optional<CVector>& initial_state) {
    coeffs.validate();
    const int m = coeffs.dimension;
    const int rm = coeffs.state_size();
    if (forcing.rows() != m || forcing.cols() != 1) throw StructuralError("forcing must be m x 1");
    if (forcing.max_order() < coeffs.smoothness) {
        throw StructuralError("forcing lacks derivatives up to order n");
    }
    CMatrix start = CMatrix::Zero(rm, 1);
    if (initial_state) {
        if (initial_state->size() != rm) throw StructuralError("initial state must have r*m entries");
        start.col(0) = *initial_state;
    }
    const auto states = integrate(coeffs, &forcing, grid, start);

    std::vector<std::vector<CMatrix>> derivs(coeffs.top_order() + 1,
                                             std::vector<CMatrix>(grid.size()));
    for (int j = 0; j < coeffs.order; ++j) {
        for (std::size_t i = 0; i < grid.size(); ++i) derivs[j][i] = states[i].middleRows(j * m, m);
    }
    fill_higher_orders(coeffs, grid, &forcing, derivs);

    DerivativeStack y(grid, m, coeffs.top_order());
    for (int k = 0; k <= coeffs.top_order(); ++k) {
        for (std::size_t i = 0; i < grid.size(); ++i) y.at(k, i) = derivs[k][i].col(0);
    }
    return y;
}

DerivativeStack apply_differential_operator(const CoefficientSet& coeffs, const DerivativeStack& y,
                                            const MatrixFunction* forcing) {
    coeffs.validate();
    if (y.dimension() != coeffs.dimension) throw StructuralError("stack dimension differs from m");
    if (y.max_order() < coeffs.top_order()) throw StructuralError("stack lacks orders up to n + r");
    const Grid& grid = y.grid();
    const int r = coeffs.order;
    const int n = coeffs.smoothness;
    const auto table = coefficient_table(coeffs, grid);
    DerivativeStack out(grid, coeffs.dimension, n);
    for (int s = 0; s <= n; ++s) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CVector value = y.at(r + s, i);
            for (int k = 0; k < r; ++k) {
                for (int q = 0; q <= s; ++q) {
                    value.noalias() += binomial(s, q) * table[k][q][i] * y.at(k + s - q, i);
                }
            }
            if (forcing != nullptr) value -= (*forcing)(grid[i], s).col(0);
            out.at(s, i) = std::move(value);
        }
    }
    return out;
}

double ode_residual(const CoefficientSet& coeffs, const DerivativeStack& y,
                    const MatrixFunction* forcing) {
    coeffs.validate();
    const int r = coeffs.order;
    if (y.max_order() < r - 1) throw StructuralError("stack lacks orders below r");
    const Grid& grid = y.grid();
    const auto top = detail::differentiate<CVector>(grid, y.order(r - 1));
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CVector value = top[i];
        for (int k = 0; k < r; ++k) value.noalias() += coeffs.coefficients[k](grid[i]) * y.at(k, i);
        if (forcing != nullptr) value -= (*forcing)(grid[i]).col(0);
        worst = std::max(worst, entry_sum_norm(value));
    }
    return worst;
}

}  // namespace fredholm
