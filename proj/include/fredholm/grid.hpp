#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "fredholm/types.hpp"

namespace fredholm {

/// Finite interval [a, b] with a < b.
class Interval {
public:
    Interval(double a, double b);

    double a() const { return a_; }
    double b() const { return b_; }
    double length() const { return b_ - a_; }
    bool contains(double t) const { return t >= a_ && t <= b_; }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double a_;
    double b_;
};

/// Uniform grid over an interval, endpoints included.
class Grid {
public:
    static constexpr std::size_t kDefaultNodes = 1001;

    explicit Grid(Interval interval, std::size_t count = kDefaultNodes);

    const Interval& interval() const { return interval_; }
    std::size_t size() const { return nodes_.size(); }
    double step() const { return step_; }
    double operator[](std::size_t i) const { return nodes_[i]; }
    std::span<const double> nodes() const { return nodes_; }

    // Index of the cell [t_i, t_{i+1}] containing t (clamped to the grid).
    std::size_t cell_of(double t) const;

    friend bool operator==(const Grid& x, const Grid& y) {
        return x.interval_ == y.interval_ && x.nodes_.size() == y.nodes_.size();
    }

private:
    Interval interval_;
    std::vector<double> nodes_;
    double step_;
};

/// Lebesgue exponent p in [1, inf] together with its conjugate p'.
class LebesgueExponent {
public:
    static constexpr double kInfinity = std::numeric_limits<double>::infinity();

    explicit LebesgueExponent(double p);
    static LebesgueExponent infinity() { return LebesgueExponent(kInfinity); }

    double value() const { return p_; }
    double conjugate() const { return conjugate_; }
    bool is_infinite() const { return p_ == kInfinity; }

    friend bool operator==(const LebesgueExponent& x, const LebesgueExponent& y) {
        return x.p_ == y.p_;
    }

private:
    double p_;
    double conjugate_;
};

/// Samples of a vector-valued function and its derivatives 0..max_order on a
/// grid. Order k, node i is an m-vector.
class DerivativeStack {
public:
    using Generator = std::function<CVector(double t, int order)>;

    DerivativeStack(Grid grid, int dimension, int max_order);

    static DerivativeStack from_function(const Grid& grid, int dimension, int max_order,
                                         const Generator& fn);

    const Grid& grid() const { return grid_; }
    int dimension() const { return dimension_; }
    int max_order() const { return max_order_; }

    const CVector& at(int order, std::size_t node) const { return samples_[order][node]; }
    CVector& at(int order, std::size_t node) { return samples_[order][node]; }
    std::span<const CVector> order(int k) const { return samples_[k]; }

    // Value of derivative `order` at an arbitrary point of the interval.
    // Uses cubic Hermite interpolation with the next stored order when one
    // exists, otherwise four-point Lagrange interpolation.
    CVector evaluate(int order, double t) const;

    DerivativeStack& operator+=(const DerivativeStack& other);
    DerivativeStack& operator*=(Complex c);
    friend DerivativeStack operator+(DerivativeStack x, const DerivativeStack& y) { return x += y; }
    friend DerivativeStack operator-(DerivativeStack x, const DerivativeStack& y) {
        DerivativeStack neg = y;
        neg *= Complex(-1.0);
        return x += neg;
    }
    friend DerivativeStack operator*(Complex c, DerivativeStack y) { return y *= c; }

    // Drops orders above `max_order`.
    DerivativeStack truncated(int max_order) const;

private:
    void check_compatible(const DerivativeStack& other) const;

    Grid grid_;
    int dimension_;
    int max_order_;
    std::vector<std::vector<CVector>> samples_;
};

/// Samples of an m x m matrix function and its derivatives 0..max_order.
class MatrixTrajectory {
public:
    MatrixTrajectory(Grid grid, int rows, int cols, int max_order);

    const Grid& grid() const { return grid_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int max_order() const { return max_order_; }

    const CMatrix& at(int order, std::size_t node) const { return samples_[order][node]; }
    CMatrix& at(int order, std::size_t node) { return samples_[order][node]; }

    CMatrix evaluate(int order, double t) const;

    // Column j as a vector-valued derivative stack.
    DerivativeStack column(int j) const;

private:
    Grid grid_;
    int rows_;
    int cols_;
    int max_order_;
    std::vector<std::vector<CMatrix>> samples_;
};

/// Composite-trapezoid L_p norm of grid samples; |.| is the entrywise sum.
double lp_norm(const Grid& grid, std::span<const CVector> values, const LebesgueExponent& p);

/// Sum over orders 0..max_order of the L_p norms of the stored derivatives.
double sobolev_norm(const DerivativeStack& stack, const LebesgueExponent& p);

/// Same as sobolev_norm but summing only orders 0..up_to.
double sobolev_norm(const DerivativeStack& stack, const LebesgueExponent& p, int up_to);

/// Cubic interpolation of every stored order onto a grid over the same interval.
DerivativeStack resample(const DerivativeStack& stack, const Grid& new_grid);

namespace detail {

// Interpolation of samples (node values, optional derivative samples) at t.
template <typename T>
T interpolate(const Grid& grid, std::span<const T> values, const std::span<const T>* slopes,
              double t);

// Fourth-order finite-difference derivative of node samples; one-sided
// stencils at the ends. Requires at least five nodes.
template <typename T>
std::vector<T> differentiate(const Grid& grid, std::span<const T> values);

}  // namespace detail

}  // namespace fredholm
