#include "fredholm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fredholm {

Interval::Interval(double a, double b) : a_(a), b_(b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        std::ostringstream msg;
        msg << "interval requires finite a < b, got [" << a << ", " << b << "]";
        throw StructuralError(msg.str());
    }
}

Grid::Grid(Interval interval, std::size_t count) : interval_(interval) {
    if (count < 2) throw StructuralError("grid needs at least two nodes");
    step_ = interval.length() / static_cast<double>(count - 1);
    nodes_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        nodes_[i] = interval.a() + static_cast<double>(i) * step_;
    }
    nodes_.back() = interval.b();
}

std::size_t Grid::cell_of(double t) const {
    const double s = (t - interval_.a()) / step_;
    if (s <= 0.0) return 0;
    const auto last_cell = nodes_.size() - 2;
    const auto i = static_cast<std::size_t>(std::floor(s));
    return std::min(i, last_cell);
}

LebesgueExponent::LebesgueExponent(double p) : p_(p) {
    if (std::isnan(p) || p < 1.0) throw StructuralError("Lebesgue exponent must lie in [1, inf]");
    if (p == 1.0) {
        conjugate_ = kInfinity;
    } else if (p == kInfinity) {
        conjugate_ = 1.0;
    } else {
        conjugate_ = p / (p - 1.0);
    }
}

// ---------------------------------------------------------------------------

namespace detail {

namespace {

template <typename T>
T lagrange(const Grid& grid, std::span<const T> values, double t) {
    const std::size_t n = grid.size();
    const std::size_t width = std::min<std::size_t>(4, n);
    std::size_t first = grid.cell_of(t);
    first = first >= 1 ? first - 1 : 0;
    first = std::min(first, n - width);

    T result = values[first] * 0.0;
    for (std::size_t j = first; j < first + width; ++j) {
        double w = 1.0;
        for (std::size_t k = first; k < first + width; ++k) {
            if (k != j) w *= (t - grid[k]) / (grid[j] - grid[k]);
        }
        result += values[j] * w;
    }
    return result;
}

}  // namespace

template <typename T>
T interpolate(const Grid& grid, std::span<const T> values, const std::span<const T>* slopes,
              double t) {
    if (values.size() != grid.size()) throw StructuralError("sample count does not match grid");
    if (slopes == nullptr) return lagrange(grid, values, t);

    const std::size_t i = grid.cell_of(t);
    const double h = grid.step();
    const double s = (t - grid[i]) / h;
    if (t == grid[i]) return values[i];
    if (t == grid[i + 1]) return values[i + 1];
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return values[i] * h00 + (*slopes)[i] * (h10 * h) + values[i + 1] * h01 +
           (*slopes)[i + 1] * (h11 * h);
}

template <typename T>
std::vector<T> differentiate(const Grid& grid, std::span<const T> values) {
    const std::size_t n = grid.size();
    if (n < 5) throw StructuralError("finite differences need at least five nodes");
    const double h = grid.step();
    std::vector<T> out(n);
    // Five-point stencils: centered inside, shifted near the ends.
    static constexpr double kForward[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
    static constexpr double kShifted[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};
    static constexpr double kCentered[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
    auto apply = [&](std::size_t first, const double* w, double sign) -> T {
        T acc = values[first] * 0.0;
        for (std::size_t k = 0; k < 5; ++k) acc += values[first + k] * w[k];
        return acc * (sign / (12.0 * h));
    };
    out[0] = apply(0, kForward, 1.0);
    out[1] = apply(0, kShifted, 1.0);
    for (std::size_t i = 2; i + 2 < n; ++i) out[i] = apply(i - 2, kCentered, 1.0);
    // Mirror images of the forward stencils at the right end.
    auto apply_reversed = [&](std::size_t last, const double* w) -> T {
        T acc = values[last] * 0.0;
        for (std::size_t k = 0; k < 5; ++k) acc += values[last - k] * w[k];
        return acc * (-1.0 / (12.0 * h));
    };
    out[n - 2] = apply_reversed(n - 1, kShifted);
    out[n - 1] = apply_reversed(n - 1, kForward);
    return out;
}

template CVector interpolate<CVector>(const Grid&, std::span<const CVector>,
                                      const std::span<const CVector>*, double);
template CMatrix interpolate<CMatrix>(const Grid&, std::span<const CMatrix>,
                                      const std::span<const CMatrix>*, double);
template std::vector<CVector> differentiate<CVector>(const Grid&, std::span<const CVector>);
template std::vector<CMatrix> differentiate<CMatrix>(const Grid&, std::span<const CMatrix>);

}  // namespace detail

// ---------------------------------------------------------------------------

DerivativeStack::DerivativeStack(Grid grid, int dimension, int max_order)
    : grid_(std::move(grid)), dimension_(dimension), max_order_(max_order) {
    if (dimension < 1) throw StructuralError("stack dimension must be positive");
    if (max_order < 0) throw StructuralError("stack order must be non-negative");
    samples_.assign(static_cast<std::size_t>(max_order) + 1,
                    std::vector<CVector>(grid_.size(), CVector::Zero(dimension)));
}

DerivativeStack DerivativeStack::from_function(const Grid& grid, int dimension, int max_order,
                                               const Generator& fn) {
    DerivativeStack stack(grid, dimension, max_order);
    for (int k = 0; k <= max_order; ++k) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CVector v = fn(grid[i], k);
            if (v.size() != dimension) throw StructuralError("generator returned wrong dimension");
            stack.at(k, i) = std::move(v);
        }
    }
    return stack;
}

CVector DerivativeStack::evaluate(int order, double t) const {
    if (order < 0 || order > max_order_) throw StructuralError("derivative order out of range");
    if (!grid_.interval().contains(t)) throw StructuralError("evaluation point outside interval");
    std::span<const CVector> values = samples_[order];
    if (order < max_order_) {
        std::span<const CVector> slopes = samples_[order + 1];
        return detail::interpolate(grid_, values, &slopes, t);
    }
    return detail::interpolate<CVector>(grid_, values, nullptr, t);
}

void DerivativeStack::check_compatible(const DerivativeStack& other) const {
    if (!(grid_ == other.grid_) || dimension_ != other.dimension_ ||
        max_order_ != other.max_order_) {
        throw StructuralError("derivative stacks differ in grid, dimension or order");
    }
}

DerivativeStack& DerivativeStack::operator+=(const DerivativeStack& other) {
    check_compatible(other);
    for (std::size_t k = 0; k < samples_.size(); ++k) {
        for (std::size_t i = 0; i < samples_[k].size(); ++i) samples_[k][i] += other.samples_[k][i];
    }
    return *this;
}

DerivativeStack& DerivativeStack::operator*=(Complex c) {
    for (auto& order : samples_) {
        for (auto& v : order) v *= c;
    }
    return *this;
}

DerivativeStack DerivativeStack::truncated(int max_order) const {
    if (max_order > max_order_) throw StructuralError("cannot truncate to a higher order");
    DerivativeStack out(grid_, dimension_, max_order);
    for (int k = 0; k <= max_order; ++k) out.samples_[k] = samples_[k];
    return out;
}

MatrixTrajectory::MatrixTrajectory(Grid grid, int rows, int cols, int max_order)
    : grid_(std::move(grid)), rows_(rows), cols_(cols), max_order_(max_order) {
    if (rows < 1 || cols < 1) throw StructuralError("trajectory shape must be positive");
    if (max_order < 0) throw StructuralError("trajectory order must be non-negative");
    samples_.assign(static_cast<std::size_t>(max_order) + 1,
                    std::vector<CMatrix>(grid_.size(), CMatrix::Zero(rows, cols)));
}

CMatrix MatrixTrajectory::evaluate(int order, double t) const {
    if (order < 0 || order > max_order_) throw StructuralError("derivative order out of range");
    if (!grid_.interval().contains(t)) throw StructuralError("evaluation point outside interval");
    std::span<const CMatrix> values = samples_[order];
    if (order < max_order_) {
        std::span<const CMatrix> slopes = samples_[order + 1];
        return detail::interpolate(grid_, values, &slopes, t);
    }
    return detail::interpolate<CMatrix>(grid_, values, nullptr, t);
}

DerivativeStack MatrixTrajectory::column(int j) const {
    if (j < 0 || j >= cols_) throw StructuralError("column index out of range");
    DerivativeStack out(grid_, rows_, max_order_);
    for (int k = 0; k <= max_order_; ++k) {
        for (std::size_t i = 0; i < grid_.size(); ++i) out.at(k, i) = samples_[k][i].col(j);
    }
    return out;
}

// ---------------------------------------------------------------------------

double lp_norm(const Grid& grid, std::span<const CVector> values, const LebesgueExponent& p) {
    if (values.size() != grid.size()) throw StructuralError("sample count does not match grid");
    if (p.is_infinite()) {
        double best = 0.0;
        for (const auto& v : values) best = std::max(best, entry_sum_norm(v));
        return best;
    }
    const double e = p.value();
    const std::size_t n = values.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        sum += w * std::pow(entry_sum_norm(values[i]), e);
    }
    return std::pow(sum * grid.step(), 1.0 / e);
}

double sobolev_norm(const DerivativeStack& stack, const LebesgueExponent& p, int up_to) {
    if (up_to > stack.max_order()) throw StructuralError("Sobolev order exceeds stored orders");
    double total = 0.0;
    for (int k = 0; k <= up_to; ++k) total += lp_norm(stack.grid(), stack.order(k), p);
    return total;
}

double sobolev_norm(const DerivativeStack& stack, const LebesgueExponent& p) {
    return sobolev_norm(stack, p, stack.max_order());
}

DerivativeStack resample(const DerivativeStack& stack, const Grid& new_grid) {
    if (!(stack.grid().interval() == new_grid.interval())) {
        throw StructuralError("resampling requires the same interval");
    }
    DerivativeStack out(new_grid, stack.dimension(), stack.max_order());
    for (int k = 0; k <= stack.max_order(); ++k) {
        for (std::size_t i = 0; i < new_grid.size(); ++i) out.at(k, i) = stack.evaluate(k, new_grid[i]);
    }
    return out;
}

}  // namespace fredholm
