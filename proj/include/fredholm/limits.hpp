#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fredholm/solver.hpp"

namespace fredholm {

/// Direction in which the family parameter approaches its limit. Parameter
/// families use eps -> 0+ on a decreasing schedule; sequence families use
/// k -> infinity on an increasing one. Rows are always processed in schedule
/// order, so the trend logic is shared.
enum class LimitDirection { ParameterToZero, IndexToInfinity };

inline const std::vector<double> kDefaultSchedule = {1e-1, 1e-2, 1e-3, 1e-4};

struct ProblemFamily {
    std::vector<double> schedule = kDefaultSchedule;
    ProblemSpec at_zero;
    std::function<ProblemSpec(double)> at;
    LimitDirection direction = LimitDirection::ParameterToZero;
};

/// "Tends to zero" on a finite schedule: the last value is below `absolute`
/// and at most first / relative_drop, or at the roundoff floor.
struct TrendRule {
    double absolute = 1e-6;
    double relative_drop = 100.0;
    // A last value at or below this is treated as exactly zero.
    double noise_floor = 1e-12;
    // Boundedness: max over the schedule <= growth_limit * max(first, absolute).
    double growth_limit = 10.0;
};

bool tends_to_zero(const std::vector<double>& values, const TrendRule& rule = {});
bool stays_bounded(const std::vector<double>& values, const TrendRule& rule = {});

/// Least-squares slope of log(value) against log(parameter), skipping
/// non-positive values. NaN when fewer than two points remain.
double loglog_slope(const std::vector<double>& parameters, const std::vector<double>& values);

struct LimitOptions {
    std::size_t nodes = Grid::kDefaultNodes;
    RankPolicy rank_policy;
    TrendRule trend;
};

// -- Conditions (0), (I), (II) ---------------------------------------------

/// The limit problem is square with a full-rank characteristic matrix.
bool check_condition_0(const ProblemSpec& at_zero, const LimitOptions& options = {});

struct ConditionTable {
    std::vector<double> parameters;
    std::vector<std::vector<double>> values;  // [row][column]
    std::vector<std::string> columns;
    std::vector<bool> column_verdicts;
    bool verdict = false;

    std::vector<double> column(std::size_t c) const;
};

/// ||A_k(eps) - A_k(0)||_{n,p} per coefficient, one column per k.
ConditionTable check_condition_I(const ProblemFamily& family, const LimitOptions& options = {});

/// {1, t, t^2, sin t, cos t} times each coordinate vector, orders 0..top_order.
std::vector<DerivativeStack> default_probes(const Grid& grid, int dimension, int top_order);

/// |B(eps) y - B(0) y| for each probe, one column per probe.
ConditionTable check_condition_II(const ProblemFamily& family,
                                  const std::vector<DerivativeStack>& probes,
                                  const LimitOptions& options = {});

// -- Multipoint families ----------------------------------------------------

struct SeriesSnapshot {
    std::vector<double> points;                 // t_{j,k}(eps), k = 1..omega_j
    std::vector<std::vector<CMatrix>> matrices;  // [k][d], d = 0..n+r-1
};

struct MultipointSeries {
    // Limit point t_j; absent for the zero series.
    std::optional<double> limit_point;
    // beta_j^(d), d = 0..n+r-1; ignored for the zero series.
    std::vector<CMatrix> limit_matrices;
    std::function<SeriesSnapshot(double eps)> at;

    bool is_zero_series() const { return !limit_point.has_value(); }
};

struct MultipointFamily {
    int rows = 1;       // number of scalar conditions, r*m
    int dimension = 1;  // m
    int top_order = 1;  // n+r; matrices cover orders 0..top_order-1
    std::vector<MultipointSeries> series;
    std::function<CVector(double eps)> data;  // q(eps); data(0) is the limit
    std::size_t series_cap = 64;

    BoundaryOperator boundary_at(double eps) const;
    BoundaryOperator limit_boundary() const;
    SeriesSnapshot snapshot(std::size_t j, double eps) const;  // validated
};

struct AssumptionCheck {
    std::string name;
    std::vector<double> values;  // per scheduled eps
    bool verdict = false;
    bool required = false;
};

struct AssumptionReport {
    std::vector<double> parameters;
    std::vector<AssumptionCheck> checks;  // alpha, beta, gamma, delta, gamma_p, gamma_prime
    bool verdict = false;                 // all required checks pass

    const AssumptionCheck& get(const std::string& name) const;
};

AssumptionReport check_multipoint_assumptions(const MultipointFamily& family,
                                              const LebesgueExponent& p,
                                              const std::vector<double>& schedule,
                                              const TrendRule& rule = {});

/// Replaces the boundary operator and boundary data of `base(eps)` by the
/// multipoint ones; base(0) supplies the limit equation.
ProblemFamily multipoint_problem_family(const MultipointFamily& family,
                                        const std::function<ProblemSpec(double)>& base,
                                        std::vector<double> schedule);

// -- Limit experiments --------------------------------------------------------

/// max |M(eps) - M(0)| entrywise per row.
ConditionTable characteristic_convergence(const ProblemFamily& family,
                                          const LimitOptions& options = {});

struct SemicontinuityResult {
    std::vector<double> parameters;
    std::vector<int> dim_kernel;
    std::vector<int> dim_cokernel;
    int limit_dim_kernel = 0;
    int limit_dim_cokernel = 0;
    // Parameters whose row violates dim(eps) <= dim(0).
    std::vector<double> violations;
    // The inequalities hold on every scheduled parameter from this one onward
    // (towards the limit); empty when they fail at the last row.
    std::optional<double> threshold;
    bool holds_at_limit_end = false;
};

SemicontinuityResult semicontinuity_check(const ProblemFamily& family,
                                          const LimitOptions& options = {});

struct LimitRow {
    double parameter = 0.0;
    std::vector<double> coefficient_deviation;  // per k
    double characteristic_deviation = 0.0;
    int dim_kernel = 0;
    int dim_cokernel = 0;
    bool well_posed = false;
    std::optional<double> solution_error;  // ||y(eps) - y(0)||_{n+r,p}
    std::optional<double> discrepancy;     // of y(0) in the eps-problem
    std::optional<double> ratio;           // error / discrepancy
    std::vector<std::string> flags;
};

struct LimitReport {
    std::vector<LimitRow> rows;
    bool condition_0 = false;
    bool condition_I = false;
    bool characteristic_convergence = false;
    bool solution_convergence = false;
    // Empirical bracket of error / discrepancy over rows where it is defined.
    std::optional<double> ratio_min;
    std::optional<double> ratio_max;
    double error_slope = 0.0;  // log-log slope of the solution error
};

LimitReport convergence_experiment(const ProblemFamily& family, const LimitOptions& options = {});

}  // namespace fredholm
